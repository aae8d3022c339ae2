"""Command-line front end: ``magwave <subcommand> [config.ini] [--out DIR]``.

Every run writes ``result.json`` (deterministic, embeds the resolved
config), ``run_meta.json`` (timestamp and argv) and CSV tables into the
output directory. The directory is ``--out``, else ``$MAGWAVE_OUT``, else
``./magwave-out``.

Exit codes: 0 success, 1 IO failure, 2 invalid config or usage, 3 solver
non-convergence (outputs are still written).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import datetime as _dt
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis.bounds import gf_bounds
from .analysis.effective import effective_potential, solve_1d
from .analysis.hardy import HardyWeight, hardy_estimate
from .analysis.sweep import alpha_sweep
from .analysis.weyl import BUMP_H2_SQ, decay_slope, weyl_grid, weyl_residual
from .eigensolve import DEFAULT_SEED, convergence_study, count_below_threshold, solve_waveguide
from .gauge import Field, curl_check, off_support, poincare_gauge, pullback_gauge
from .grid import Grid, grid_with_spacing
from .profiles import Profile, check_discrete_condition

OUT_ENV = "MAGWAVE_OUT"
DEFAULT_OUT = "magwave-out"
COMMANDS = ("spectrum", "sweep", "weyl", "effective1d", "hardy", "gauge-check", "gf-bounds",
            "convergence")

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NOCONV = 0, 1, 2, 3


def _floats(text):
    return tuple(float(t) for t in text.replace(",", " ").split())


def _ints(text):
    return tuple(int(t) for t in text.replace(",", " ").split())


# section -> key -> (parser, default)
SCHEMA = {
    "profile": {"family": (str, "zero"), "amplitude": (float, 0.0), "center": (float, 0.0),
                "width": (float, 1.0)},
    "field": {"family": (str, "zero"), "strength": (float, 0.0), "center_x": (float, 0.0),
              "center_y": (float, math.pi / 2), "radius": (float, 1.0), "nquad": (int, 64)},
    "grid": {"L": (float, 10.0), "Nx": (int, 99), "Ny": (int, 31)},
    "solver": {"k": (int, 3), "tol": (float, 1e-10), "max_iter": (int, 5000),
               "seed": (int, DEFAULT_SEED)},
    "sweep": {"alphas": (_floats, (0.01, 0.02, 0.05, 0.1, 0.2, 0.4)), "bisect_steps": (int, 8),
              "resolution": (str, "auto")},
    "weyl": {"k": (float, 0.0), "n": (_ints, (4, 8, 16, 32)), "cells_per_unit": (float, 48.0),
             "Ny": (int, 63), "max_hx": (float, 0.05)},
    "hardy": {"weight": (str, "constant"), "height": (float, 0.0), "half_width": (float, 5.0),
              "steepness": (float, 1.0), "L_values": (_floats, (10.0, 20.0, 40.0)),
              "hx": (float, 0.25), "Ny": (int, 31)},
    "gf": {"x_min": (float, -50.0), "x_max": (float, 50.0), "samples": (int, 4001),
           "denominator": (str, "sup")},
    "effective1d": {"L1": (float, 50.0), "N1": (int, 4000), "x_min": (float, -50.0),
                    "x_max": (float, 50.0), "samples": (int, 2001)},
    "convergence": {"L_values": (_floats, (10.0, 20.0, 40.0)), "hx": (float, 0.4),
                    "Ny": (int, 15), "levels": (int, 3)},
    "gauge": {"h_fd": (float, 1e-3), "h_fd_ladder": (_floats, (4e-3, 2e-3, 1e-3)),
              "points": (int, 41)},
}


class ConfigError(ValueError):
    def __init__(self, key: str, reason: str):
        super().__init__(f"invalid config key {key}: {reason}")
        self.key = key


def load_config(path) -> dict:
    """Parse an INI file (or None for all defaults) into typed sections."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    if path is not None:
        with open(path) as fh:
            cp.read_file(fh)
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"[{section}]", "unknown section")
        for key in cp[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
    cfg = {}
    for section, keys in SCHEMA.items():
        block = {}
        for key, (parse, default) in keys.items():
            if cp.has_option(section, key):
                raw = cp.get(section, key).strip()
                try:
                    block[key] = parse(raw)
                except ValueError:
                    raise ConfigError(f"{section}.{key}", f"cannot parse {raw!r}") from None
            else:
                block[key] = default
        cfg[section] = block
    return cfg


def _check(cond, key, reason):
    if not cond:
        raise ConfigError(key, reason)


def _build(cfg: dict) -> dict:
    """Construct and validate every block before any computation."""
    out = {}
    pc = cfg["profile"]
    try:
        out["profile"] = Profile(pc["family"], pc["amplitude"], pc["center"], pc["width"])
    except ValueError as exc:
        raise ConfigError("profile", str(exc)) from None
    fc = cfg["field"]
    try:
        out["field"] = Field(fc["family"], fc["strength"], (fc["center_x"], fc["center_y"]),
                             fc["radius"])
    except ValueError as exc:
        raise ConfigError("field", str(exc)) from None
    _check(fc["nquad"] >= 8, "field.nquad", "must be >= 8")
    gc = cfg["grid"]
    try:
        out["grid"] = Grid(gc["L"], gc["Nx"], gc["Ny"])
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from None

    sc = cfg["solver"]
    _check(sc["k"] >= 1, "solver.k", "must be >= 1")
    _check(sc["k"] < out["grid"].size, "solver.k", "must be smaller than the grid size")
    _check(sc["tol"] > 0, "solver.tol", "must be positive")
    _check(sc["max_iter"] >= 1, "solver.max_iter", "must be positive")

    sw = cfg["sweep"]
    a = sw["alphas"]
    _check(len(a) > 0, "sweep.alphas", "must be non-empty")
    _check(all(x > 0 for x in a) and all(y > x for x, y in zip(a, a[1:])),
           "sweep.alphas", "must be positive and strictly ascending")
    _check(sw["bisect_steps"] >= 0, "sweep.bisect_steps", "must be >= 0")
    if sw["resolution"] != "auto":
        try:
            _check(float(sw["resolution"]) >= 0, "sweep.resolution", "must be 'auto' or >= 0")
        except ValueError:
            raise ConfigError("sweep.resolution", "must be 'auto' or a number") from None

    wc = cfg["weyl"]
    _check(len(wc["n"]) >= 2 and all(n >= 1 for n in wc["n"]), "weyl.n",
           "need at least two positive integers")
    lo, hi = out["field"].x_extent()
    if not out["field"].is_zero:
        for n in wc["n"]:
            _check(not (hi > n and lo < 2 * n), "weyl.n",
                   f"field support overlaps the quasi-mode support for n={n}")
    _check(wc["Ny"] >= 3 and wc["cells_per_unit"] > 0 and wc["max_hx"] > 0, "weyl",
           "Ny >= 3 and positive spacings required")

    hc = cfg["hardy"]
    try:
        out["weight"] = HardyWeight(hc["weight"], hc["height"], hc["half_width"], hc["steepness"])
    except ValueError as exc:
        raise ConfigError("hardy.weight", str(exc)) from None
    _check(len(hc["L_values"]) > 0 and all(L > 0 for L in hc["L_values"]), "hardy.L_values",
           "must be non-empty and positive")
    try:
        for L in hc["L_values"]:
            grid_with_spacing(L, hc["hx"], hc["Ny"])
    except ValueError as exc:
        raise ConfigError("hardy.hx", str(exc)) from None

    gf = cfg["gf"]
    _check(gf["denominator"] in ("sup", "inf"), "gf.denominator", "must be 'sup' or 'inf'")
    _check(gf["samples"] >= 3 and gf["x_max"] > gf["x_min"], "gf.samples",
           "need >= 3 samples on a non-empty window")

    ec = cfg["effective1d"]
    _check(ec["L1"] > 0, "effective1d.L1", "must be positive")
    _check(ec["N1"] >= 100, "effective1d.N1", "must be >= 100")
    _check(ec["samples"] >= 1 and ec["x_max"] >= ec["x_min"], "effective1d.samples",
           "need a non-empty sample window")

    cc = cfg["convergence"]
    _check(len(set(cc["L_values"])) >= 2, "convergence.L_values", "need two distinct values")
    _check(cc["levels"] >= 3, "convergence.levels", "must be >= 3")
    try:
        for L in cc["L_values"]:
            grid_with_spacing(L, cc["hx"], cc["Ny"])
    except ValueError as exc:
        raise ConfigError("convergence.hx", str(exc)) from None

    gg = cfg["gauge"]
    _check(gg["h_fd"] > 0, "gauge.h_fd", "must be positive")
    _check(len(gg["h_fd_ladder"]) >= 2 and all(h > 0 for h in gg["h_fd_ladder"]),
           "gauge.h_fd_ladder", "need at least two positive steps")
    _check(gg["points"] >= 2, "gauge.points", "must be >= 2")
    return out


# ---------------------------------------------------------------- runners

def _solver(cfg):
    s = cfg["solver"]
    return dict(tol=s["tol"], max_iter=s["max_iter"], seed=s["seed"])


def run_spectrum(cfg, obj):
    grid, p, B = obj["grid"], obj["profile"], obj["field"]
    s = solve_waveguide(p, B, grid, k=cfg["solver"]["k"], nquad=cfg["field"]["nquad"], **_solver(cfg))
    count, margin = count_below_threshold(s, s.delta)
    result = {"spectrum": s.to_dict(), "count_below": count, "margin": margin,
              "lambda1": float(s.eigenvalues[0]) if len(s.eigenvalues) else None,
              "truncation_reference": 1.0 + (math.pi / (2.0 * grid.L)) ** 2}
    rows = [(i + 1, v, r, bool(f)) for i, (v, r, f) in
            enumerate(zip(s.eigenvalues, s.residual_norms, s.below_threshold))]
    tables = {"eigenvalues.csv": (["index", "eigenvalue", "residual", "below_threshold"], rows)}
    lam1 = f"{s.eigenvalues[0]:.12g}" if len(s.eigenvalues) else "n/a"
    summary = [f"lambda_1 = {lam1}  (delta = {s.delta:.3g})",
               f"eigenvalues below 1 - delta: {count}",
               f"converged: {s.converged}"]
    return result, tables, summary, s.converged


def run_sweep(cfg, obj):
    sw = cfg["sweep"]
    res = sw["resolution"] if sw["resolution"] == "auto" else float(sw["resolution"])
    r = alpha_sweep(obj["profile"], obj["field"], sw["alphas"], obj["grid"],
                    bisect_steps=sw["bisect_steps"], resolution=res, **_solver(cfg))
    rows = list(zip(r.alphas, r.lambda_magnetic, r.lambda_nonmagnetic, r.flag_magnetic,
                    r.flag_nonmagnetic, r.converged, r.resolved))
    tables = {"sweep.csv": (["alpha", "lambda1_magnetic", "lambda1_nonmagnetic", "flag_magnetic",
                             "flag_nonmagnetic", "converged", "resolved"], rows)}
    summary = [f"alpha  lambda_mag  lambda_nonmag   (threshold 1 - {r.delta:.3g})"]
    summary += [f"{a:.6g}  {m:.10g}  {n:.10g}" for a, m, n, *_ in rows]
    summary.append(f"alpha_critical bracket: {r.alpha_critical}")
    extra = {"sweep.dat": "\n".join(["# alpha lambda1_magnetic lambda1_nonmagnetic",
                                     *r.gnuplot_rows()]) + "\n"}
    return r.to_dict(), tables, summary, bool(np.all(r.converged)), extra


def run_weyl(cfg, obj):
    wc = cfg["weyl"]
    rows = []
    for n in wc["n"]:
        grid = weyl_grid(n, wc["cells_per_unit"], wc["Ny"], wc["max_hx"])
        res, norm = weyl_residual(obj["profile"], obj["field"], wc["k"], n, grid,
                                  cfg["field"]["nquad"])
        rows.append((n, grid.L, grid.Nx, grid.Ny, res, norm, res * n**4 / BUMP_H2_SQ,
                     norm / (math.pi / 2)))
    slope = decay_slope([r[0] for r in rows], [r[4] for r in rows])
    result = {"rows": [dict(zip(("n", "L", "Nx", "Ny", "residual_sq", "norm_sq",
                                 "flat_identity_ratio", "norm_ratio"), r)) for r in rows],
              "slope": slope}
    tables = {"weyl.csv": (["n", "L", "Nx", "Ny", "residual_sq", "norm_sq", "flat_identity_ratio",
                            "norm_ratio"], rows)}
    summary = [f"n={r[0]:>3d}  residual_sq={r[4]:.6e}  norm_sq/(pi/2)={r[7]:.6f}" for r in rows]
    summary.append(f"log-log slope: {slope:.4f}")
    return result, tables, summary, True


def run_effective1d(cfg, obj):
    ec = cfg["effective1d"]
    p = obj["profile"]
    xs = np.linspace(ec["x_min"], ec["x_max"], ec["samples"])
    V = effective_potential(p, xs)
    cond = check_discrete_condition(p, np.union1d(xs, p.default_samples()))
    vals = solve_1d(V, ec["L1"], ec["N1"])
    result = {"condition_satisfied": bool(cond.satisfied), "max_violation": float(cond.max_violation),
              "V_min": float(np.min(V.V)), "V_max": float(np.max(V.V)),
              "negative_eigenvalues": [float(v) for v in vals]}
    tables = {"potential.csv": (["x", "V"], list(zip(xs, V.V))),
              "eigenvalues_1d.csv": (["index", "eigenvalue"],
                                     [(i + 1, v) for i, v in enumerate(vals)])}
    if len(vals):
        summary = [f"{len(vals)} negative eigenvalue(s); lowest {vals[0]:.10g}"]
    else:
        summary = ["no negative eigenvalues"]
    summary.append(f"sign condition satisfied: {cond.satisfied}")
    return result, tables, summary, True


def run_hardy(cfg, obj):
    hc = cfg["hardy"]
    tol = cfg["solver"]["tol"]
    rows = []
    for L in hc["L_values"]:
        grid = grid_with_spacing(L, hc["hx"], hc["Ny"])
        cf = hardy_estimate(obj["field"], obj["weight"], grid, tol, cfg["field"]["nquad"],
                            cfg["solver"]["seed"])
        c0 = hardy_estimate(Field(), obj["weight"], grid, tol, seed=cfg["solver"]["seed"])
        rows.append((L, cf, c0, cf / c0 if c0 > 0 else None))
    result = {"rows": [dict(zip(("L", "C_field", "C_zero_field", "ratio"), r)) for r in rows]}
    tables = {"hardy.csv": (["L", "C_field", "C_zero_field", "ratio"], rows)}
    summary = ["L  C_est(field)  C_est(zero field)"]
    summary += [f"{r[0]:g}  {r[1]:.6g}  {r[2]:.6g}" for r in rows]
    return result, tables, summary, True


def run_gauge_check(cfg, obj):
    B, gg, nquad = obj["field"], cfg["gauge"], cfg["field"]["nquad"]
    x0, _ = B.center
    m = gg["points"]
    X, Y = np.meshgrid(np.linspace(x0 - 1.5 * B.radius, x0 + 1.5 * B.radius, m),
                       np.linspace(0.0, math.pi, m), indexing="ij")
    err = curl_check(B, (X, Y), nquad, gg["h_fd"])
    ladder = [(h, curl_check(B, (X, Y), nquad, h)) for h in gg["h_fd_ladder"]]
    hs, es = np.array(ladder).T
    order = float(np.polyfit(np.log(hs), np.log(es), 1)[0]) if np.all(es > 0) else None
    Xg, Yg = obj["grid"].mesh()
    a1, a2 = poincare_gauge(B, Xg, Yg, nquad)
    mask = off_support(B, Xg, Yg)
    off_max = float(max(np.max(np.abs(a1[mask]), initial=0.0), np.max(np.abs(a2[mask]), initial=0.0)))
    result = {"curl_error": err, "h_fd": gg["h_fd"], "ladder": [list(r) for r in ladder],
              "order": order, "off_support_points": int(mask.sum()),
              "off_support_max_abs": off_max}
    tables = {"curl_ladder.csv": (["h_fd", "curl_error"], ladder)}
    summary = [f"curl error at h_fd={gg['h_fd']:g}: {err:.3e}",
               f"observed order: {order}",
               f"max |A| off the ray-support region ({int(mask.sum())} nodes): {off_max:.3g}"]
    return result, tables, summary, True


def run_gf_bounds(cfg, obj):
    gf = cfg["gf"]
    p, grid = obj["profile"], obj["grid"]
    gs = pullback_gauge(obj["field"], p, grid, cfg["field"]["nquad"])
    xs = np.linspace(gf["x_min"], gf["x_max"], gf["samples"])
    rep = gf_bounds(p, gs.sup_a1, gs.sup_a2, xs, gf["denominator"])
    result = rep.to_dict() | {"sup_a1": gs.sup_a1, "sup_a2": gs.sup_a2}
    tables = {"gf.csv": (["x", "G1", "G2", "dG1", "d2G1"],
                         list(zip(xs, rep.G1, rep.G2, rep.dG1, rep.d2G1)))}
    summary = [f"fitted C = {rep.C:.6g}  (||g|| = {rep.g_norm:.6g}, {rep.denominator})",
               f"sup |a1| = {gs.sup_a1:.6g}, sup |a2| = {gs.sup_a2:.6g}"]
    return result, tables, summary, True


def run_convergence(cfg, obj):
    cc = cfg["convergence"]
    grids = []
    for L in cc["L_values"]:
        g = grid_with_spacing(L, cc["hx"], cc["Ny"])
        for _ in range(cc["levels"]):
            grids.append(g)
            g = g.refined(2)
    rep = convergence_study(obj["profile"], obj["field"], grids, k=cfg["solver"]["k"], **_solver(cfg))
    rows = []
    for L, levels in rep.levels.items():
        for gd, ev in levels:
            rows.append((L, gd["Nx"], gd["Ny"], *ev))
    k = len(rep.order)
    tables = {"convergence.csv": (["L", "Nx", "Ny", *[f"lambda{m + 1}" for m in range(k)]], rows)}
    summary = [f"observed orders: {[round(float(o), 3) for o in rep.order]}",
               f"L sensitivity: {[f'{s:.3e}' for s in rep.L_sensitivity]}",
               f"discrete: {rep.discrete}"]
    return rep.to_dict(), tables, summary, True


RUNNERS = {
    "spectrum": run_spectrum, "sweep": run_sweep, "weyl": run_weyl,
    "effective1d": run_effective1d, "hardy": run_hardy, "gauge-check": run_gauge_check,
    "gf-bounds": run_gf_bounds, "convergence": run_convergence,
}


# ---------------------------------------------------------------- output

def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(payload) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return f"{v:.17g}" if math.isfinite(v) else ""


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="magwave", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}")
    sub.required = True
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", nargs="?", default=None, help="INI config file (defaults if omitted)")
        sp.add_argument("--out", default=None, help=f"output directory (else ${OUT_ENV})")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK

    try:
        cfg = load_config(args.config)
        obj = _build(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except configparser.Error as exc:
        print(f"error: malformed config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        ret = RUNNERS[args.command](cfg, obj)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result, tables, summary, converged = ret[:4]
    extra = ret[4] if len(ret) > 4 else {}

    payload = {"command": args.command, "config": cfg, "result": result,
               "converged": bool(converged), "version": __version__}
    meta = {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "argv": list(sys.argv if argv is None else argv)}
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "result.json").write_text(dumps(payload))
        (out / "run_meta.json").write_text(dumps(meta))
        for name, (header, rows) in tables.items():
            write_csv(out / name, header, rows)
        for name, text in extra.items():
            (out / name).write_text(text)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"magwave {args.command} -> {out}")
    for line in summary:
        print("  " + line)
    if not converged:
        print("solver did not converge", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
