"""Amplitude sweep locating where the magnetic field stops removing bound states."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..eigensolve import DEFAULT_SEED, DEFAULT_TOL, THRESHOLD, default_delta, solve_waveguide
from ..gauge import Field
from ..grid import Grid
from ..profiles import Profile


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Per-amplitude ground energies with and without the field.

    ``alphas`` includes bisection points, where only the magnetic problem
    is solved (non-magnetic entries are NaN there). ``resolved`` is False for a
    bisection point whose eigenvalue lies within the grid resolution of the
    threshold; such points are reported but never used as bracket ends.
    ``alpha_critical`` is the tightest (alpha_lo, alpha_hi) among converged,
    resolved neighbours with magnetic flag false at alpha_lo and true at
    alpha_hi, or None when the flags never switch. ``monotone`` is False
    when a false flag follows a true one (reported, not assumed).
    """

    alphas: np.ndarray
    lambda_magnetic: np.ndarray
    lambda_nonmagnetic: np.ndarray
    flag_magnetic: np.ndarray
    flag_nonmagnetic: np.ndarray
    converged: np.ndarray
    resolved: np.ndarray
    delta: float
    alpha_critical: tuple | None
    monotone: bool
    resolution: float
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "alphas": [float(a) for a in self.alphas],
            "lambda_magnetic": [float(v) for v in self.lambda_magnetic],
            "lambda_nonmagnetic": [float(v) for v in self.lambda_nonmagnetic],
            "flag_magnetic": [bool(v) for v in self.flag_magnetic],
            "flag_nonmagnetic": [bool(v) for v in self.flag_nonmagnetic],
            "converged": [bool(v) for v in self.converged],
            "resolved": [bool(v) for v in self.resolved],
            "delta": float(self.delta),
            "alpha_critical": None if self.alpha_critical is None else [float(a) for a in self.alpha_critical],
            "monotone": bool(self.monotone),
            "resolution": float(self.resolution),
            "notes": list(self.notes),
        }

    def gnuplot_rows(self):
        for a, m, n in zip(self.alphas, self.lambda_magnetic, self.lambda_nonmagnetic):
            yield f"{a:.17g} {m:.17g} {n:.17g}"


def _coarsen(grid: Grid) -> Grid | None:
    if (grid.Nx + 1) % 2 or (grid.Ny + 1) % 2:
        return None
    try:
        return Grid(grid.L, (grid.Nx + 1) // 2 - 1, (grid.Ny + 1) // 2 - 1)
    except ValueError:
        return None


def _bracket(alphas, flags):
    """Tightest (lo, hi) with flags[lo] false, flags[hi] true and lo < hi adjacent."""
    best = None
    for i in range(len(alphas) - 1):
        if not flags[i] and flags[i + 1]:
            if best is None or alphas[i + 1] - alphas[i] < best[1] - best[0]:
                best = (alphas[i], alphas[i + 1])
    return best


def alpha_sweep(template: Profile, B: Field, alphas, grid: Grid, tol: float = DEFAULT_TOL,
                max_iter: int = 5000, seed: int = DEFAULT_SEED, bisect_steps: int = 8,
                resolution="auto") -> SweepResult:
    """Ground energies over amplitudes for the template's family.

    After the coarse pass the magnetic bracket is bisected (at most
    ``bisect_steps`` extra solves). A midpoint whose eigenvalue lies within
    ``resolution`` of the threshold 1 - delta is not resolvable on this grid
    and ends the bisection. ``resolution="auto"`` estimates the
    discretization error as |lam(grid) - lam(coarse grid)| at the bracket
    endpoints; 0 bisects unconditionally.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("alphas must be non-empty")
    if any(a <= 0 for a in alphas) or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be positive and strictly ascending")
    delta = default_delta(grid.L, tol)
    cut = THRESHOLD - delta
    rows = {}
    notes = []

    def lowest(p, F, g):
        s = solve_waveguide(p, F, g, k=1, tol=tol, max_iter=max_iter, seed=seed)
        return float(s.eigenvalues[0]), s.converged

    def run(a, with_nonmagnetic=True):
        p = template.with_amplitude(a)
        lm, cm = lowest(p, B, grid)
        if with_nonmagnetic:
            ln, cn = lowest(p, Field(), grid)
        else:
            ln, cn = np.nan, True
        rows[a] = (lm, ln, cm and cn, True)

    for a in alphas:
        run(a)

    def table():
        keys = sorted(rows)
        lm = np.array([rows[a][0] for a in keys])
        return keys, lm, np.array([rows[a][2] for a in keys])

    keys, lm, conv = table()
    ok = [i for i in range(len(keys)) if conv[i]]
    if len(ok) < len(keys):
        notes.append(f"{len(keys) - len(ok)} amplitude(s) did not converge and were skipped")
    bracket = _bracket([keys[i] for i in ok], [bool(lm[i] < cut) for i in ok])

    res = 0.0
    if bracket is not None and bisect_steps > 0:
        if resolution == "auto":
            coarse = _coarsen(grid)
            if coarse is None:
                notes.append("grid cannot be coarsened; bisecting without resolution limit")
            else:
                for a in bracket:
                    lc = float(solve_waveguide(template.with_amplitude(a), B, coarse, k=1, tol=tol,
                                               max_iter=max_iter, seed=seed).eigenvalues[0])
                    res = max(res, abs(lc - rows[a][0]))
        else:
            res = float(resolution)
        lo, hi = bracket
        for _ in range(bisect_steps):
            mid = 0.5 * (lo + hi)
            run(mid, with_nonmagnetic=False)
            lam, _, c, _ = rows[mid]
            if not c:
                notes.append(f"bisection stopped: no convergence at alpha={mid:.6g}")
                break
            if abs(lam - cut) < res:
                rows[mid] = rows[mid][:3] + (False,)
                notes.append(f"bisection stopped: alpha={mid:.6g} within resolution of threshold")
                break
            if lam < cut:
                hi = mid
            else:
                lo = mid

    keys, lm, conv = table()
    ln = np.array([rows[a][1] for a in keys])
    resolved = np.array([rows[a][3] for a in keys])
    flags_m = lm < cut
    flags_n = ln < cut
    use = [i for i in range(len(keys)) if conv[i] and resolved[i]]
    bracket = _bracket([keys[i] for i in use], [bool(flags_m[i]) for i in use])
    seen_true = False
    monotone = True
    for i in np.argsort(keys):
        if not conv[i]:
            continue
        if flags_m[i]:
            seen_true = True
        elif seen_true:
            monotone = False
    if not monotone:
        notes.append("magnetic bound-state flag is not monotone in alpha")
    return SweepResult(np.array(keys), lm, ln, flags_m, flags_n, conv, resolved, float(delta),
                       bracket, monotone, float(res), notes)
