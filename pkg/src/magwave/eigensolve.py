"""Lowest eigenpairs of the discrete pencil (M, mass) and threshold logic.

The primary path is ARPACK in shift-invert mode around a shift placed
below the spectrum, with a sparse LU of (M - sigma mass). Small problems
fall back to dense LAPACK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import OperatorMatrix, assemble_form, mass_matrix, transverse_threshold
from .gauge import DEFAULT_NQUAD, Field, pullback_gauge
from .grid import Grid
from .profiles import Profile

DEFAULT_SEED = 20240917
DEFAULT_TOL = 1e-10
THRESHOLD = 1.0
_DENSE_LIMIT = 400


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    residual_norms: np.ndarray
    below_threshold: np.ndarray
    delta: float
    iterations: int
    converged: bool
    vectors: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(v) for v in self.residual_norms],
            "flags": [bool(v) for v in self.below_threshold],
            "delta": float(self.delta),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }


def default_delta(L: float | None, tol: float) -> float:
    """Classification margin max(2 (pi/2L)^2, 10 tol)."""
    trunc = 2.0 * (math.pi / (2.0 * L)) ** 2 if L else 0.0
    return max(trunc, 10.0 * tol)


def relative_residuals(A, B, values, vectors) -> np.ndarray:
    """||A v - lam B v|| / ||B v|| per pair (operator units when B is a
    multiple of the identity)."""
    out = np.empty(len(values))
    for n, lam in enumerate(values):
        v = vectors[:, n]
        Bv = B @ v
        out[n] = np.linalg.norm(A @ v - lam * Bv) / np.linalg.norm(Bv)
    return out


def _as_sparse(op):
    return op.matrix if isinstance(op, OperatorMatrix) else sp.csr_matrix(op)


def _grid_L(*ops):
    for op in ops:
        if isinstance(op, OperatorMatrix) and op.grid is not None:
            return op.grid.L
    return None


def generalized_lowest(A, B, k: int, tol: float = DEFAULT_TOL, max_iter: int = 5000,
                       sigma: float | None = None, seed: int = DEFAULT_SEED):
    """k lowest eigenpairs of the Hermitian pencil (A, B), B positive definite.

    Returns ``(values, vectors, iterations, converged)`` with values ascending.
    ``sigma`` must lie below the wanted eigenvalues (default -1e-3, fine for
    semidefinite A). The starting vector comes from ``seed``.
    """
    n = A.shape[0]
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = min(k, n)
    if n <= _DENSE_LIMIT or k >= n - 1:
        Ad = A.toarray() if sp.issparse(A) else np.asarray(A)
        Bd = B.toarray() if sp.issparse(B) else np.asarray(B)
        vals, vecs = sla.eigh(Ad, Bd, subset_by_index=[0, k - 1])
        return vals, vecs, 1, True

    if sigma is None:
        sigma = -1e-3
    rng = np.random.default_rng(seed)
    complex_problem = np.iscomplexobj(A.data) if sp.issparse(A) else np.iscomplexobj(A)
    v0 = rng.standard_normal(n)
    if complex_problem:
        v0 = v0 + 1j * rng.standard_normal(n)
    shifted = sp.csc_matrix(A - sigma * B)
    lu = spla.splu(shifted)
    count = [0]

    def solve(x):
        count[0] += 1
        return lu.solve(np.asarray(x, dtype=shifted.dtype))

    opinv = spla.LinearOperator(A.shape, matvec=solve, dtype=shifted.dtype)
    ncv = min(n, max(2 * k + 1, 20))
    converged = True
    try:
        if complex_problem:
            vals, vecs = spla.eigs(A, k=k, M=B, sigma=sigma, which="LM", OPinv=opinv,
                                   v0=v0, tol=tol, maxiter=max_iter, ncv=ncv)
            vals = vals.real
        else:
            vals, vecs = spla.eigsh(A, k=k, M=B, sigma=sigma, which="LM", OPinv=opinv,
                                    v0=v0, tol=tol, maxiter=max_iter, ncv=ncv)
    except spla.ArpackNoConvergence as err:
        converged = False
        vals, vecs = np.real(err.eigenvalues), err.eigenvectors
    order = np.argsort(vals)
    vals = np.asarray(vals)[order]
    vecs = np.asarray(vecs)[:, order]
    # fix the arbitrary phase so that results are reproducible
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        m = np.argmax(np.abs(col))
        if col[m] != 0:
            vecs[:, j] = col * (abs(col[m]) / col[m])
    return vals, vecs, count[0], converged


def smallest_eigenpairs(M, mass, k: int = 3, tol: float = DEFAULT_TOL, max_iter: int = 5000,
                        seed: int = DEFAULT_SEED, delta: float | None = None,
                        sigma: float | None = None) -> SpectrumResult:
    """k smallest eigenvalues of M v = lam mass v for the assembled form.

    For assembled waveguide forms the shift defaults to a rigorous lower
    bound of the spectrum; pass ``sigma`` to override.
    """
    A = _as_sparse(M)
    B = _as_sparse(mass)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if sigma is None:
        sigma = _default_shift(M)
    vals, vecs, its, conv = generalized_lowest(A, B, k, tol, max_iter, sigma, seed)
    res = relative_residuals(A, B, vals, vecs)
    if delta is None:
        delta = default_delta(_grid_L(M, mass), tol)
    flags = vals < THRESHOLD - delta
    if conv:
        conv = bool(np.all(res <= max(tol, 1e-8) * max(1.0, float(np.max(np.abs(vals))))))
    return SpectrumResult(vals, res, flags, float(delta), int(its), bool(conv), vecs)


def _default_shift(M) -> float:
    # By the diamagnetic inequality every Rayleigh quotient of the assembled
    # form is at least the discrete transverse threshold over max(g)^2.
    if isinstance(M, OperatorMatrix) and M.grid is not None and "profile" in M.meta:
        sup_f = float(M.meta.get("sup_f", M.meta["profile"]["amplitude"]))
        return 0.99 * transverse_threshold(M.grid) / (1.0 + sup_f) ** 2
    return -1e-2


def count_below_threshold(s: SpectrumResult, delta: float):
    """Number of eigenvalues below 1 - delta and the margin 1 - lam_1.

    The margin is ``None`` for an empty spectrum.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    vals = np.asarray(s.eigenvalues)
    if vals.size == 0:
        return 0, None
    return int(np.sum(vals < THRESHOLD - delta)), float(THRESHOLD - vals.min())


def solve_waveguide(p: Profile, B: Field, grid: Grid, k: int = 3, tol: float = DEFAULT_TOL,
                    max_iter: int = 5000, seed: int = DEFAULT_SEED,
                    nquad: int = DEFAULT_NQUAD) -> SpectrumResult:
    """Pull back the gauge, assemble and solve in one call."""
    gs = pullback_gauge(B, p, grid, nquad)
    M = assemble_form(p, gs, grid)
    return smallest_eigenpairs(M, mass_matrix(grid), k, tol, max_iter, seed)


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of :func:`convergence_study`.

    ``levels`` maps each L to a list of (grid dict, eigenvalues) from
    coarse to fine. ``extrapolated`` maps L to Richardson values (only for L
    with three or more grids). ``order`` and ``h_error`` come from the
    largest such L. ``L_sensitivity`` is lam(L_prev) - lam(L_max) for the two
    largest L; ``discrete[m]`` is True when |L_sensitivity[m]| < h_error[m].
    """

    levels: dict
    extrapolated: dict
    order: list
    h_error: list
    L_sensitivity: list
    discrete: list

    def to_dict(self) -> dict:
        return {
            "levels": {repr(float(L)): [{"grid": g, "eigenvalues": [float(v) for v in ev]}
                                         for g, ev in rows]
                       for L, rows in self.levels.items()},
            "extrapolated": {repr(float(L)): [float(v) for v in ev]
                             for L, ev in self.extrapolated.items()},
            "order": [float(v) for v in self.order],
            "h_error": [float(v) for v in self.h_error],
            "L_sensitivity": [float(v) for v in self.L_sensitivity],
            "discrete": [bool(v) for v in self.discrete],
        }


def richardson(coarse, mid, fine, ratio: float, order: float = 2.0):
    """Extrapolated values and observed orders from three nested levels."""
    coarse, mid, fine = (np.asarray(v, dtype=float) for v in (coarse, mid, fine))
    with np.errstate(divide="ignore", invalid="ignore"):
        observed = np.log(np.abs(coarse - mid) / np.abs(mid - fine)) / np.log(ratio)
    extrap = fine + (fine - mid) / (ratio**order - 1.0)
    return extrap, observed


def convergence_study(p: Profile, B: Field, grids, k: int = 3, tol: float = DEFAULT_TOL,
                      max_iter: int = 5000, seed: int = DEFAULT_SEED) -> ConvergenceReport:
    """Grid-refinement and truncation study of the k lowest eigenvalues.

    ``grids`` is a sequence of (L, Nx, Ny). At least one L needs three grids
    refined by a common ratio (Richardson extrapolation with nominal order 2),
    and at least two distinct L are required.
    """
    grids = [g if isinstance(g, Grid) else Grid(float(g[0]), int(g[1]), int(g[2])) for g in grids]
    by_L: dict = {}
    for g in grids:
        by_L.setdefault(g.L, []).append(g)
    if len(by_L) < 2:
        raise ValueError("convergence study needs at least two values of L")
    if not any(len(v) >= 3 for v in by_L.values()):
        raise ValueError("convergence study needs three nested grids at some L")

    levels, extrap, errors, orders = {}, {}, {}, {}
    for L in sorted(by_L):
        rows = []
        for g in sorted(by_L[L], key=lambda g: -g.hx):
            s = solve_waveguide(p, B, g, k, tol, max_iter, seed)
            rows.append((g.as_dict(), np.asarray(s.eigenvalues[:k])))
        levels[L] = rows
        if len(rows) >= 3:
            gs = sorted(by_L[L], key=lambda g: -g.hx)[-3:]
            ratio = gs[0].hx / gs[1].hx
            ev = [r[1] for r in rows[-3:]]
            ex, obs = richardson(*ev, ratio=ratio)
            extrap[L] = ex
            errors[L] = np.abs(ex - ev[-1])
            orders[L] = obs

    ref = max(errors)
    Ls = sorted(by_L)
    best = {L: extrap.get(L, levels[L][-1][1]) for L in Ls}
    sens = best[Ls[-2]] - best[Ls[-1]]
    disc = np.abs(sens) < errors[ref]
    return ConvergenceReport(levels, extrap, list(orders[ref]), list(errors[ref]),
                             list(sens), [bool(d) for d in disc])
