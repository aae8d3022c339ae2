"""Numerical estimate of the magnetic Hardy constant on the straight strip.

For a weight h(x) > 0 the inequality

    int h^2 |(i grad + A) u|^2 - h^2 |u|^2  >=  C int h^2/(1+x^2) |u|^2 + int h'' |u|^2

is probed by the lowest eigenvalue of the pencil (form - threshold - h'', weighted mass)
on a truncated grid. Truncation makes the estimate an upper bound for
the best constant of the window, so C_est(L) can only decrease with L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..assembly import form_operators, transverse_threshold, weighted_form
from ..eigensolve import DEFAULT_SEED, DEFAULT_TOL, generalized_lowest
from ..gauge import DEFAULT_NQUAD, Field, pullback_gauge
from ..grid import Grid
from ..profiles import Profile


@dataclass(frozen=True)
class HardyWeight:
    """Smooth positive weight h with closed-form second derivative.

    ``constant``: h = 1. ``plateau``: h = 1 + height * P(x) with
    P(x) = (tanh((x + half_width)/s) - tanh((x - half_width)/s)) / 2.
    """

    kind: str = "constant"
    height: float = 0.0
    half_width: float = 5.0
    steepness: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant", "plateau"):
            raise ValueError(f"unknown Hardy weight {self.kind!r}")
        if self.kind == "plateau" and not (self.height > -1.0 and self.steepness > 0):
            raise ValueError("plateau weight needs height > -1 and steepness > 0")

    def _tanh2(self, x, shift):
        u = np.tanh((x + shift) / self.steepness)
        return -2.0 * u * (1.0 - u * u) / self.steepness**2

    def h(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.ones_like(x)
        s = self.steepness
        bump = 0.5 * (np.tanh((x + self.half_width) / s) - np.tanh((x - self.half_width) / s))
        return 1.0 + self.height * bump

    def h2(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.zeros_like(x)
        return 0.5 * self.height * (self._tanh2(x, self.half_width) - self._tanh2(x, -self.half_width))


def hardy_estimate(B: Field, weight=None, grid: Grid | None = None, tol: float = DEFAULT_TOL,
                   nquad: int = DEFAULT_NQUAD, seed: int = DEFAULT_SEED) -> float:
    """Lowest generalized eigenvalue C_est of the discrete Hardy pencil.

    ``weight`` is any object with callables ``h`` and ``h2`` (second
    derivative), default h = 1. The threshold subtracted is the discrete
    transverse ground energy of the grid, the exact analogue of 1.
    """
    if grid is None:
        raise ValueError("a grid is required")
    weight = HardyWeight() if weight is None else weight
    x, xe = grid.x, grid.x_edges
    hn = np.asarray(weight.h(x), dtype=float)
    he = np.asarray(weight.h(xe), dtype=float)
    h2 = np.asarray(weight.h2(x), dtype=float)
    if np.any(hn <= 0) or np.any(he <= 0) or not np.all(np.isfinite(h2)):
        raise ValueError("Hardy weight must be positive with finite h''")

    p = Profile()
    gs = pullback_gauge(B, p, grid, nquad)
    D1, D2 = form_operators(p, gs, grid)
    w = grid.hx * grid.hy
    lam_perp = transverse_threshold(grid)
    A = weighted_form(D1, D2, grid, he**2, hn**2)
    A = A - sp.diags(np.repeat(w * (lam_perp * hn**2 + h2), grid.Ny))
    rhs = np.repeat(w * hn**2 / (1.0 + x**2), grid.Ny)
    Bm = sp.diags(rhs, format="csr")
    # A + max(-h'') mass >= 0, and mass <= (1 + L^2)/min(h^2) * rhs
    neg = max(0.0, float(np.max(-h2)))
    sigma = -(neg * (1.0 + grid.L**2) / float(np.min(hn**2)) + 1e-3)
    vals, _, _, _ = generalized_lowest(sp.csr_matrix(A), Bm, 1, tol, sigma=sigma, seed=seed)
    return float(vals[0])


def hardy_ladder(B: Field, L_values, hx: float = 0.25, Ny: int = 31, weight=None,
                 tol: float = DEFAULT_TOL) -> dict:
    """C_est for each L on grids of common spacing (nested windows)."""
    from ..grid import grid_with_spacing

    return {float(L): hardy_estimate(B, weight, grid_with_spacing(L, hx, Ny), tol) for L in L_values}

