"""Weyl quasi-modes probing the threshold region of the spectrum.

phi_n(x, y) = n^{-1/2} h(x/n) e^{ikx} sin(y/g(x)) with the fixed bump
h(t) = c exp(-1/((t-1)(2-t))) on (1, 2), normalized in L2. On the
straightened strip this is g^{1/2} n^{-1/2} h(x/n) e^{ikx} sin(eta).
"""

from __future__ import annotations

import math

import numpy as np

from ..assembly import assemble_form, mass_matrix
from ..gauge import DEFAULT_NQUAD, Field, pullback_gauge
from ..grid import Grid, grid_with_spacing
from ..profiles import Profile, eval_profile

#: c with int_1^2 h(t)^2 dt = 1 (40-digit quadrature, frozen).
BUMP_NORM = 101.541608713741
#: int_1^2 h''(t)^2 dt for the normalized bump.
BUMP_H2_SQ = 1472.3588729863
#: int_1^2 h'(t)^2 dt for the normalized bump.
BUMP_H1_SQ = 22.5747164838098
WINDOW_MARGIN = 1.0


def bump(t, deriv: int = 0):
    """Normalized bump h and its first two derivatives (zero off (1, 2))."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 1.0) & (t < 2.0)
    s = t[inside]
    p = (s - 1.0) * (2.0 - s)
    h = BUMP_NORM * np.exp(-1.0 / p)
    # (-1/p)' = p'/p^2 with p' = 3 - 2t, p'' = -2
    dp = 3.0 - 2.0 * s
    q = dp / p**2
    if deriv == 0:
        out[inside] = h
    elif deriv == 1:
        out[inside] = h * q
    elif deriv == 2:
        dq = -2.0 / p**2 - 2.0 * dp**2 / p**3
        out[inside] = h * (q * q + dq)
    else:
        raise ValueError("deriv must be 0, 1 or 2")
    return out


def weyl_grid(n: int, cells_per_unit: float = 48.0, Ny: int = 63, max_hx: float = 0.05) -> Grid:
    """Grid whose window holds the support (n, 2n) plus a margin.

    The x-spacing resolves the bump with ``cells_per_unit`` cells per unit of
    t = x/n and never exceeds ``max_hx`` (so e^{ikx} stays resolved for k ~ 1).
    """
    hx = min(n / cells_per_unit, max_hx)
    L = 2.0 * n + WINDOW_MARGIN
    cells = math.ceil(2.0 * L / hx)
    return grid_with_spacing(cells * hx / 2.0, hx, Ny)


def quasimode(p: Profile, k: float, n: int, grid: Grid) -> np.ndarray:
    """Straightened samples of phi_n, flattened in grid order."""
    x = grid.x
    g = 1.0 + eval_profile(p, x)[0]
    col = np.sqrt(g / n) * bump(x / n) * np.exp(1j * k * x)
    return (col[:, None] * np.sin(grid.eta)[None, :]).ravel()


def weyl_residual(p: Profile, B: Field, k: float, n: int, grid: Grid,
                  nquad: int = DEFAULT_NQUAD):
    """Discrete ||(H - (1+k^2)) phi_n||^2 / ||phi_n||^2 and ||phi_n||^2.

    H is realized by the assembled form: with r = (M - mu mass) phi the
    residual is r^H mass^{-1} r, which is the L2 norm of the discrete
    operator applied to phi_n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if 2.0 * n + WINDOW_MARGIN > grid.L + 1e-12:
        raise ValueError(f"support (n, 2n) = ({n}, {2 * n}) does not fit in [-{grid.L}, {grid.L}]")
    if not B.is_zero:
        lo, hi = B.x_extent()
        if hi > n and lo < 2 * n:
            raise ValueError("field support overlaps the quasi-mode support")
    gs = pullback_gauge(B, p, grid, nquad)
    M = assemble_form(p, gs, grid).matrix
    mass = mass_matrix(grid).matrix
    phi = quasimode(p, k, n, grid)
    mu = 1.0 + k * k
    r = M @ phi - mu * (mass @ phi)
    w = grid.hx * grid.hy
    norm_sq = float(np.real(np.vdot(phi, mass @ phi)))
    res = float(np.real(np.vdot(r, r))) / w
    return res / norm_sq, norm_sq


def decay_slope(ns, residuals) -> float:
    """Least-squares slope of log(residual) against log(n)."""
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(residuals, float)), 1)[0])
