"""Effective one-dimensional reduction of the non-magnetic problem.

Inserting phi = r(x) sin(y/g(x)) and v = r sqrt(g) gives

    q[phi] - ||phi||^2 = (pi/2) ( int v'^2 + int V v^2 ),
    V = f'^2 (4 pi^2 + 3) / (12 (1+f)^2) - (2f + f^2) / (1+f)^2,

while ||phi||^2 = (pi/2) int v^2. Hence the 2D ground energy never exceeds
1 + (ground energy of -d^2/dx^2 + V).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ..eigensolve import DEFAULT_TOL, solve_waveguide
from ..gauge import Field
from ..grid import Grid
from ..profiles import Profile, check_discrete_condition, eval_profile

NEGATIVE_CUTOFF = 1e-8
_KINETIC = (4.0 * math.pi**2 + 3.0) / 12.0


class ConditionViolation(ValueError):
    """The profile fails the sufficient condition for a negative 1D state."""


def effective_potential_values(p: Profile, x):
    f, f1, _, _ = eval_profile(p, x)
    return _KINETIC * f1**2 / (1.0 + f) ** 2 - (2.0 * f + f * f) / (1.0 + f) ** 2


@dataclass(frozen=True, eq=False)
class EffectivePotential1D:
    xs: np.ndarray
    V: np.ndarray
    profile: Profile

    def at(self, x):
        return effective_potential_values(self.profile, x)


def effective_potential(p: Profile, xs) -> EffectivePotential1D:
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 0:
        raise ValueError("sample sequence must be non-empty")
    return EffectivePotential1D(xs, effective_potential_values(p, xs), p)


def _potential_fn(V):
    if isinstance(V, EffectivePotential1D):
        return V.at
    if callable(V):
        return V
    raise TypeError("V must be an EffectivePotential1D or a callable")


def _tridiagonal(V, L1: float, N1: int):
    if not L1 > 0:
        raise ValueError("L1 must be positive")
    if int(N1) != N1 or N1 < 100:
        raise ValueError("N1 must be an integer >= 100")
    h = 2.0 * L1 / (N1 + 1)
    x = -L1 + h * np.arange(1, N1 + 1)
    d = 2.0 / h**2 + np.asarray(_potential_fn(V)(x), dtype=float)
    e = np.full(N1 - 1, -1.0 / h**2)
    return d, e


def solve_1d(V, L1: float, N1: int, cutoff: float = NEGATIVE_CUTOFF) -> np.ndarray:
    """Negative eigenvalues (below -cutoff) of -d^2/dx^2 + V on (-L1, L1).

    Dirichlet conditions, second-order differences on N1 interior nodes.
    Returns an ascending, possibly empty, array.
    """
    d, e = _tridiagonal(V, L1, int(N1))
    lo = float(np.min(d) - 4.0 * abs(e[0]) - 1.0)
    if lo >= -cutoff:
        return np.empty(0)
    vals = eigh_tridiagonal(d, e, eigvals_only=True, select="v", select_range=(lo, -cutoff))
    return np.sort(vals)


def ground_1d(V, L1: float, N1: int) -> float:
    """Lowest eigenvalue of the truncated 1D operator, whatever its sign."""
    d, e = _tridiagonal(V, L1, int(N1))
    return float(eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, 0))[0])


def variational_crosscheck(p: Profile, grid: Grid, tol: float = DEFAULT_TOL,
                           N1: int | None = None, xs=None, **solver):
    """Non-magnetic 2D ground energy and 1 + 1D ground energy on the same window.

    The 1D problem uses the truncation (-L, L) of the 2D grid with a finer
    mesh (default 16 points per 2D cell, at least 4000). Raises
    :class:`ConditionViolation` when the profile fails the sufficient
    condition on ``xs`` (default: 2048 points over 50 widths and the window).
    """
    if xs is None:
        xs = np.union1d(p.default_samples(), np.linspace(-grid.L, grid.L, 2049))
    report = check_discrete_condition(p, xs)
    if not report.satisfied:
        raise ConditionViolation(
            f"|f'| exceeds the bound by {report.max_violation:.3e}; the 1D energy "
            "still bounds the 2D one but need not be negative"
        )
    if N1 is None:
        N1 = max(4000, 16 * (grid.Nx + 1) - 1)
    s = solve_waveguide(p, Field(), grid, k=1, tol=tol, **solver)
    lam1d = ground_1d(EffectivePotential1D(np.empty(0), np.empty(0), p), grid.L, N1)
    return float(s.eigenvalues[0]), 1.0 + lam1d
