"""Pointwise correction weights G1, G2 bounding the straightening error.

The formulas are evaluated as printed, with the sup norm of g in every
denominator. ``denominator="inf"`` swaps in inf g = 1 + min f, the reading
under which the estimate is an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..profiles import Profile, eval_profile

PI = math.pi


@dataclass(frozen=True, eq=False)
class GfReport:
    xs: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    dG1: np.ndarray
    d2G1: np.ndarray
    C: float
    g_norm: float
    denominator: str

    def to_dict(self) -> dict:
        return {"C": float(self.C), "g_norm": float(self.g_norm),
                "denominator": self.denominator,
                "max_G1": float(np.max(np.abs(self.G1))),
                "max_G2": float(np.max(np.abs(self.G2)))}


def gf_values(p: Profile, sup_a1: float, sup_a2: float, x, g_norm: float):
    """(G1, G2) at x for a given value of the g-norm."""
    f, f1, _, _ = eval_profile(p, np.asarray(x, dtype=float))
    d = np.abs(f1)
    G = g_norm
    G1 = ((1.0 + 2.0 * PI) / (2.0 * G) * d
          + PI * d / G * (1.0 + sup_a1 + d * PI / G)
          + 2.0 * f - f * f * (3.0 + 2.0 * f) / G**2
          + sup_a2 * f / G)
    G2 = d / (2.0 * G) * (1.0 + 2.0 * sup_a1 * PI + d / (2.0 * G)) + sup_a2 * f / G
    return G1, G2


def _piecewise_derivatives(p, sup_a1, sup_a2, xs, g_norm, h):
    def G(x):
        return gf_values(p, sup_a1, sup_a2, x, g_norm)[0]

    G0, Gp, Gm = G(xs), G(xs + h), G(xs - h)
    d1 = (Gp - Gm) / (2.0 * h)
    d2 = (Gp - 2.0 * G0 + Gm) / h**2

    sgn = np.sign(eval_profile(p, xs[:, None] + h * np.arange(-3, 4)[None, :])[1])
    centre = sgn[:, 2:5]
    kink = (np.min(centre, axis=1) != np.max(centre, axis=1)) | (sgn[:, 3] == 0)
    if not np.any(kink):
        return d1, d2
    idx = np.flatnonzero(kink)
    best1 = np.full(idx.size, np.nan)
    best2 = np.full(idx.size, np.nan)
    for side in (1, -1):
        # usable if f' keeps one sign along x, x+side*h, ..., x+3 side*h
        ahead = sgn[idx][:, 3 + side * np.arange(1, 4)]
        own = sgn[idx, 3]
        ok = (np.min(ahead, axis=1) == np.max(ahead, axis=1)) & (ahead[:, 0] != 0)
        ok &= (own == 0) | (own == ahead[:, 0])
        x = xs[idx]
        g0, g1, g2, g3 = (G(x + side * m * h) for m in range(4))
        v1 = side * (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h)
        v2 = (2.0 * g0 - 5.0 * g1 + 4.0 * g2 - g3) / h**2
        take1 = ok & ~(np.abs(best1) >= np.abs(v1))
        take2 = ok & ~(np.abs(best2) >= np.abs(v2))
        best1 = np.where(take1, v1, best1)
        best2 = np.where(take2, v2, best2)
    d1[idx] = np.where(np.isnan(best1), d1[idx], best1)
    d2[idx] = np.where(np.isnan(best2), d2[idx], best2)
    return d1, d2


def gf_bounds(p: Profile, sup_a1: float, sup_a2: float, xs, denominator: str = "sup",
              h_fd: float | None = None) -> GfReport:
    """Evaluate G1, G2 on xs and fit the smallest C with
    (1+x^2) max(|G1|, |G1'|, |G1''|, |G2|) <= C * amplitude.

    G1 derivatives are finite differences (step h_fd, default 1e-3 width)
    of the closed form. G1 contains |f'|, which has a kink wherever f'
    changes sign; there the stencil is taken one-sided, on each side of the
    kink, and the larger one-sided value is kept. A central stencil across
    the kink would report a spurious O(1/h_fd) second derivative.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 0:
        raise ValueError("sample sequence must be non-empty")
    if denominator not in ("sup", "inf"):
        raise ValueError("denominator must be 'sup' or 'inf'")
    fs = eval_profile(p, np.append(xs, p.center))[0]
    g_norm = 1.0 + (float(np.max(fs)) if denominator == "sup" else float(np.min(fs)))
    h = 1e-3 * p.width if h_fd is None else h_fd

    G1, G2 = gf_values(p, sup_a1, sup_a2, xs, g_norm)
    dG1, d2G1 = _piecewise_derivatives(p, sup_a1, sup_a2, xs, g_norm, h)

    worst = (1.0 + xs**2) * np.max(np.abs(np.vstack([G1, dG1, d2G1, G2])), axis=0)
    peak = float(np.max(worst))
    if p.amplitude > 0:
        C = peak / p.amplitude
    else:
        C = 0.0 if peak == 0.0 else math.inf
    return GfReport(xs, G1, G2, dG1, d2G1, C, g_norm, denominator)
