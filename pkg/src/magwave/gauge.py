"""Compactly supported magnetic fields and their Poincare-gauge potentials.

The potential of a field B is built from radial line integrals from the
origin::

    a1(x, y) = -y * int_0^1 B(u x, u y) u du
    a2(x, y) =  x * int_0^1 B(u x, u y) u du

which satisfies d(a2)/dx - d(a1)/dy = B everywhere in the plane.

On the straightened strip the discrete form works with Peierls phases on
grid edges (line integrals of the pulled-back one-form), so that a gauge
transform acts on the discrete problem as an exact diagonal unitary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import Grid
from .profiles import Profile, eval_profile

FIELD_FAMILIES = ("zero", "smooth_disk_bump")
DEFAULT_NQUAD = 64
_CHUNK = 16384


@dataclass(frozen=True)
class Field:
    """Magnetic field b * exp(1 - 1/(1 - r^2/R^2)) on a disk, zero outside.

    The closed disk must lie strictly inside the strip 0 < y < pi.
    """

    family: str = "zero"
    strength: float = 0.0
    center: tuple = (0.0, math.pi / 2)
    radius: float = 1.0

    def __post_init__(self):
        if self.family not in FIELD_FAMILIES:
            raise ValueError(f"unknown field family {self.family!r}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.radius > 0:
            raise ValueError("field radius must be positive")
        x0, y0 = self.center
        if self.family != "zero" and not (y0 - self.radius > 0 and y0 + self.radius < math.pi):
            raise ValueError("field support must lie strictly inside 0 < y < pi")

    @property
    def is_zero(self) -> bool:
        return self.family == "zero" or self.strength == 0.0

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.is_zero:
            return np.zeros(np.broadcast(x, y).shape)
        x0, y0 = self.center
        rho = ((x - x0) ** 2 + (y - y0) ** 2) / self.radius**2
        out = np.zeros(np.broadcast(x, y).shape)
        inside = rho < 1.0
        out[inside] = self.strength * np.exp(1.0 - 1.0 / (1.0 - rho[inside]))
        return out

    def x_extent(self):
        x0 = self.center[0]
        return (x0 - self.radius, x0 + self.radius)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "strength": float(self.strength),
            "center": [float(c) for c in self.center],
            "radius": float(self.radius),
        }


def _ray_window(B: Field, x, y):
    """Parameters u in [0, 1] where u*(x, y) lies inside the support disk."""
    x0, y0 = B.center
    a = x * x + y * y
    b = -2.0 * (x * x0 + y * y0)
    c = x0 * x0 + y0 * y0 - B.radius**2
    disc = b * b - 4.0 * a * c
    lo = np.zeros_like(a)
    hi = np.zeros_like(a)
    ok = (a > 0) & (disc > 0)
    sq = np.sqrt(np.where(ok, disc, 0.0))
    den = np.where(ok, 2.0 * a, 1.0)
    lo[ok] = np.clip((-b[ok] - sq[ok]) / den[ok], 0.0, 1.0)
    hi[ok] = np.clip((-b[ok] + sq[ok]) / den[ok], 0.0, 1.0)
    return lo, hi


def radial_moment(B: Field, x, y, nquad: int = DEFAULT_NQUAD, split: bool = True):
    """int_0^1 B(u x, u y) u du by Gauss-Legendre quadrature.

    With ``split`` the rule is applied only on the sub-interval where the ray
    crosses the support disk, which keeps the integrand smooth on the panel.
    """
    if nquad < 8:
        raise ValueError("nquad must be >= 8")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x = x.ravel()
    y = y.ravel()
    out = np.zeros(x.size)
    if B.is_zero:
        return out.reshape(shape)
    t, w = np.polynomial.legendre.leggauss(nquad)
    if split:
        lo, hi = _ray_window(B, x, y)
    else:
        lo, hi = np.zeros(x.size), np.ones(x.size)
    active = np.flatnonzero(hi > lo)
    for start in range(0, active.size, _CHUNK):
        idx = active[start:start + _CHUNK]
        half = 0.5 * (hi[idx] - lo[idx])
        u = lo[idx, None] + half[:, None] * (t[None, :] + 1.0)
        vals = B(u * x[idx, None], u * y[idx, None]) * u
        out[idx] = half * (vals @ w)
    return out.reshape(shape)


def poincare_gauge(B: Field, x, y, nquad: int = DEFAULT_NQUAD, split: bool = True):
    """Poincare-gauge potential (a1, a2) of ``B`` at physical points (x, y)."""
    m = radial_moment(B, x, y, nquad, split)
    return -np.asarray(y, dtype=float) * m, np.asarray(x, dtype=float) * m


def _points(where):
    if isinstance(where, Grid):
        return where.mesh()
    X, Y = where
    return np.asarray(X, dtype=float), np.asarray(Y, dtype=float)


def curl_check(B: Field, where, nquad: int = DEFAULT_NQUAD, h_fd: float = 1e-3,
               split: bool = True) -> float:
    """Sup-norm of d(a2)/dx - d(a1)/dy - B over the sample points.

    ``where`` is a :class:`Grid` (nodes read as physical points) or a pair
    of coordinate arrays. Derivatives are central differences of step h_fd.
    """
    if not h_fd > 0:
        raise ValueError("h_fd must be positive")
    X, Y = _points(where)
    _, a2p = poincare_gauge(B, X + h_fd, Y, nquad, split)
    _, a2m = poincare_gauge(B, X - h_fd, Y, nquad, split)
    a1p, _ = poincare_gauge(B, X, Y + h_fd, nquad, split)
    a1m, _ = poincare_gauge(B, X, Y - h_fd, nquad, split)
    curl = (a2p - a2m) / (2 * h_fd) - (a1p - a1m) / (2 * h_fd)
    return float(np.max(np.abs(curl - B(X, Y))))


@dataclass(frozen=True, eq=False)
class GaugeSamples:
    """Potential sampled on the straightened strip.

    ``a1``, ``a2`` hold a_i(x, g(x) eta) at the nodes, shape (Nx, Ny).
    ``link_x`` (Nx+1, Ny) and ``link_eta`` (Nx, Ny+1) are the Peierls phases
    of the pulled-back one-form (a1 + g' eta a2) dx + g a2 d(eta) on the
    grid edges; these are what the discrete form consumes.
    """

    grid: Grid
    profile: Profile
    a1: np.ndarray
    a2: np.ndarray
    link_x: np.ndarray
    link_eta: np.ndarray
    sup_a1: float = field(default=0.0)
    sup_a2: float = field(default=0.0)

    @classmethod
    def zero(cls, grid: Grid, profile: Profile | None = None) -> "GaugeSamples":
        return cls(
            grid,
            profile if profile is not None else Profile(),
            np.zeros(grid.shape),
            np.zeros(grid.shape),
            np.zeros((grid.Nx + 1, grid.Ny)),
            np.zeros((grid.Nx, grid.Ny + 1)),
            0.0,
            0.0,
        )

    def to_csv(self, path) -> None:
        X, H = self.grid.mesh()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "eta", "a1", "a2"])
            for row in zip(X.ravel(), H.ravel(), self.a1.ravel(), self.a2.ravel()):
                w.writerow([f"{v:.17g}" for v in row])


def pullback_gauge(B: Field, p: Profile, grid: Grid, nquad: int = DEFAULT_NQUAD) -> GaugeSamples:
    """Sample the Poincare gauge of ``B`` at (x, g(x) eta) for the grid."""
    if B.is_zero:
        return GaugeSamples.zero(grid, p)
    x, eta = grid.x, grid.eta
    xe, etae = grid.x_edges, grid.eta_edges
    g = 1.0 + eval_profile(p, x)[0]
    fe, f1e, _, _ = eval_profile(p, xe)
    ge = 1.0 + fe

    a1, a2 = poincare_gauge(B, x[:, None], g[:, None] * eta[None, :], nquad)

    b1, b2 = poincare_gauge(B, xe[:, None], ge[:, None] * eta[None, :], nquad)
    link_x = grid.hx * (b1 + f1e[:, None] * eta[None, :] * b2)

    _, c2 = poincare_gauge(B, x[:, None], g[:, None] * etae[None, :], nquad)
    link_eta = grid.hy * g[:, None] * c2

    return GaugeSamples(
        grid, p, a1, a2, link_x, link_eta,
        float(np.max(np.abs(a1))), float(np.max(np.abs(a2))),
    )


def apply_gauge_transform(gs: GaugeSamples, chi) -> GaugeSamples:
    """Gauge-transformed samples for a scalar field ``chi`` on the nodes.

    Links change by the forward differences of chi (chi extended by zero
    onto the walls), the same stencil the discrete form uses for its
    derivatives, so the assembled matrix changes by exactly the unitary
    diag(exp(i chi)). Node samples a1, a2 are updated with the physical
    gradient (d/dx - g' eta/g d/deta, 1/g d/deta) by second-order
    differences and serve diagnostics only.
    """
    grid = gs.grid
    chi = np.asarray(chi, dtype=float)
    if chi.size != grid.size:
        raise ValueError(f"chi has {chi.size} samples, grid has {grid.size} nodes")
    chi = chi.reshape(grid.shape)
    pad = np.zeros((grid.Nx + 2, grid.Ny + 2))
    pad[1:-1, 1:-1] = chi
    link_x = gs.link_x + (pad[1:, 1:-1] - pad[:-1, 1:-1])
    link_eta = gs.link_eta + (pad[1:-1, 1:] - pad[1:-1, :-1])

    dchi_dx, dchi_deta = np.gradient(chi, grid.hx, grid.hy)
    f, f1, _, _ = eval_profile(gs.profile, grid.x)
    g = (1.0 + f)[:, None]
    a1 = gs.a1 + dchi_dx - (f1[:, None] * grid.eta[None, :] / g) * dchi_deta
    a2 = gs.a2 + dchi_deta / g
    return replace(
        gs, a1=a1, a2=a2, link_x=link_x, link_eta=link_eta,
        sup_a1=float(np.max(np.abs(a1))), sup_a2=float(np.max(np.abs(a2))),
    )


def off_support(B: Field, x, y) -> np.ndarray:
    """True where the segment from the origin to (x, y) misses the closed
    support disk, so the Poincare potential there is exactly zero."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if B.is_zero:
        return np.ones(x.shape, dtype=bool)
    x0, y0 = B.center
    a = x * x + y * y
    t = np.clip((x * x0 + y * y0) / np.where(a > 0, a, 1.0), 0.0, 1.0)
    d2 = (t * x - x0) ** 2 + (t * y - y0) ** 2
    return d2 > B.radius**2
