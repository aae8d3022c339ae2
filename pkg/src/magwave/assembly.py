"""Discrete magnetic form on the straightened strip.

After the change of variables phi(x, eta) = g^{1/2} psi(x, g eta) the form
||(i grad + A) psi||^2 on the widened strip becomes ||D1 phi||^2 + ||D2 phi||^2
on the flat strip, with

    D1 phi = i phi_x - i g'/(2g) phi - i (g' eta / g) phi_eta + a1~ phi
    D2 phi = (i/g) phi_eta + a2~ phi

Each D is discretized on grid edges with covariant (Peierls) differences:
D1 lives on x-edges, D2 on eta-edges, and the matrix is assembled as the
Hermitian product h_x h_y (D1^H D1 + D2^H D2). For f = 0 and A = 0 this is
the 5-point Dirichlet Laplacian times h_x h_y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .gauge import GaugeSamples
from .grid import Grid, build_grid  # noqa: F401  (re-exported)
from .profiles import Profile, eval_profile


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    matrix: sp.csr_matrix
    grid: Grid | None = None
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.matrix.shape

    def to_triplets(self, path) -> None:
        """Write ``row col re im`` lines, one per stored entry."""
        coo = self.matrix.tocoo()
        with open(path, "w") as fh:
            fh.write("# row col re im\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {v.real:.17g} {np.imag(v):.17g}\n")


def _check_grid(gs: GaugeSamples, grid: Grid):
    if gs.grid != grid:
        raise ValueError("gauge samples were built on a different grid")


def form_operators(p: Profile, gs: GaugeSamples, grid: Grid):
    """Sparse D1 (rows: x-edges) and D2 (rows: eta-edges).

    Row ordering: x-edge (e, j) -> e * Ny + j, eta-edge (i, e) -> i * (Ny+1) + e.
    """
    _check_grid(gs, grid)
    Nx, Ny = grid.Nx, grid.Ny
    hx, hy = grid.hx, grid.hy
    eta = grid.eta

    fe, f1e, _, _ = eval_profile(p, grid.x_edges)
    ge = 1.0 + fe
    c0 = (f1e / (2.0 * ge))[:, None] * np.ones((1, Ny))
    c1 = (f1e / ge)[:, None] * eta[None, :]

    U = np.exp(-1j * gs.link_x)  # transports right node onto left node
    Vup = np.exp(-1j * gs.link_eta[:, 1:])  # node (i, j+1) onto (i, j)
    Vdn = np.exp(1j * gs.link_eta[:, :-1])  # node (i, j-1) onto (i, j)

    E, J = np.meshgrid(np.arange(Nx + 1), np.arange(Ny), indexing="ij")
    rows1 = E * Ny + J
    rows, cols, vals = [], [], []

    def add(mask, r, i, j, v):
        rows.append(r[mask])
        cols.append(i[mask] * Ny + j[mask])
        vals.append(v[mask])

    iL, iR = E - 1, E
    hasL = iL >= 0
    hasR = iR < Nx
    # longitudinal difference and the -g'/(2g) phi term, averaged to the edge
    add(hasL, rows1, iL, J, 1j * (-1.0 / hx - 0.5 * c0))
    add(hasR, rows1, iR, J, 1j * U * (1.0 / hx - 0.5 * c0))
    # -(g' eta / g) phi_eta: mean of covariant central differences at both ends
    k = -0.5j * c1 / (2.0 * hy)
    iLc = np.clip(iL, 0, Nx - 1)
    iRc = np.clip(iR, 0, Nx - 1)
    up = J + 1 < Ny
    dn = J - 1 >= 0
    add(hasL & up, rows1, iL, J + 1, k * Vup[iLc, J])
    add(hasL & dn, rows1, iL, J - 1, -k * Vdn[iLc, J])
    add(hasR & up, rows1, iR, J + 1, k * U * Vup[iRc, J])
    add(hasR & dn, rows1, iR, J - 1, -k * U * Vdn[iRc, J])
    D1 = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=((Nx + 1) * Ny, grid.size),
    )

    g = 1.0 + eval_profile(p, grid.x)[0]
    I, Ee = np.meshgrid(np.arange(Nx), np.arange(Ny + 1), indexing="ij")
    rows2 = I * (Ny + 1) + Ee
    W = np.exp(-1j * gs.link_eta)
    coef = (1j / (g * hy))[:, None] * np.ones((1, Ny + 1))
    lower, upper = Ee - 1, Ee
    rows, cols, vals = [], [], []
    add(lower >= 0, rows2, I, lower, -coef + 0j)
    add(upper < Ny, rows2, I, upper, coef * W)
    D2 = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(Nx * (Ny + 1), grid.size),
    )
    return D1, D2


def hermitian_part(A):
    A = sp.csr_matrix(A)
    H = (A + A.conj().T) * 0.5
    H = sp.csr_matrix(H)
    H.sort_indices()
    return H


def weighted_form(D1, D2, grid: Grid, w_xedges=None, w_nodes=None):
    """h_x h_y (D1^H W1 D1 + D2^H W2 D2) with per-column weights.

    ``w_xedges`` (length Nx+1) weights D1 rows by the x-edge position,
    ``w_nodes`` (length Nx) weights D2 rows by the node column.
    """
    Ny = grid.Ny
    if w_xedges is None:
        P1 = D1
    else:
        P1 = sp.diags(np.repeat(np.asarray(w_xedges, dtype=float), Ny)) @ D1
    if w_nodes is None:
        P2 = D2
    else:
        P2 = sp.diags(np.repeat(np.asarray(w_nodes, dtype=float), Ny + 1)) @ D2
    M = (D1.conj().T @ P1 + D2.conj().T @ P2) * (grid.hx * grid.hy)
    return hermitian_part(M)


def assemble_form(p: Profile, gs: GaugeSamples, grid: Grid) -> OperatorMatrix:
    """Sparse Hermitian positive semidefinite matrix of the magnetic form."""
    D1, D2 = form_operators(p, gs, grid)
    M = weighted_form(D1, D2, grid)
    meta = {"grid": grid.as_dict(), "profile": _profile_dict(p), "sup_f": p.sup_f()}
    return OperatorMatrix(M, grid, meta)


def mass_matrix(grid: Grid) -> OperatorMatrix:
    """Flat L2 mass matrix h_x h_y I; the straightening map is unitary."""
    M = sp.identity(grid.size, dtype=float, format="csr") * (grid.hx * grid.hy)
    return OperatorMatrix(sp.csr_matrix(M), grid, {"grid": grid.as_dict()})


def transverse_threshold(grid: Grid) -> float:
    """Lowest eigenvalue of the discrete transverse Dirichlet Laplacian on
    (0, pi); the grid analogue of the threshold 1."""
    return float((2.0 / grid.hy * np.sin(grid.hy / 2.0)) ** 2)


def _profile_dict(p: Profile) -> dict:
    return {"family": p.family, "amplitude": float(p.amplitude),
            "center": float(p.center), "width": float(p.width)}
