"""Truncated tensor grid on the straightened strip [-L, L] x (0, pi)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Interior nodes of a uniform Dirichlet grid.

    Nodes are x_i = -L + (i+1) hx, eta_j = (j+1) hy with i < Nx, j < Ny.
    Node (i, j) has linear index ``i * Ny + j``: arrays of shape (Nx, Ny)
    flatten in C order. Boundary values are implicit zeros.

    Edges are indexed so that x-edge ``e`` joins nodes e-1 and e
    (e = 0..Nx, nodes -1 and Nx lie on the walls) and likewise for
    eta-edges.
    """

    L: float
    Nx: int
    Ny: int

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"grid half-length must be positive, got {self.L}")
        if int(self.Nx) != self.Nx or int(self.Ny) != self.Ny:
            raise ValueError("node counts must be integers")
        if self.Nx < 3 or self.Ny < 3:
            raise ValueError(f"need Nx, Ny >= 3, got ({self.Nx}, {self.Ny})")

    @property
    def hx(self) -> float:
        return 2.0 * self.L / (self.Nx + 1)

    @property
    def hy(self) -> float:
        return math.pi / (self.Ny + 1)

    @property
    def shape(self):
        return (self.Nx, self.Ny)

    @property
    def size(self) -> int:
        return self.Nx * self.Ny

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.hx * np.arange(1, self.Nx + 1)

    @property
    def eta(self) -> np.ndarray:
        return self.hy * np.arange(1, self.Ny + 1)

    @property
    def x_edges(self) -> np.ndarray:
        return -self.L + self.hx * (np.arange(self.Nx + 1) + 0.5)

    @property
    def eta_edges(self) -> np.ndarray:
        return self.hy * (np.arange(self.Ny + 1) + 0.5)

    def index(self, i, j):
        return np.asarray(i) * self.Ny + np.asarray(j)

    def mesh(self):
        """Node coordinates as two (Nx, Ny) arrays."""
        return np.meshgrid(self.x, self.eta, indexing="ij")

    def refined(self, factor: int = 2) -> "Grid":
        """Same L with spacings divided by ``factor``."""
        return Grid(self.L, factor * (self.Nx + 1) - 1, factor * (self.Ny + 1) - 1)

    def as_dict(self) -> dict:
        return {"L": float(self.L), "Nx": int(self.Nx), "Ny": int(self.Ny)}


def build_grid(L: float, Nx: int, Ny: int) -> Grid:
    return Grid(float(L), int(Nx), int(Ny))


def grid_with_spacing(L: float, hx: float, Ny: int) -> Grid:
    """Grid on [-L, L] whose x-spacing is ``hx`` (2L/hx must be an integer)."""
    cells = 2.0 * L / hx
    n = int(round(cells))
    if abs(cells - n) > 1e-9 * max(1.0, cells):
        raise ValueError(f"2L/hx = {cells} is not an integer")
    return Grid(float(L), n - 1, int(Ny))
