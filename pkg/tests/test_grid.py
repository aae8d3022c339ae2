import math

import numpy as np
import pytest

from magwave.grid import Grid, build_grid, grid_with_spacing


def test_spacings():
    g = build_grid(10, 199, 31)
    assert g.hx == pytest.approx(0.1)
    assert g.hy == pytest.approx(math.pi / 32)
    assert g.size == 199 * 31


def test_minimal_grid_and_errors():
    assert build_grid(20, 3, 3).shape == (3, 3)
    for args in [(-1, 9, 9), (10, 2, 9), (10, 9, 2), (0, 9, 9)]:
        with pytest.raises(ValueError):
            build_grid(*args)


def test_nodes_strictly_interior_and_ordering():
    g = build_grid(2.0, 7, 5)
    assert g.x.min() > -2.0 and g.x.max() < 2.0
    assert g.eta.min() > 0 and g.eta.max() < math.pi
    X, H = g.mesh()
    i, j = 3, 2
    k = g.index(i, j)
    assert X.ravel()[k] == g.x[i] and H.ravel()[k] == g.eta[j]


def test_edges_between_nodes():
    g = build_grid(1.0, 5, 4)
    assert np.allclose(np.diff(g.x_edges), g.hx)
    assert g.x_edges[0] == pytest.approx(-1.0 + 0.5 * g.hx)
    assert len(g.eta_edges) == g.Ny + 1


def test_refinement_and_spacing_constructor():
    g = grid_with_spacing(10, 0.25, 15)
    assert g.hx == pytest.approx(0.25) and g.Nx == 79
    r = g.refined()
    assert r.hx == pytest.approx(0.125) and r.hy == pytest.approx(g.hy / 2)
    with pytest.raises(ValueError):
        grid_with_spacing(10, 0.3, 15)
