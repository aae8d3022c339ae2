import math

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from magwave import eigensolve as es
from magwave.assembly import OperatorMatrix, assemble_form, mass_matrix
from magwave.eigensolve import (
    SpectrumResult,
    convergence_study,
    count_below_threshold,
    default_delta,
    relative_residuals,
    richardson,
    smallest_eigenpairs,
    solve_waveguide,
)
from magwave.gauge import Field, pullback_gauge
from magwave.grid import Grid, grid_with_spacing
from magwave.profiles import Profile

FLAT = Profile()
NOFIELD = Field()
DISK = Field("smooth_disk_bump", 1.0)


def rect(L, m, n=1):
    return n**2 + (m * math.pi / (2 * L)) ** 2


def test_flat_strip_lowest_three():
    g = Grid(10.0, 199, 31)
    s = solve_waveguide(FLAT, NOFIELD, g, k=3)
    assert s.converged
    exact = np.array([rect(10, m) for m in (1, 2, 3)])
    assert s.eigenvalues[0] == pytest.approx(1.02467, abs=1e-3)
    # discrete rectangle eigenvalues as exact oracle for the grid
    ex = (2 / g.hx * np.sin(np.arange(1, 4) * math.pi * g.hx / 40)) ** 2
    ey = (2 / g.hy * math.sin(g.hy / 2)) ** 2
    assert np.allclose(s.eigenvalues, ex + ey, rtol=1e-9)
    assert np.all(np.abs(s.eigenvalues - exact) < 2 * (g.hx**2 + g.hy**2))


def test_diagonal_pencil():
    d = np.linspace(5.0, 0.5, 600)
    w = np.linspace(1.0, 2.0, 600)
    s = smallest_eigenpairs(sp.diags(d), sp.diags(w), k=4, sigma=0.0)
    assert np.allclose(s.eigenvalues, np.sort(d / w)[:4], rtol=1e-10)
    s = smallest_eigenpairs(sp.diags(d[:50]), sp.diags(w[:50]), k=2)
    assert np.allclose(s.eigenvalues, np.sort(d[:50] / w[:50])[:2], rtol=1e-12)


def test_residuals_recomputed_independently():
    g = Grid(8.0, 79, 15)
    p = Profile("lorentzian", 0.2)
    gs = pullback_gauge(DISK, p, g)
    M = assemble_form(p, gs, g)
    mass = mass_matrix(g)
    s = smallest_eigenpairs(M, mass, k=3)
    A, B = M.matrix, mass.matrix
    for lam, v, r in zip(s.eigenvalues, s.vectors.T, s.residual_norms):
        mine = np.linalg.norm(A @ v - lam * (B @ v)) / np.linalg.norm(B @ v)
        assert mine <= 2 * max(r, 1e-15) and r <= 2 * max(mine, 1e-15)
        assert r <= 1e-8 * max(1.0, abs(lam))
    assert np.all(np.diff(s.eigenvalues) >= 0)
    assert np.array_equal(s.below_threshold, s.eigenvalues < 1 - s.delta)


def test_deterministic_given_seed():
    g = Grid(8.0, 79, 15)
    a = solve_waveguide(Profile("lorentzian", 0.1), DISK, g, k=2)
    b = solve_waveguide(Profile("lorentzian", 0.1), DISK, g, k=2)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.vectors, b.vectors)


def test_node_reordering_invariance():
    g = Grid(8.0, 79, 15)
    p = Profile("lorentzian", 0.1)
    M = assemble_form(p, pullback_gauge(DISK, p, g), g)
    perm = np.random.default_rng(7).permutation(g.size)
    P = sp.identity(g.size, format="csr")[perm]
    s0 = smallest_eigenpairs(M, mass_matrix(g), k=3, tol=1e-12)
    Mp = OperatorMatrix(sp.csr_matrix(P @ M.matrix @ P.T), g, M.meta)
    s1 = smallest_eigenpairs(Mp, mass_matrix(g), k=3, tol=1e-12)
    assert np.allclose(s0.eigenvalues, s1.eigenvalues, atol=1e-11)


def test_monotone_under_truncation():
    p = Profile("lorentzian", 0.05)
    lams = [solve_waveguide(p, DISK, grid_with_spacing(L, 0.25, 15), k=1).eigenvalues[0]
            for L in (5.0, 10.0, 20.0)]
    assert lams[0] >= lams[1] >= lams[2]


def test_lorentzian_bound_state_stable_in_L():
    p = Profile("lorentzian", 0.1)
    a = solve_waveguide(p, NOFIELD, grid_with_spacing(40.0, 0.25, 31), k=1).eigenvalues[0]
    b = solve_waveguide(p, NOFIELD, grid_with_spacing(80.0, 0.25, 31), k=1).eigenvalues[0]
    assert a < 1 and abs(a - b) < 1e-4
    # regression fixture for this grid
    assert a == pytest.approx(0.9645385255, abs=1e-9)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        smallest_eigenpairs(sp.identity(10), sp.identity(11))


def test_non_convergence_is_flagged(monkeypatch):
    def boom(*args, **kw):
        raise spla.ArpackNoConvergence("no", np.array([1.5]), np.ones((kw["M"].shape[0], 1)))

    monkeypatch.setattr(es.spla, "eigs", boom)
    g = Grid(8.0, 79, 15)
    s = solve_waveguide(Profile("lorentzian", 0.1), DISK, g, k=2)
    assert not s.converged and s.eigenvalues.size == 1


def test_count_below_threshold():
    s = SpectrumResult(np.array([0.95, 1.002]), np.zeros(2), np.zeros(2, bool), 0.01, 1, True)
    assert count_below_threshold(s, 0.01) == (1, pytest.approx(0.05))
    empty = SpectrumResult(np.empty(0), np.empty(0), np.empty(0, bool), 0.01, 0, True)
    assert count_below_threshold(empty, 0.01) == (0, None)
    flat = solve_waveguide(FLAT, NOFIELD, Grid(10.0, 99, 15), k=3)
    assert count_below_threshold(flat, 0.01)[0] == 0
    with pytest.raises(ValueError):
        count_below_threshold(s, -1.0)


def test_default_delta():
    assert default_delta(10.0, 1e-10) == pytest.approx(2 * (math.pi / 20) ** 2)
    assert default_delta(1e6, 1e-3) == pytest.approx(1e-2)


def test_relative_residuals_exact_pair():
    A = sp.diags([1.0, 2.0, 3.0])
    assert relative_residuals(A, sp.identity(3), [2.0], np.array([[0.0], [1.0], [0.0]]))[0] == 0


def test_richardson_recovers_quadratic_model():
    h = np.array([0.4, 0.2, 0.1])
    vals = 3.0 + 0.7 * h**2
    ex, order = richardson(*vals, ratio=2.0)
    assert ex == pytest.approx(3.0) and order == pytest.approx(2.0)


def test_convergence_study_flat_not_discrete():
    grids = []
    for L in (5.0, 10.0):
        g = grid_with_spacing(L, 0.5, 7)
        for _ in range(3):
            grids.append(g)
            g = g.refined()
    r = convergence_study(FLAT, NOFIELD, grids, k=1)
    assert abs(r.order[0] - 2) < 0.2
    assert r.discrete == [False]
    assert set(r.extrapolated) == {5.0, 10.0}


def test_convergence_study_lorentzian_discrete():
    grids = []
    for L in (20.0, 40.0):
        g = grid_with_spacing(L, 0.4, 15)
        for _ in range(3):
            grids.append(g)
            g = g.refined()
    r = convergence_study(Profile("lorentzian", 0.1), NOFIELD, grids, k=1)
    assert r.discrete == [True]


def test_convergence_study_preconditions():
    with pytest.raises(ValueError):
        convergence_study(FLAT, NOFIELD, [])
    with pytest.raises(ValueError):
        convergence_study(FLAT, NOFIELD, [(5, 9, 7), (5, 19, 15), (5, 39, 31)])
    with pytest.raises(ValueError):
        convergence_study(FLAT, NOFIELD, [(5, 9, 7), (10, 19, 7)])
