import numpy as np
import pytest

from magwave.analysis import sweep as sw
from magwave.analysis.sweep import alpha_sweep
from magwave.eigensolve import SpectrumResult, default_delta
from magwave.gauge import Field
from magwave.grid import Grid, grid_with_spacing
from magwave.profiles import Profile

LOR = Profile("lorentzian", 0.1)
DISK = Field("smooth_disk_bump", 1.0)


def scripted(lam_of_alpha, converged=lambda a: True):
    def fake(p, B, grid, k=1, **kw):
        lam = lam_of_alpha(p.amplitude, B.is_zero)
        return SpectrumResult(np.array([lam]), np.zeros(1), np.zeros(1, bool), 0.0, 1,
                              converged(p.amplitude))
    return fake


def test_empty_and_unordered_alphas():
    g = Grid(10.0, 39, 7)
    with pytest.raises(ValueError):
        alpha_sweep(LOR, DISK, [], g)
    with pytest.raises(ValueError):
        alpha_sweep(LOR, DISK, [0.2, 0.1], g)
    with pytest.raises(ValueError):
        alpha_sweep(LOR, DISK, [0.0, 0.1], g)


def test_real_sweep_columns_and_bracket():
    g = grid_with_spacing(40.0, 0.5, 15)
    r = alpha_sweep(LOR, DISK, [0.01, 0.05, 0.1, 0.2], g, bisect_steps=2)
    nonmag = {a: f for a, f in zip(r.alphas, r.flag_nonmagnetic)}
    assert nonmag[0.05] and nonmag[0.1] and nonmag[0.2]
    assert r.alpha_critical is not None
    lo, hi = r.alpha_critical
    flags = dict(zip(r.alphas, r.flag_magnetic))
    assert lo in flags and hi in flags and not flags[lo] and flags[hi]
    assert np.all(np.diff(r.alphas) > 0) and r.monotone
    assert len(list(r.gnuplot_rows())) == len(r.alphas)


def test_bisection_tightens_bracket(monkeypatch):
    d = default_delta(40.0, 1e-10)
    monkeypatch.setattr(sw, "solve_waveguide", scripted(lambda a, z: 1.0 - (a - 0.31) - d))
    r = alpha_sweep(LOR, DISK, [0.1, 0.5], grid_with_spacing(40.0, 0.5, 15), resolution=0.0)
    lo, hi = r.alpha_critical
    assert lo < 0.31 < hi and hi - lo == pytest.approx(0.4 / 2**8)
    assert len(r.alphas) == 2 + 8


def test_unresolved_midpoint_stops_bisection(monkeypatch):
    d = default_delta(40.0, 1e-10)
    monkeypatch.setattr(sw, "solve_waveguide", scripted(lambda a, z: 1.0 - d - 0.01 * (a - 0.3)))
    r = alpha_sweep(LOR, DISK, [0.1, 0.5], grid_with_spacing(40.0, 0.5, 15), resolution=0.1)
    assert r.alpha_critical == (0.1, 0.5)
    assert list(r.resolved) == [True, False, True]


def test_non_monotone_flags_reported(monkeypatch):
    lam = {0.1: 0.9, 0.2: 1.1, 0.3: 0.9}
    monkeypatch.setattr(sw, "solve_waveguide", scripted(lambda a, z: lam.get(a, 1.1)))
    r = alpha_sweep(LOR, DISK, [0.1, 0.2, 0.3], grid_with_spacing(40.0, 0.5, 15), bisect_steps=0)
    assert not r.monotone
    assert r.alpha_critical == (0.2, 0.3)
    assert any("monotone" in n for n in r.notes)


def test_non_converged_points_excluded(monkeypatch):
    monkeypatch.setattr(sw, "solve_waveguide",
                        scripted(lambda a, z: 0.5 if a >= 0.3 else 1.1, converged=lambda a: a != 0.3))
    r = alpha_sweep(LOR, DISK, [0.1, 0.2, 0.3, 0.4], grid_with_spacing(40.0, 0.5, 15),
                    bisect_steps=0)
    assert r.alpha_critical == (0.2, 0.4)
    assert list(r.converged) == [True, True, False, True]
