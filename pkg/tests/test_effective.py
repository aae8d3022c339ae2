import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.optimize import brentq

from magwave.analysis.effective import (
    ConditionViolation,
    effective_potential,
    ground_1d,
    solve_1d,
    variational_crosscheck,
)
from magwave.grid import Grid, grid_with_spacing
from magwave.profiles import Profile, condition_gap


def test_zero_profile_potential_vanishes():
    V = effective_potential(Profile(), np.linspace(-10, 10, 101))
    assert np.all(V.V == 0)


def test_lorentzian_center_value():
    V = effective_potential(Profile("lorentzian", 0.1), [0.0])
    assert V.V[0] == pytest.approx(-(0.2 + 0.01) / 1.21, abs=1e-12)
    assert V.V[0] == pytest.approx(-0.173554, abs=1e-6)


@pytest.mark.parametrize("fam", ["lorentzian", "gaussian_bump", "compact_bump"])
def test_tail_decay(fam):
    p = Profile(fam, 0.3, 0.0, 1.5)
    V = effective_potential(p, [100 * 1.5, -100 * 1.5])
    assert np.all(np.abs(V.V) <= 3 * 0.3 / (1 + 100.0**2))


def test_empty_samples_rejected():
    with pytest.raises(ValueError):
        effective_potential(Profile(), [])


@given(st.sampled_from(["lorentzian", "gaussian_bump", "compact_bump"]), st.floats(0.01, 1.0),
       st.floats(0.05, 3.0), st.floats(-10, 10))
def test_sign_of_potential_matches_condition(fam, a, w, x):
    p = Profile(fam, a, 0.0, w)
    gap = condition_gap(p, np.array([x]))[0]
    V = effective_potential(p, [x]).V[0]
    assume(abs(gap) > 1e-9 and abs(V) > 1e-12)
    assert (V <= 0) == (gap <= 0)


def test_zero_potential_has_no_bound_state():
    assert solve_1d(lambda x: np.zeros_like(x), 20.0, 1000).size == 0


def _well_oracle(V0=1.0, a=1.0):
    # even ground state of -u'' - V0 on (-a, a): k tan(k a) = kappa, k^2 + kappa^2 = V0
    k = brentq(lambda k: k * math.tan(k * a) - math.sqrt(V0 - k * k), 1e-9, min(math.sqrt(V0), math.pi / (2 * a)) - 1e-12)
    return -(V0 - k * k)


def test_square_well_against_transcendental_root():
    def V(x):
        out = np.where(np.abs(x) < 1.0, -1.0, 0.0)
        return np.where(np.isclose(np.abs(x), 1.0, atol=1e-12), -0.5, out)

    vals = solve_1d(V, 20.0, 79999)  # h = 5e-4 puts nodes on x = +-1
    assert vals[0] == pytest.approx(_well_oracle(), abs=1e-6)
    assert vals.size == 1


def test_lorentzian_negative_state_regression():
    p = Profile("lorentzian", 0.1)
    vals = solve_1d(effective_potential(p, [0.0]), 50.0, 4000)
    assert vals.size >= 1
    assert vals[0] == pytest.approx(-0.0335526348, abs=1e-9)


def test_invalid_sizes():
    with pytest.raises(ValueError):
        solve_1d(lambda x: 0 * x, 10.0, 50)
    with pytest.raises(ValueError):
        solve_1d(lambda x: 0 * x, -1.0, 500)
    with pytest.raises(TypeError):
        solve_1d([0.0, 1.0], 10.0, 500)


def test_variational_zero_profile():
    g = Grid(10.0, 99, 31)
    lam2d, rhs = variational_crosscheck(Profile(), g)
    shift = 1 + (math.pi / 20) ** 2
    assert lam2d == pytest.approx(shift, abs=3e-3)
    assert rhs == pytest.approx(shift, abs=1e-4)


def test_variational_inequality_and_widening_gap():
    g = grid_with_spacing(40.0, 0.25, 31)
    gaps = []
    for a in (0.1, 0.2, 0.3):
        lam2d, rhs = variational_crosscheck(Profile("lorentzian", a), g)
        assert lam2d <= rhs + 1e-3
        gaps.append(rhs - lam2d)
    assert gaps[0] < gaps[1] < gaps[2]


def test_variational_refuses_when_condition_fails():
    with pytest.raises(ConditionViolation):
        variational_crosscheck(Profile("compact_bump", 0.05, 0.0, 0.05), Grid(5.0, 49, 15))


def test_ground_1d_sign_free():
    assert ground_1d(lambda x: np.zeros_like(x), 10.0, 999) > 0
