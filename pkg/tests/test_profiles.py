import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magwave.profiles import (
    C_STAR,
    FAMILIES,
    ConfigurationError,
    Profile,
    check_decay_bounds,
    check_discrete_condition,
    condition_gap,
    eval_profile,
    lorentzian_decay_constant,
)

DENSE = np.linspace(-50.0, 50.0, 200001)

families = st.sampled_from(["lorentzian", "gaussian_bump", "compact_bump"])


def test_zero_profile_all_orders():
    assert eval_profile(Profile(), 3.7) == (0.0, 0.0, 0.0, 0.0)


def test_lorentzian_center_and_unit_offset():
    p = Profile("lorentzian", 0.1)
    f, f1, _, _ = eval_profile(p, 0.0)
    assert f == pytest.approx(0.1) and f1 == 0.0
    f, f1, _, _ = eval_profile(p, 1.0)
    assert f == pytest.approx(0.05, abs=1e-15)
    assert f1 == pytest.approx(-0.05, abs=1e-15)


def test_scalar_in_scalar_out_and_vector():
    p = Profile("gaussian_bump", 0.3, 1.0, 2.0)
    assert isinstance(eval_profile(p, 0.5)[0], float)
    out = eval_profile(p, np.array([0.5, 1.5]))
    assert out[0].shape == (2,)


def test_invalid_descriptors():
    with pytest.raises(ConfigurationError):
        Profile("sinusoid", 0.1)
    with pytest.raises(ConfigurationError):
        Profile("lorentzian", 0.1, width=0.0)
    with pytest.raises(ConfigurationError):
        Profile("lorentzian", -0.1)


@given(families, st.floats(0.01, 1.0), st.floats(-2, 2), st.floats(0.3, 3.0), st.floats(-5, 5))
def test_derivatives_match_finite_differences(family, a, c, w, x):
    p = Profile(family, a, c, w)
    h = 1e-4 * w
    d = eval_profile(p, x)
    xs = x + h * np.arange(-2, 3)
    vals = [eval_profile(p, xs)[j] for j in range(3)]
    # each derivative against a central difference of the order below
    for j in range(3):
        fd = (vals[j][3] - vals[j][1]) / (2 * h)
        scale = max(abs(d[j + 1]), a / w ** (j + 1))
        assert abs(fd - d[j + 1]) <= 1e-6 * scale


@given(families, st.floats(0.0, 2.0), st.floats(-50, 50))
def test_profiles_non_negative(family, a, x):
    assert eval_profile(Profile(family, a), x)[0] >= 0.0


def test_compact_bump_support_and_peak():
    p = Profile("compact_bump", 0.4, 1.0, 0.5)
    f = eval_profile(p, np.array([0.49, 0.5, 1.0, 1.5, 1.51]))[0]
    assert f[0] == 0.0 and f[-1] == 0.0 and f[1] == 0.0
    assert f[2] == pytest.approx(0.4)


def test_lorentzian_decay_constant_matches_dense_sampling():
    p = Profile("lorentzian", 1.0)
    sups = check_decay_bounds(p, 10.0, np.linspace(-60, 60, 1200001)).observed_sup
    assert sups[0] == pytest.approx(1.0, rel=1e-9)
    assert sups[1] == pytest.approx(1.0, rel=1e-6)
    assert sups[2] == pytest.approx(2.0, rel=1e-9)
    assert sups[3] == pytest.approx(lorentzian_decay_constant(), rel=1e-6)
    assert lorentzian_decay_constant() == pytest.approx(5.217714, abs=1e-6)


@given(st.floats(1e-3, 1.0))
def test_lorentzian_satisfies_bounds_proportional_to_amplitude(a):
    p = Profile("lorentzian", a)
    assert check_decay_bounds(p, lorentzian_decay_constant() * a * (1 + 1e-9), DENSE).satisfied


def test_decay_bound_examples():
    z = check_decay_bounds(Profile(), 0.0, DENSE)
    assert z.satisfied and z.observed_sup == (0.0, 0.0, 0.0, 0.0)
    r = check_decay_bounds(Profile("lorentzian", 0.1), 0.1, DENSE)
    assert r.observed_sup[0] == pytest.approx(0.1)
    assert r.observed_sup[1] == pytest.approx(0.1, rel=1e-6)
    assert not r.satisfied  # second order reaches 0.2
    assert not check_decay_bounds(Profile("lorentzian", 0.1), 0.01, DENSE).satisfied
    with pytest.raises(ValueError):
        check_decay_bounds(Profile(), 1.0, [])


def test_c_star_value():
    assert C_STAR == pytest.approx(2 * math.sqrt(3) / math.sqrt(4 * math.pi**2 + 3))
    assert C_STAR == pytest.approx(0.53150, abs=5e-6)


def test_condition_examples():
    z = check_discrete_condition(Profile(), DENSE)
    assert z.satisfied and not z.strict_somewhere
    lo = check_discrete_condition(Profile("lorentzian", 0.1), Profile("lorentzian").default_samples())
    assert lo.satisfied and lo.strict_somewhere
    steep = Profile("compact_bump", 0.05, 0.0, 0.05)
    assert not check_discrete_condition(steep, np.linspace(-1, 1, 4001)).satisfied
    with pytest.raises(ValueError):
        check_discrete_condition(Profile(), [])


def test_default_samples_window():
    xs = Profile("lorentzian", 0.1, 2.0, 0.5).default_samples()
    assert xs.size == 2048
    assert xs[0] == pytest.approx(2.0 - 25.0) and xs[-1] == pytest.approx(2.0 + 25.0)


@given(families, st.floats(0.01, 1.0), st.floats(0.2, 3.0), st.floats(-20, 20))
def test_condition_gap_sign_is_pointwise(family, a, w, x):
    p = Profile(family, a, 0.0, w)
    gap = condition_gap(p, np.array([x]))[0]
    f, f1, _, _ = eval_profile(p, x)
    assert (gap <= 0) == (abs(f1) <= C_STAR * math.sqrt(f * (2 + f)))


def test_all_families_listed():
    assert set(FAMILIES) == {"lorentzian", "gaussian_bump", "compact_bump", "zero"}
