"""Deformation profiles f(x) for the widened strip 0 < y < pi (1 + f(x)).

Every family returns f and its first three derivatives in closed form, so
downstream code never differentiates f numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES = ("lorentzian", "gaussian_bump", "compact_bump", "zero")

#: Constant of the sufficient condition |f'| <= C_STAR sqrt(f (2 + f)).
C_STAR = 2.0 * math.sqrt(3.0) / math.sqrt(4.0 * math.pi**2 + 3.0)

# sup_x (1+x^2)|f'''(x)| / alpha for the unit Lorentzian, attained at
# x^2 = (4 - sqrt(13)) / 3 (root of 1 - 8x^2 + 3x^4).
_X3 = math.sqrt((4.0 - math.sqrt(13.0)) / 3.0)
LORENTZIAN_THIRD_ORDER_SUP = 24.0 * _X3 * (1.0 - _X3**2) / (1.0 + _X3**2) ** 3


class ConfigurationError(ValueError):
    """Raised for descriptors that cannot be evaluated."""


@dataclass(frozen=True)
class Profile:
    """Parametric deformation profile.

    ``family`` is one of :data:`FAMILIES`. ``amplitude`` is the peak value
    of f, ``center`` and ``width`` its location and length scale.
    """

    family: str = "zero"
    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown profile family {self.family!r}")
        if not self.width > 0:
            raise ConfigurationError("profile width must be positive")
        if not self.amplitude >= 0:
            raise ConfigurationError("profile amplitude must be non-negative")

    def with_amplitude(self, amplitude: float) -> "Profile":
        return Profile(self.family, float(amplitude), self.center, self.width)

    def derivatives(self, x):
        """Return ``(f, f', f'', f''')`` evaluated at ``x``."""
        return eval_profile(self, x)

    def f(self, x):
        return eval_profile(self, x)[0]

    def g(self, x):
        """Width function g = 1 + f."""
        return 1.0 + eval_profile(self, x)[0]

    def sup_f(self) -> float:
        return 0.0 if self.family == "zero" else self.amplitude

    def default_samples(self, n: int = 2048, span: float = 50.0) -> np.ndarray:
        """Uniform samples on [c - span*w, c + span*w]."""
        half = span * self.width
        return np.linspace(self.center - half, self.center + half, n)


def _lorentzian(s, a, w):
    q = 1.0 + s * s
    f = a / q
    f1 = -2.0 * a * s / q**2 / w
    f2 = a * (6.0 * s * s - 2.0) / q**3 / w**2
    f3 = 24.0 * a * s * (1.0 - s * s) / q**4 / w**3
    return f, f1, f2, f3


def _gaussian(s, a, w):
    e = a * np.exp(-s * s)
    # d^n/ds^n exp(-s^2) = (-1)^n H_n(s) exp(-s^2), physicists' Hermite.
    f1 = -2.0 * s * e / w
    f2 = (4.0 * s * s - 2.0) * e / w**2
    f3 = -(8.0 * s**3 - 12.0 * s) * e / w**3
    return e, f1, f2, f3


def _compact(s, a, w):
    f = np.zeros_like(s)
    f1 = np.zeros_like(s)
    f2 = np.zeros_like(s)
    f3 = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    t = s[inside]
    u = 1.0 - t * t
    e = a * np.exp(1.0 - 1.0 / u)
    # f = a exp(1 - 1/u); log-derivative q = -2t/u^2.
    q = -2.0 * t / u**2
    q1 = -2.0 / u**2 - 8.0 * t * t / u**3
    q2 = -24.0 * t / u**3 - 48.0 * t**3 / u**4
    f[inside] = e
    f1[inside] = e * q / w
    f2[inside] = e * (q * q + q1) / w**2
    f3[inside] = e * (q**3 + 3.0 * q * q1 + q2) / w**3
    return f, f1, f2, f3


def eval_profile(p: Profile, x):
    """Closed-form ``(f, f', f'', f''')`` of profile ``p`` at ``x``.

    Scalars in give scalars out; arrays are evaluated elementwise.
    """
    if p.family not in FAMILIES:
        raise ConfigurationError(f"unknown profile family {p.family!r}")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    s = (xa - p.center) / p.width
    if p.family == "zero" or p.amplitude == 0.0:
        z = np.zeros_like(xa)
        out = (z, z.copy(), z.copy(), z.copy())
    elif p.family == "lorentzian":
        out = _lorentzian(s, p.amplitude, p.width)
    elif p.family == "gaussian_bump":
        out = _gaussian(s, p.amplitude, p.width)
    else:
        out = _compact(s, p.amplitude, p.width)
    if scalar:
        return tuple(float(v[0]) for v in out)
    return tuple(np.asarray(v) for v in out)


def lorentzian_decay_constant() -> float:
    """K such that the unit Lorentzian (center 0, width 1) of amplitude a
    satisfies the four decay bounds with constant K*a.

    Per-order suprema of (1+x^2)|f^(j)|/a are 1, 1, 2 and
    :data:`LORENTZIAN_THIRD_ORDER_SUP` (about 5.2177).
    """
    return max(1.0, 1.0, 2.0, LORENTZIAN_THIRD_ORDER_SUP)


@dataclass(frozen=True)
class BoundReport:
    claimed_alpha: float
    observed_sup: tuple
    satisfied: bool


@dataclass(frozen=True)
class ConditionReport:
    max_violation: float
    strict_somewhere: bool
    satisfied: bool


def _samples(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 0:
        raise ValueError("sample sequence must be non-empty")
    return xs


def check_decay_bounds(p: Profile, claimed_alpha: float, xs) -> BoundReport:
    """Sample sup_x (1+x^2)|f^(j)(x)| for j = 0..3 and compare to the claim.

    The window should reach at least 50 widths on each side so that the
    tails are represented.
    """
    xs = _samples(xs)
    weight = 1.0 + xs * xs
    sups = tuple(float(np.max(weight * np.abs(d))) for d in eval_profile(p, xs))
    ok = all(s <= claimed_alpha for s in sups)
    return BoundReport(float(claimed_alpha), sups, bool(ok))


def condition_gap(p: Profile, xs) -> np.ndarray:
    """Pointwise |f'| - C_STAR sqrt(f (2 + f)); non-positive where it holds."""
    f, f1, _, _ = eval_profile(p, np.asarray(xs, dtype=float))
    return np.abs(f1) - C_STAR * np.sqrt(f * (2.0 + f))


def check_discrete_condition(p: Profile, xs) -> ConditionReport:
    xs = _samples(xs)
    gap = condition_gap(p, xs)
    worst = float(np.max(gap))
    return ConditionReport(worst, bool(np.any(gap < 0.0)), bool(worst <= 0.0))
