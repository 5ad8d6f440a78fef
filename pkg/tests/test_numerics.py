import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings, strategies as st

from artifact.numerics import (
    DomainError,
    NonConvergenceError,
    ONE,
    QuadratureSpec,
    ScaledReal,
    ZERO,
    airy,
    airy_scaled,
    airy_zero,
    integrate,
    integrate_with_error,
    log_gamma,
    relative_deviation,
)

# values from mpmath at 40 digits
AIRY_FROZEN = {
    -7.3: (0.33577037051514727697, 0.070874113769896473903),
    -2.5: (-0.11232506769296608919, -0.43242247184070529303),
    0.3: (0.27880648195500492466, 0.75248558508731563268),
    3.7: (0.0017455720006099785209, 47.560747499589458468),
    12.5: (2.3968278260780499363e-14, 1878291935622.0518674),
}


@pytest.mark.parametrize("x", sorted(AIRY_FROZEN))
def test_airy_matches_frozen_high_precision_values(x):
    ai, bi = AIRY_FROZEN[x]
    p = airy(x)
    assert p.ai == pytest.approx(ai, rel=1e-13, abs=1e-16)
    assert p.bi == pytest.approx(bi, rel=1e-13)


def test_airy_against_scipy_on_a_dense_grid():
    xs = np.linspace(-30, 30, 601)
    ai, aip, bi, bip = sc.airy(xs)
    for x, a, ap, b, bp in zip(xs, ai, aip, bi, bip):
        p = airy(float(x))
        scale_a = abs(a) if x > 0 else max(1.0, abs(x)) ** -0.25
        scale_ap = abs(ap) if x > 0 else max(1.0, abs(x)) ** 0.25
        assert abs(p.ai - a) <= 2e-13 * scale_a
        assert abs(p.ai_prime - ap) <= 2e-13 * scale_ap
        assert abs(p.bi - b) <= 2e-13 * max(abs(b), max(1.0, abs(x)) ** -0.25 if x < 0 else 0)
        assert abs(p.bi_prime - bp) <= 2e-13 * max(abs(bp), max(1.0, abs(x)) ** 0.25 if x < 0 else 0)


def test_values_at_origin_match_gamma_closed_form():
    g = math.gamma(2 / 3)
    p = airy(0.0)
    assert abs(p.ai - 1 / (3 ** (2 / 3) * g)) < 1e-15
    assert abs(p.bi - 1 / (3 ** (1 / 6) * g)) < 1e-15
    assert abs(p.ai_prime + 1 / (3 ** (1 / 3) * math.gamma(1 / 3))) < 1e-15


@settings(max_examples=200, deadline=None)
@given(st.floats(-60.0, 8.0))
def test_wronskian_is_one_over_pi(x):
    p = airy(x)
    scale = 1.0 if x < 0 else max(1.0, abs(p.ai * p.bi_prime))
    assert abs(p.wronskian() - 1 / math.pi) <= 1e-12 * scale


@pytest.mark.parametrize("x", [15.0, 60.0, 200.0, 1500.0])
def test_scaled_airy_reaches_beyond_double_range(x):
    s = airy_scaled(x)
    zeta = 2 / 3 * x**1.5
    ref_ai = mpmath.log(mpmath.airyai(x))
    ref_bi = mpmath.log(mpmath.airybi(x))
    assert s.ai.log_abs() == pytest.approx(float(ref_ai), rel=1e-13)
    assert s.bi.log_abs() == pytest.approx(float(ref_bi), rel=1e-13)
    assert s.ai.log_abs() < -zeta + 1


def test_airy_zeros_against_scipy_and_mpmath():
    # scipy's table is only good to about 1e-11 (k = 5), so mpmath is the tight oracle
    ref = sc.ai_zeros(60)[0]
    for k in range(1, 61):
        assert airy_zero(k) == pytest.approx(ref[k - 1], abs=1e-10)
        assert airy_zero(k) == pytest.approx(float(mpmath.airyaizero(k)), abs=1e-13 * abs(ref[k - 1]))
    assert airy_zero(1) == pytest.approx(-2.3381074104597670385, abs=1e-13)
    assert airy_zero(3) == pytest.approx(-5.5205598280955510591, abs=1e-13)
    assert all(airy_zero(k + 1) < airy_zero(k) < 0 for k in range(1, 21))
    assert abs(airy(airy_zero(40)).ai) < 1e-12


def test_airy_zero_rejects_bad_index():
    with pytest.raises(DomainError):
        airy_zero(0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e300, 1e300, allow_nan=False), st.integers(-5000, 5000))
def test_scaled_real_normalize_round_trip(v, e):
    s = ScaledReal.normalize(v, e)
    if v == 0:
        assert s == ZERO
    else:
        assert 1.0 <= s.mantissa < 2.0
        assert s.sign == (1 if v > 0 else -1)
        assert s.log_abs() == pytest.approx(math.log(abs(v)) + e * math.log(2), rel=1e-14, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e6, 1e6).filter(lambda v: abs(v) > 1e-6), st.floats(-1e6, 1e6).filter(lambda v: abs(v) > 1e-6))
def test_scaled_real_arithmetic_matches_floats(a, b):
    A, B = ScaledReal.normalize(a), ScaledReal.normalize(b)
    assert (A * B).to_float() == pytest.approx(a * b, rel=1e-15)
    assert (A / B).to_float() == pytest.approx(a / b, rel=1e-15)
    assert (A + B).to_float() == pytest.approx(a + b, rel=1e-12, abs=1e-9)
    assert (A - B).to_float() == pytest.approx(a - b, rel=1e-12, abs=1e-9)
    assert (A < B) == (a < b)


def test_scaled_real_huge_exponents_do_not_overflow():
    big = ScaledReal.from_log(1e6)
    tiny = ScaledReal.from_log(-1e6)
    assert (big * tiny).to_float() == pytest.approx(1.0, rel=1e-9)
    assert math.isinf(big.to_float()) or big.to_float() > 1e300
    assert (big + ONE).ratio(big) == pytest.approx(1.0)


def test_relative_deviation_aligns_exponents():
    a = ScaledReal.normalize(1.0, 4000)
    b = ScaledReal.normalize(1.001, 4000)
    assert relative_deviation(b, a) == pytest.approx(1e-3, rel=1e-9)


def test_integrate_smooth_and_singular_endpoints():
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-13)
    f = lambda u: 1 / np.sqrt(np.maximum(1 - u * u, 1e-300))
    spec = QuadratureSpec(endpoint_singularity="sqrt_right")
    assert integrate(f, 0.0, 1.0, spec) == pytest.approx(math.pi / 2, abs=1e-11)
    v, err = integrate_with_error(lambda u: np.log(u), 0.0, 1.0, QuadratureSpec(endpoint_singularity="sqrt_left"))
    assert v == pytest.approx(-1.0, abs=1e-10) and err < 1e-9


def test_integrate_reports_non_convergence():
    with pytest.raises(NonConvergenceError):
        integrate(lambda u: np.where(u == u, np.nan, 0.0), 0.0, 1.0)
    with pytest.raises(NonConvergenceError) as info:
        integrate(lambda u: np.sin(1 / np.maximum(u, 1e-300)), 0.0, 1.0, QuadratureSpec(max_subdivisions=20))
    assert math.isfinite(info.value.estimate) or math.isnan(info.value.estimate)


def test_log_gamma_domain():
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi))
    with pytest.raises(DomainError):
        log_gamma(0.0)
