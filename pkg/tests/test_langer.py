import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.langer import (
    CoefficientModel,
    airy_approximant,
    airy_shift_check,
    amplitude_g,
    k_squared,
    leading_shift,
    residual_beta,
    rho1,
    rho2,
    turning_points,
)
from artifact.numerics import DomainError, airy

HERMITE = CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)
LAGUERRE = CoefficientModel(1.0, 2.0, 1.0, 0.25)
MEIXNER = CoefficientModel(0.5 / 0.75, 1.25 / 0.75, 1.0, 0.0)
MP = CoefficientModel(math.sqrt(2.0), 2.0, 1.0, 0.5)


def test_case_labels():
    assert HERMITE.case == "case1a"
    assert LAGUERRE.case == "case2"
    assert MEIXNER.case == "case3"
    assert MP.case == "case1"


@pytest.mark.parametrize("kw", [dict(a=0.0), dict(b=-1.0), dict(alpha=0.0), dict(s1=-0.5)])
def test_model_validation(kw):
    args = dict(a=1.0, b=0.0, alpha=1.0, s1=0.0)
    args.update(kw)
    with pytest.raises(ValueError):
        CoefficientModel(**args)


def _mp_rho(model, t, y, eps, sign=1.0):
    """Same definition integrated by mpmath tanh-sinh: (3/2 int acosh|acos z)^(2/3)."""
    mpmath.mp.dps = 30
    tp = float(model.q_eps_inv(sign * y / (sign * model.b + 2 * model.a) if sign > 0 else y / (model.b - 2 * model.a), eps))

    def z(u):
        q = ((u + (model.s1 + 0.5) * eps) / (1 + (model.s1 + 0.5) * eps)) ** (1 / model.alpha)
        return sign * (y / (2 * model.a * q) - model.b / (2 * model.a))

    if t < tp:
        v = mpmath.quad(lambda u: mpmath.acosh(max(z(u), 1)), [t, tp])
        return float((1.5 * v) ** (mpmath.mpf(2) / 3))
    v = mpmath.quad(lambda u: mpmath.acos(min(max(z(u), -1), 1)), [tp, t])
    return -float((1.5 * v) ** (mpmath.mpf(2) / 3))


@pytest.mark.parametrize(
    "model,t,y,eps",
    [
        (HERMITE, 1.0, 1.3, 0.0),
        (HERMITE, 1.0, 0.7, 0.01),
        (LAGUERRE, 0.8, 3.5, 0.02),
        (LAGUERRE, 1.0, 2.0, 0.0),
        (MEIXNER, 1.0, 2.6, 0.005),
        (MP, 0.6, 4.0, 0.0),
    ],
)
def test_rho1_against_independent_quadrature(model, t, y, eps):
    assert rho1(model, t, y, eps) == pytest.approx(_mp_rho(model, t, y, eps), rel=1e-9, abs=1e-12)


def test_rho1_hermite_closed_form():
    # eps = 0, t = 1: rho1 at sqrt(2) y equals 2^(2/3) ((3/4)(y sqrt(y^2-1) - acosh y))^(2/3)
    for y in (1.05, 1.5, 3.0):
        ref = 2 ** (2 / 3) * (0.75 * (y * math.sqrt(y * y - 1) - math.acosh(y))) ** (2 / 3)
        assert rho1(HERMITE, 1.0, math.sqrt(2) * y, 0.0) == pytest.approx(ref, rel=1e-11)
    for y in (0.3, 0.9):
        ref = -(2 ** (2 / 3)) * (0.75 * (math.acos(y) - y * math.sqrt(1 - y * y))) ** (2 / 3)
        assert rho1(HERMITE, 1.0, math.sqrt(2) * y, 0.0) == pytest.approx(ref, rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 1.7), st.sampled_from([HERMITE, LAGUERRE, MEIXNER, MP]), st.sampled_from([0.0, 0.01]))
def test_rho1_sign_follows_band_edge(frac, model, eps):
    t = 1.0
    edge = float(model.gamma_plus(t, eps))
    y = frac * edge
    if model.case == "case3" and y <= float(model.gamma_minus(t, eps)) * 1.05:
        return
    if abs(frac - 1) < 1e-6:
        return
    r = rho1(model, t, y, eps)
    assert np.sign(r) == np.sign(y - edge)


def test_rho1_continuous_through_turning_point():
    y = 1.9
    data = turning_points(LAGUERRE, y, 0.01)
    tp = data.tp_plus
    for h in (3e-5, 2e-4, 1e-3):
        left = rho1(LAGUERRE, tp - h, y, 0.01)
        right = rho1(LAGUERRE, tp + h, y, 0.01)
        slope = (left - right) / (2 * h)
        assert left > 0 > right
        # the series side and the quadrature side agree on the slope
        assert slope == pytest.approx((left - rho1(LAGUERRE, tp, y, 0.01)) / h, rel=0.02)


def test_rho2_conventions():
    assert rho2(MP, 1.0, -1.5, 0.0) > 0  # beyond the lower edge: growth
    assert rho2(MP, 1.0, -0.5, 0.0) < 0
    # case3: positive on the saturated side below b - 2a
    low = float(MEIXNER.gamma_minus(1.0, 0.0))
    assert rho2(MEIXNER, 1.0, 0.5 * low, 0.0) > 0
    assert rho2(MEIXNER, 1.0, 1.2 * low, 0.0) < 0
    with pytest.raises(DomainError):
        rho2(LAGUERRE, 1.0, 1.0, 0.0)


def test_k_squared_signs_and_domain():
    assert k_squared(HERMITE, 1.0, 2.0, 0.0) > 0
    assert k_squared(HERMITE, 1.0, 0.5, 0.0) < 0
    with pytest.raises(DomainError):
        k_squared(HERMITE, 1.0, -2.0, 0.0)


def test_turning_points_regions():
    assert turning_points(HERMITE, 2.0, 0.0).region == "outer_growth"
    assert turning_points(HERMITE, float(HERMITE.gamma_plus(1.0, 0.0)), 0.0).region == "airy_band_plus"
    assert turning_points(MEIXNER, 0.05, 0.0, window=0.05).region == "saturated"
    assert turning_points(LAGUERRE, 1.0, 0.0).tp_minus is None


def test_amplitude_has_finite_limit_at_turning_point():
    y, eps = 1.3, 0.01
    tp = turning_points(HERMITE, y, eps).tp_plus
    vals = [amplitude_g(HERMITE, tp + d, y, eps, rho1(HERMITE, tp + d, y, eps)) for d in (-2e-3, -5e-5, 0.0, 5e-5, 2e-3)]
    assert all(math.isfinite(v) and v > 0 for v in vals)
    assert vals[2] == pytest.approx(0.5 * (vals[1] + vals[3]), rel=1e-6)
    assert abs(vals[0] - vals[4]) < 0.05 * vals[2]


def test_airy_approximant_is_amplitude_times_airy():
    t, y, eps = 0.9, 1.1, 0.01
    r = rho1(HERMITE, t, y, eps)
    g = amplitude_g(HERMITE, t, y, eps, r)
    expected = g * airy(eps ** (-2 / 3) * r).ai
    assert airy_approximant(HERMITE, t, y, eps).to_float() == pytest.approx(expected, rel=1e-9)


def test_residual_is_second_order():
    vals = [residual_beta(HERMITE, 0.7, 1.0, eps).scaled() for eps in (1e-2, 5e-3, 2.5e-3)]
    assert max(vals) / min(vals) < 2


def test_leading_shift_branches():
    assert leading_shift(4.0, 0.5) == pytest.approx((math.cosh(1.0), math.sinh(1.0) / 2))
    assert leading_shift(-4.0, 0.5) == pytest.approx((math.cos(1.0), math.sin(1.0) / 2))
    assert leading_shift(0.0, 0.5) == (1.0, 0.5)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_airy_shift_leading_order_is_first_order_in_eps(t):
    cs = []
    for eps in (0.01, 0.005, 0.0025):
        x1, _ = airy_shift_check(lambda u: u, t, eps)
        cs.append(abs(x1 - math.cosh(math.sqrt(t))) / eps)
    assert max(cs) / min(cs) < 1.5
