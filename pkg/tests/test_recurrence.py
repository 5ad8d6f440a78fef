import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import assume, given, settings, strategies as st

from artifact.recurrence import (
    RecurrenceCoefficients,
    casorati,
    eval_monic_tilde,
    eval_orthonormal,
    gauss_rule,
    orthonormal_value,
    polynomial_zeros,
    sturm_count,
)
from artifact.langer import CoefficientModel

HERMITE = RecurrenceCoefficients(lambda n: math.sqrt(n / 2), lambda n: 0.0, "hermite")
LAGUERRE_HALF = RecurrenceCoefficients(lambda n: math.sqrt(n * (n + 0.5)), lambda n: 2 * n + 1.5, "laguerre 1/2")

# H_N(x)/sqrt(2^N N!) at x = sqrt(2N+1) y, mpmath at 40 digits
HERMITE_FROZEN = [
    (50, 1.5, 7.4606376253980770336e32),
    (100, 1.5, 1.3759455931115772939e66),
    (100, 1.0, 1.6965501593703563971e43),
    (200, 0.5, -1.4785148203738015954e21),
]


@pytest.mark.parametrize("N,y,ref", HERMITE_FROZEN)
def test_hermite_values_match_frozen_oracle(N, y, ref):
    x = math.sqrt(2 * N + 1) * y
    v = orthonormal_value(HERMITE, N, x)
    assert v.to_float() == pytest.approx(ref, rel=1e-12)


def test_laguerre_against_mpmath():
    mpmath.mp.dps = 30
    for N, x in ((10, 3.3), (40, 90.0), (80, 0.7)):
        ref = (-1) ** N * mpmath.laguerre(N, 0.5, x) * mpmath.sqrt(mpmath.factorial(N) * mpmath.gamma(1.5) / mpmath.gamma(N + 1.5))
        assert orthonormal_value(LAGUERRE_HALF, N, x).to_float() == pytest.approx(float(ref), rel=1e-11)


def test_full_sequence_agrees_with_single_value():
    seq = eval_orthonormal(HERMITE, 30, 1.3)
    assert len(seq) == 31
    assert seq[0].to_float() == 1.0
    assert seq[-1].to_float() == pytest.approx(orthonormal_value(HERMITE, 30, 1.3).to_float(), rel=1e-15)


def test_degree_zero_and_one():
    assert orthonormal_value(HERMITE, 0, 5.0).to_float() == 1.0
    assert orthonormal_value(HERMITE, 1, 0.3).to_float() == pytest.approx(0.3 / math.sqrt(0.5))


def test_no_overflow_at_large_degree():
    v = orthonormal_value(HERMITE, 10000, 2.0 * math.sqrt(20001))
    assert v.sign == 1 and v.exponent > 1000
    assert math.isfinite(v.log_abs())


def test_zeros_agree_with_scipy_nodes():
    for N in (5, 60, 200):
        x, _ = sc.roots_hermite(N)
        z = polynomial_zeros(HERMITE, N)
        assert np.max(np.abs(z - np.sort(x))) < 1e-11 * max(1.0, np.max(np.abs(x)))


def test_small_hermite_zeros_closed_form():
    assert polynomial_zeros(HERMITE, 2) == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-14)
    z3 = polynomial_zeros(HERMITE, 3)
    assert z3 == pytest.approx([-math.sqrt(1.5), 0.0, math.sqrt(1.5)], abs=1e-14)


def test_gauss_rule_integrates_low_degree_polynomials_exactly():
    nodes, w = gauss_rule(HERMITE, 12)
    assert w.sum() == pytest.approx(1.0, abs=1e-13)
    # moments of exp(-x^2)/sqrt(pi): E x^2 = 1/2, E x^4 = 3/4, E x^10 = 945/32
    assert np.dot(w, nodes**2) == pytest.approx(0.5, rel=1e-13)
    assert np.dot(w, nodes**4) == pytest.approx(0.75, rel=1e-13)
    assert np.dot(w, nodes**10) == pytest.approx(945 / 32, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 80))
def test_zeros_strictly_interlace(N):
    a = polynomial_zeros(LAGUERRE_HALF, N)
    b = polynomial_zeros(LAGUERRE_HALF, N - 1)
    assert np.all(np.diff(a) > 0)
    assert np.all(a[:-1] < b) and np.all(b < a[1:])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.floats(-12, 12))
def test_sturm_count_matches_zero_positions(N, x):
    z = polynomial_zeros(HERMITE, N)
    assume(np.min(np.abs(z - x)) > 1e-9)
    assert int(sturm_count(HERMITE, N, x)[0]) == int(np.sum(z < x))


def test_casorati_is_constant_along_two_solutions():
    m = CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)
    eps = 0.01
    coeffs = m.scaled_coefficients(eps)
    y = 0.05  # inside the band for every n, so neither solution swamps the other
    u = eval_monic_tilde(coeffs, 60, y)
    # second solution: same recurrence, different start
    from artifact.recurrence import _run

    a, b = coeffs.arrays(61)

    def step(n, pm, pc):
        return 2.0 * (y - b[n]) * pc - 4.0 * a[n - 1] ** 2 * pm

    v = _run(step, 0.0, 1.0, 60, keep=True)

    def weight(n):
        # the monic tilde recurrence has Casorati constant times prod 4 a(k)^2
        return math.prod(4 * a[k - 1] ** 2 for k in range(1, n))

    ref = casorati(u, v, lambda t, e: 1.0, eps, 1).to_float()
    for n in (5, 20, 59):
        c = casorati(u, v, lambda t, e: 1.0, eps, n).to_float() / weight(n)
        assert c == pytest.approx(ref, rel=1e-10)


def test_monic_tilde_relates_to_orthonormal():
    m = CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)
    eps = 1 / 40
    coeffs = m.scaled_coefficients(eps)
    y = 0.6
    tilde = eval_monic_tilde(coeffs, 40, y)
    orth = eval_orthonormal(coeffs, 40, y)
    a, _ = coeffs.arrays(41)
    # p~_n = 2^n prod_{k<=n} a(k) * p_n
    for n in (1, 10, 40):
        scale = 2.0**n * math.prod(a[:n])
        assert tilde[n].to_float() == pytest.approx(scale * orth[n].to_float(), rel=1e-12)


def test_rejects_non_positive_off_diagonal():
    bad = RecurrenceCoefficients(lambda n: 1.0 - n, lambda n: 0.0, "bad")
    with pytest.raises(ValueError):
        orthonormal_value(bad, 3, 0.1)
    with pytest.raises(ValueError):
        orthonormal_value(HERMITE, -1, 0.0)
