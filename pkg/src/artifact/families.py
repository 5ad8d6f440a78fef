"""Six classical orthogonal polynomial families and their strong asymptotics.

Every evaluator takes y in scaled units: the recurrence is run at
X = lambda_N * y (for Meixner, X is the half-shifted lattice variable), and
returns an approximation of the probability-normalised orthonormal
polynomial p_N(X) as a ScaledReal, so it can be compared directly with
`recurrence.orthonormal_value`.  Multiply by `FamilySpec.normalization`
to get the family's own orthonormal polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .field import FieldContext, field_constant_A, gamma_phase, kappa1_product, kappa_closed_form
from .langer import CoefficientModel, rho1 as model_rho1, rho2 as model_rho2
from .numerics import (
    DomainError,
    QuadratureSpec,
    ScaledReal,
    airy_scaled,
    airy_zero,
    log_gamma,
    relative_deviation,
)
from .recurrence import RecurrenceCoefficients, orthonormal_value, polynomial_zeros

__all__ = [
    "FamilySpec",
    "make_family",
    "FAMILY_KINDS",
    "family_coefficients",
    "exact_value",
    "rho_hat",
    "rho_hat_quadrature",
    "asym_outer",
    "asym_airy",
    "asym_oscillatory_band",
    "band_phase",
    "predict_zero",
    "true_zeros",
    "ErrorRow",
    "ErrorTable",
    "build_error_table",
    "region_evaluator",
    "coefficient_gap",
    "kappa1_closed_form",
]

FAMILY_KINDS = ("hermite", "meixner_pollaczek", "laguerre", "meixner", "cont_dual_hahn", "wilson")

# half-width of the validation window around a band edge, scaled units
AIRY_WINDOW = 0.2
# inside this distance of an edge the amplitude quotient is interpolated
EDGE_INTERP = 2e-3

_TWO_THIRDS = 2.0 / 3.0
_C32 = 1.5**_TWO_THIRDS


@dataclass(frozen=True)
class FamilySpec:
    """A family with its parameters, comparison model and scaling constants.

    lambda_N(N) = scale_y * qhat(N + 1/2); the recurrence runs at X = lambda_N y.
    """

    kind: str
    params: tuple
    model: CoefficientModel
    scale_y: float
    shift: float
    normalization: float
    coefficients: RecurrenceCoefficients = field(repr=False, compare=False)

    @property
    def s1(self) -> float:
        return self.model.s1

    @property
    def alpha_model(self) -> float:
        return self.model.alpha

    def param(self, name: str) -> float:
        return dict(self.params)[name]

    def lambda_N(self, N: int) -> float:
        return self.scale_y * float(self.model.qhat(N + 0.5))

    def recurrence_point(self, N: int, y: float) -> float:
        return self.lambda_N(N) * y

    @property
    def A(self) -> float:
        return field_constant_A(self.model)

    @property
    def kappa(self) -> float:
        return kappa_closed_form(self.model)

    @property
    def kappa1(self) -> float:
        return kappa1_product(self.model, self.coefficients.a1)

    def _b_signed(self) -> float:
        # the reflected Meixner-Pollaczek spec carries delta < 0 with the same model
        if self.kind == "meixner_pollaczek":
            return 2.0 * self.param("delta")
        return self.model.b

    @property
    def upper_edge(self) -> float:
        return (self._b_signed() + 2 * self.model.a) / self.scale_y

    @property
    def lower_edge(self) -> float:
        return (self._b_signed() - 2 * self.model.a) / self.scale_y

    def argument_power(self) -> float:
        """p with Airy argument lambda_N^p * rho_tilde."""
        return 2.0 * self.model.alpha / 3.0

    def rho_conversion(self) -> float:
        """rho_tilde(y) = rho_model(scale*y) / rho_conversion()."""
        return self.scale_y ** (2.0 * self.model.alpha / 3.0)


def _pos(name, v):
    if not v > 0:
        raise ValueError(f"parameter {name} must be positive, got {v}")


def make_family(kind: str, **params) -> FamilySpec:
    """Build a FamilySpec; unspecified parameters take the acceptance defaults."""
    kind = kind.replace("-", "_").lower()
    aliases = {"mp": "meixner_pollaczek", "cdh": "cont_dual_hahn", "continuous_dual_hahn": "cont_dual_hahn"}
    kind = aliases.get(kind, kind)
    if kind == "hermite":
        if params:
            raise ValueError("hermite takes no parameters")
        co = RecurrenceCoefficients(lambda n: math.sqrt(n / 2.0), lambda n: 0.0, "hermite")
        model = CoefficientModel(1 / math.sqrt(2.0), 0.0, 2.0, 0.0)
        return FamilySpec(kind, (), model, math.sqrt(2.0), 0.0, math.pi**-0.25, co)
    if kind == "meixner_pollaczek":
        d = float(params.pop("delta", 1.0))
        eta = float(params.pop("eta", 2.0))
        _no_extra(kind, params)
        if not d >= 0:
            raise ValueError("meixner_pollaczek needs delta >= 0")
        _pos("eta", eta)
        a = math.sqrt(d * d + 1)
        co = RecurrenceCoefficients(
            lambda n: a * math.sqrt(n * (n + eta - 1.0)), lambda n: 2.0 * d * (n + eta / 2.0), f"mp delta={d} eta={eta}"
        )
        model = CoefficientModel(a, 2 * d, 1.0, (eta - 1) / 2)
        norm = math.exp(-0.5 * (math.log(2 * math.pi) + log_gamma(eta)) - eta / 2 * math.log(a / 2))
        return FamilySpec(kind, (("delta", d), ("eta", eta)), model, 2.0, 0.0, norm, co)
    if kind == "laguerre":
        al = float(params.pop("alpha", 0.5))
        _no_extra(kind, params)
        if not al > -1:
            raise ValueError("laguerre needs alpha > -1")
        co = RecurrenceCoefficients(
            lambda n: math.sqrt(n * (n + al)), lambda n: 2.0 * (n + (al + 1) / 2.0), f"laguerre alpha={al}"
        )
        model = CoefficientModel(1.0, 2.0, 1.0, al / 2)
        return FamilySpec(kind, (("alpha", al),), model, 4.0, 0.0, math.exp(-0.5 * log_gamma(al + 1)), co)
    if kind == "meixner":
        c = float(params.pop("c", 0.25))
        be = float(params.pop("beta", 1.0))
        _no_extra(kind, params)
        if not 0 < c < 1:
            raise ValueError("meixner needs 0 < c < 1")
        _pos("beta", be)
        a = math.sqrt(c) / (1 - c)
        b = (1 + c) / (1 - c)
        co = RecurrenceCoefficients(
            lambda n: a * math.sqrt(n * (n + be - 1.0)), lambda n: b * (n + be / 2.0), f"meixner c={c} beta={be} (shifted)"
        )
        model = CoefficientModel(a, b, 1.0, (be - 1) / 2)
        return FamilySpec(kind, (("c", c), ("beta", be)), model, 1.0, be / 2, (1 - c) ** (be / 2), co)
    if kind == "cont_dual_hahn":
        pa = float(params.pop("a", 1.0))
        pb = float(params.pop("b", 1.0))
        pc = float(params.pop("c", 1.0))
        _no_extra(kind, params)
        for nm, v in (("a", pa), ("b", pb), ("c", pc)):
            _pos(nm, v)
        if not pa + pb + pc > 1.5:
            raise ValueError("cont_dual_hahn needs a + b + c > 3/2")

        def A(n):
            return (n + pa + pb) * (n + pa + pc)

        def C(n):
            return n * (n + pb + pc - 1.0)

        co = RecurrenceCoefficients(
            lambda n: math.sqrt(A(n - 1) * C(n)), lambda n: A(n) + C(n) - pa * pa, f"cdh a={pa} b={pb} c={pc}"
        )
        model = CoefficientModel(1.0, 2.0, 0.5, (2 * pa + 2 * pb + 2 * pc - 3) / 4)
        norm = math.exp(-0.5 * (log_gamma(pa + pb) + log_gamma(pa + pc) + log_gamma(pb + pc)))
        return FamilySpec(kind, (("a", pa), ("b", pb), ("c", pc)), model, 4.0, 0.0, norm, co)
    if kind == "wilson":
        ps = [float(params.pop(k, 0.5)) for k in ("a", "b", "c", "d")]
        _no_extra(kind, params)
        for nm, v in zip("abcd", ps):
            _pos(nm, v)
        S = sum(ps)
        if not S > 1:
            raise ValueError("wilson needs a + b + c + d > 1")
        pa, pb, pc, pd = ps

        def A(n):
            return (n + S - 1) * (n + pa + pb) * (n + pa + pc) * (n + pa + pd) / ((2 * n + S - 1) * (2 * n + S))

        def C(n):
            if n == 0:
                return 0.0
            return n * (n + pb + pc - 1) * (n + pb + pd - 1) * (n + pc + pd - 1) / ((2 * n + S - 2) * (2 * n + S - 1))

        co = RecurrenceCoefficients(
            lambda n: math.sqrt(A(n - 1) * C(n)), lambda n: A(n) + C(n) - pa * pa, f"wilson {ps}"
        )
        model = CoefficientModel(0.25, 0.5, 0.5, (S - 2) / 2)
        pairs = sum(log_gamma(x + y) for i, x in enumerate(ps) for y in ps[i + 1:])
        norm = math.exp(0.5 * (log_gamma(S) - math.log(2 * math.pi) - pairs))
        return FamilySpec(kind, tuple(zip("abcd", ps)), model, 1.0, 0.0, norm, co)
    raise ValueError(f"unknown family {kind!r}; expected one of {', '.join(FAMILY_KINDS)}")


def _no_extra(kind, params):
    if params:
        raise ValueError(f"{kind}: unknown parameter(s) {', '.join(sorted(params))}")


def family_coefficients(spec: FamilySpec) -> RecurrenceCoefficients:
    return spec.coefficients


def exact_value(spec: FamilySpec, N: int, y: float) -> ScaledReal:
    """p_N at the scaled point y from the recurrence."""
    return orthonormal_value(spec.coefficients, N, spec.recurrence_point(N, y))


# ---------------------------------------------------------------------------
# closed-form Langer variables (scaled units)


def _pow23(v: float) -> float:
    return math.copysign(abs(v) ** _TWO_THIRDS, v)


def _mp_rho(d: float, y: float) -> float:
    a = math.sqrt(d * d + 1)
    e = d + a
    if y >= e:
        return _pow23(0.75 * y * math.acos(min(1.0, d / a + 1 / (a * y))) - 0.75 * math.acosh(max(1.0, (y - d) / a)))
    return -_pow23(0.75 * math.acos(max(-1.0, (y - d) / a)) - 0.75 * y * math.acosh(max(1.0, d / a + 1 / (a * y))))


def _wilson_rho(y: float) -> float:
    if y >= 1:
        return _C32 * _pow23(math.sqrt(y) * math.acos(min(1.0, 2 / y - 1)) - math.acosh(max(1.0, 2 * y - 1)))
    return -_C32 * _pow23(math.acos(max(-1.0, 2 * y - 1)) - math.sqrt(y) * math.acosh(max(1.0, 2 / y - 1)))


def _meixner_rho1(a: float, b: float, y: float) -> float:
    if y < b - 2 * a:
        raise DomainError(f"y={y} is below the lower band edge {b - 2 * a}")
    e = b + 2 * a
    if y >= e:
        return _C32 * _pow23(
            y * math.acosh(max(1.0, b / (2 * a) - 1 / (2 * a * y))) - math.acosh(max(1.0, (y - b) / (2 * a)))
        )
    return -_C32 * _pow23(
        math.acos(max(-1.0, (y - b) / (2 * a))) - y * math.acos(min(1.0, b / (2 * a) - 1 / (2 * a * y)))
    )


def _meixner_rho2(a: float, b: float, y: float) -> float:
    if y >= b - 2 * a:
        return -_C32 * _pow23(
            y * math.acos(max(-1.0, min(1.0, 1 / (2 * a * y) - b / (2 * a)))) - math.acos(min(1.0, (b - y) / (2 * a)))
        )
    return _C32 * _pow23(
        math.acosh(max(1.0, (b - y) / (2 * a))) - y * math.acosh(max(1.0, 1 / (2 * a * y) - b / (2 * a)))
    )


def rho_hat(spec: FamilySpec, y: float, branch: str = "rho1") -> float:
    """Closed-form Langer variable in scaled units (Airy argument lambda_N^p times this)."""
    k = spec.kind
    if branch == "rho1":
        if k == "hermite":
            if y <= 0:
                raise DomainError("hermite rho1 needs y > 0")
            if y >= 1:
                return _pow23(0.75 * (y * math.sqrt(y * y - 1) - math.acosh(y)))
            return -_pow23(0.75 * (math.acos(y) - y * math.sqrt(1 - y * y)))
        if k == "meixner_pollaczek":
            if y <= 0:
                raise DomainError("rho1 needs y > 0")
            return _mp_rho(spec.param("delta"), y)
        if k == "laguerre":
            if y <= 0:
                raise DomainError("laguerre rho1 needs y > 0")
            if y >= 1:
                return _pow23(0.75 * (math.sqrt(y * y - y) - 0.5 * math.acosh(max(1.0, 2 * y - 1))))
            return -_pow23(0.75 * (0.5 * math.acos(2 * y - 1) - math.sqrt(y - y * y)))
        if k == "meixner":
            if y <= 0:
                raise DomainError("meixner rho1 needs y > 0")
            m = spec.model
            return _meixner_rho1(m.a, m.b, y)
        if k == "cont_dual_hahn":
            if y <= 0:
                raise DomainError("rho1 needs y > 0")
            return _wilson_rho(y) / 2.0**_TWO_THIRDS
        if k == "wilson":
            if y <= 0:
                raise DomainError("rho1 needs y > 0")
            return _wilson_rho(y)
    elif branch == "rho2":
        if k == "hermite":
            if y >= 0:
                raise DomainError("hermite rho2 needs y < 0")
            return rho_hat(spec, -y, "rho1")
        if k == "meixner_pollaczek":
            if y >= 0:
                raise DomainError("rho2 needs y < 0")
            return _mp_rho(-spec.param("delta"), -y)
        if k == "meixner":
            if y <= 0:
                raise DomainError("meixner rho2 needs y > 0")
            m = spec.model
            return _meixner_rho2(m.a, m.b, y)
        raise DomainError(f"{k} has no lower turning point")
    raise ValueError(f"unknown branch {branch!r}")


def rho_hat_quadrature(spec: FamilySpec, y: float, branch: str = "rho1", spec_q: Optional[QuadratureSpec] = None) -> float:
    """Same quantity as rho_hat but from the Langer quadrature of the comparison model."""
    q = spec_q or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13)
    ym = spec.scale_y * y
    fn = model_rho1 if branch == "rho1" else model_rho2
    return fn(spec.model, 1.0, ym, 0.0, q) / spec.rho_conversion()


# ---------------------------------------------------------------------------
# shared building blocks


def _near_edge(fn: Callable[[float], float], e: float, y: float) -> float:
    """fn(y), replaced by a cubic through e +- h, e +- 2h when y is close to the edge e.

    The closed forms lose about half their digits next to a band edge (acosh
    of arguments near 1) even though the functions are smooth there.
    """
    if abs(y - e) >= EDGE_INTERP:
        return fn(y)
    h = EDGE_INTERP
    xs = [e - 2 * h, e - h, e + h, e + 2 * h]
    fs = [fn(x) for x in xs]
    total = 0.0
    for i, xi in enumerate(xs):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= (y - xj) / (xi - xj)
        total += w * fs[i]
    return total


def _edge_quotient(num: Callable[[float], float], den: Callable[[float], float], e: float, y: float) -> float:
    """num(y)/den(y) where both vanish at y = e."""
    return _near_edge(lambda v: num(v) / den(v), e, y)


def _ai(x: float) -> ScaledReal:
    return airy_scaled(x).ai


def _sr(log_abs: float, sign: int = 1) -> ScaledReal:
    return ScaledReal.from_log(log_abs, sign)


def _reflect(spec: FamilySpec) -> FamilySpec:
    """Meixner-Pollaczek with delta -> -delta, used for the y < 0 side."""
    d = spec.param("delta")
    eta = spec.param("eta")
    a = math.sqrt(d * d + 1)
    co = RecurrenceCoefficients(
        lambda n: a * math.sqrt(n * (n + eta - 1.0)), lambda n: -2.0 * d * (n + eta / 2.0), "mp reflected"
    )
    model = spec.model
    return FamilySpec(spec.kind, (("delta", -d), ("eta", eta)), model, spec.scale_y, 0.0, spec.normalization, co)


def _sign_n(N: int) -> int:
    return -1 if N % 2 else 1


# outer closed forms: log|h| of the family-orthonormal polynomial at X = lambda*y


def _outer_log(spec: FamilySpec, N: int, y: float) -> float:
    k = spec.kind
    lam = spec.lambda_N(N)
    x = lam * y
    if k == "hermite":
        s = math.sqrt(y * y - 1)
        return (
            x * x / 2 + lam * lam / 2 * math.log(y + s) - lam * lam / 2 * y * s
            - 0.5 * math.log(2 * lam * math.pi) - 0.25 * math.log(y * y - 1)
        )
    if k == "meixner_pollaczek":
        d, eta = spec.param("delta"), spec.param("eta")
        a = math.sqrt(d * d + 1)
        disc = y * y - 2 * d * y - 1
        s = math.sqrt(disc)
        w = complex(y, y * d) / complex(s, d * y + 1)
        arg_w = cmath.phase(w)
        rhs = (eta - 2) / 2 * math.log(2) - math.log(math.pi * math.sqrt(lam)) - 0.25 * math.log(disc) - y * lam / 2 * arg_w
        return rhs + lam / 2 * math.log(y - d + s) - lam / 2 * math.log(a) - (eta - 1) / 2 * math.log(x)
    if k == "laguerre":
        al = spec.param("alpha")
        s = math.sqrt(y * y - y)
        rhs = lam / 4 * (math.log(2 * y - 1 + 2 * s) - 2 * s) - 0.5 * math.log(2 * math.pi * lam) - 0.25 * math.log(y * y - y)
        return rhs + x / 2 - al / 2 * math.log(x)
    if k == "meixner":
        c, be = spec.param("c"), spec.param("beta")
        m = spec.model
        a, b = m.a, m.b
        disc = y * y - 2 * b * y + 1
        s = math.sqrt(disc)
        rhs = (
            0.5 * log_gamma(be) + be / 4 * math.log(c) + lam * math.log((y - b + s) / (2 * a))
            - 0.5 * math.log(2 * math.pi * lam) - 0.25 * math.log(disc) + lam * y * math.log(2 * a * y / (b * y - 1 + s))
        )
        return rhs + lam * y * math.log((b + 1) / (2 * a)) - (be - 1) / 2 * math.log(x)
    if k in ("cont_dual_hahn", "wilson"):
        root = math.sqrt(lam)
        g = 0.5 if k == "cont_dual_hahn" else 1.0
        den = (math.log(2 * math.pi) if k == "cont_dual_hahn" else math.log(4 * math.pi**2))
        rhs = (
            g * root * math.log(2 * y - 1 + 2 * math.sqrt(y * (y - 1)))
            + g * math.acos(1 - 2 / y) * math.sqrt(lam * y)
            - den - 0.5 * math.log(lam) - 0.25 * math.log(y * (y - 1))
        )
        return rhs - spec.s1 * math.log(x)
    raise ValueError(k)


def asym_outer(spec: FamilySpec, N: int, y: float) -> ScaledReal:
    """Outer strong asymptotic of p_N at scaled y (real y outside the band hull)."""
    if isinstance(y, complex):
        raise DomainError("only real y is supported by the outer evaluator")
    if N < 1:
        raise DomainError("asym_outer needs N >= 1")
    up, lo = spec.upper_edge, spec.lower_edge
    k = spec.kind
    if y > up:
        return _sr(_outer_log(spec, N, y)) / spec.normalization
    if k == "hermite" and y < lo:
        return asym_outer(spec, N, -y) * _sign_n(N)
    if k == "meixner_pollaczek" and y < lo:
        return asym_outer(_reflect(spec), N, -y) * _sign_n(N)
    raise DomainError(f"y={y} is not in the outer region of {k}")


def _airy_parts(spec: FamilySpec, N: int, y: float):
    """(log divisor, log prefactor, quartic, airy power, edge) for the upper edge."""
    k = spec.kind
    lam = spec.lambda_N(N)
    x = lam * y
    if k == "hermite":
        return x * x / 2, 0.5 * math.log(2) - math.log(lam) / 6, lambda v: v * v - 1, 4 / 3, 1.0
    if k == "meixner_pollaczek":
        d, eta = spec.param("delta"), spec.param("eta")
        a = math.sqrt(d * d + 1)
        acot = math.atan2(1.0, d)
        return (
            acot * x / 2 - (eta - 1) / 2 * math.log(x),
            eta / 2 * math.log(2) - 0.5 * math.log(math.pi) - math.log(lam) / 3,
            lambda v: v * v - 2 * d * v - 1,
            2 / 3,
            d + a,
        )
    if k == "laguerre":
        al = spec.param("alpha")
        return x / 2 - al / 2 * math.log(x), 0.5 * math.log(2) - math.log(lam) / 3, lambda v: v * v - v, 2 / 3, 1.0
    if k == "meixner":
        c, be = spec.param("c"), spec.param("beta")
        m = spec.model
        a, b = m.a, m.b
        return (
            x * math.log((b + 1) / (2 * a)) - (be - 1) / 2 * math.log(x),
            0.5 * math.log(2) + 0.5 * log_gamma(be) + be / 4 * math.log(c) - math.log(lam) / 3,
            lambda v: v * v - 2 * b * v + 1,
            2 / 3,
            b + 2 * a,
        )
    if k == "cont_dual_hahn":
        return (
            math.pi * math.sqrt(x) / 2 - spec.s1 * math.log(x),
            -0.5 * math.log(math.pi) - 5 / 12 * math.log(lam),
            lambda v: v * (v - 1),
            1 / 3,
            1.0,
        )
    if k == "wilson":
        return (
            math.pi * math.sqrt(x) - spec.s1 * math.log(x),
            -math.log(2) - 1.5 * math.log(math.pi) - 5 / 12 * math.log(lam),
            lambda v: v * (v - 1),
            1 / 3,
            1.0,
        )
    raise ValueError(k)


def asym_airy(spec: FamilySpec, N: int, y: float, edge: str = "plus", window: float = AIRY_WINDOW) -> ScaledReal:
    """Airy-region main term for p_N at scaled y near the named band edge."""
    k = spec.kind
    if edge == "minus":
        if k == "hermite":
            return asym_airy(spec, N, -y, "plus", window) * _sign_n(N)
        if k == "meixner_pollaczek":
            return asym_airy(_reflect(spec), N, -y, "plus", window) * _sign_n(N)
        raise DomainError(f"{k} has no Airy lower edge evaluator (use the band evaluator for meixner)")
    if edge != "plus":
        raise ValueError(f"unknown edge {edge!r}")
    log_div, log_pref, quartic, power, e = _airy_parts(spec, N, y)
    if abs(y - e) > window:
        raise DomainError(f"y={y} is outside the Airy window {e}+-{window} for {k}")
    lam = spec.lambda_N(N)
    rho = _near_edge(lambda v: rho_hat(spec, v, "rho1"), e, y)
    amp = _edge_quotient(lambda v: rho_hat(spec, v, "rho1"), quartic, e, y) ** 0.25
    val = _ai(lam**power * rho) * _sr(log_pref + log_div) * amp
    return val / spec.normalization


def band_phase(spec: FamilySpec, N: int, y: float, quadrature: bool = True) -> float:
    """pi((N+s1+1/2) c y^alpha - s1), from the Gamma-phase quadrature or its closed form."""
    if spec.kind != "meixner":
        raise DomainError("the two-turning-point phase only applies to meixner")
    if quadrature:
        return gamma_phase(FieldContext(spec.model, 1.0 / N), spec.scale_y * y)
    lam = spec.lambda_N(N)
    return math.pi * (lam * y - spec.s1)


def asym_oscillatory_band(spec: FamilySpec, N: int, y: float) -> ScaledReal:
    """Ai/Bi combination valid across the saturated region and the lower band edge."""
    if spec.kind != "meixner":
        raise DomainError("asym_oscillatory_band needs the meixner family")
    m = spec.model
    c, be = spec.param("c"), spec.param("beta")
    a, b = m.a, m.b
    if not 0 < y < b + 2 * a:
        raise DomainError(f"y={y} is outside (0, b+2a)")
    lam = spec.lambda_N(N)
    x = lam * y
    phi = band_phase(spec, N, y)
    rho = _near_edge(lambda v: rho_hat(spec, v, "rho2"), b - 2 * a, y)
    amp = _edge_quotient(lambda v: rho_hat(spec, v, "rho2"), lambda v: v * v - 2 * b * v + 1, b - 2 * a, y) ** 0.25
    p = airy_scaled(lam ** (2 / 3) * rho)
    comb = p.ai * math.sin(phi) + p.bi * math.cos(phi)
    log_pref = 0.5 * math.log(2) + 0.5 * log_gamma(be) + be / 4 * math.log(c) - math.log(lam) / 3
    log_div = x * math.log((b + 1) / (2 * a)) - (be - 1) / 2 * math.log(x)
    return comb * _sr(log_pref + log_div, _sign_n(N)) * amp / spec.normalization


# ---------------------------------------------------------------------------
# zeros


def _general_edge_zero(spec: FamilySpec, N: int, k: int, lower: bool) -> float:
    m = spec.model
    ai = airy_zero(k)
    nu = m.alpha * (N + m.s1 + 0.5)
    if not lower:
        e = m.b + 2 * m.a
        return (e + m.a ** (1 / 3) * (e / nu) ** _TWO_THIRDS * ai) / spec.scale_y
    e = m.b - 2 * m.a
    return (e - m.a ** (1 / 3) * (abs(e) / nu) ** _TWO_THIRDS * ai) / spec.scale_y


def _family_edge_zero(spec: FamilySpec, N: int, k: int, lower: bool) -> float:
    ai = airy_zero(k)
    lam = spec.lambda_N(N)
    kind = spec.kind
    if kind == "hermite":
        v = 1 + ai / (2**0.5 * lam ** (4 / 3))
        return -v if lower else v
    if kind == "meixner_pollaczek":
        d = spec.param("delta")
        a = math.sqrt(d * d + 1)
        if lower:
            return d - a - _pow23((d - a) / lam) * (a / 2) ** (1 / 3) * ai
        return d + a + ((d + a) / lam) ** _TWO_THIRDS * (a / 2) ** (1 / 3) * ai
    if lower:
        raise DomainError(f"no lower-edge closed form for {kind}")
    if kind == "laguerre":
        return 1 + 4 ** (1 / 3) * ai / lam ** _TWO_THIRDS
    if kind == "meixner":
        c = spec.param("c")
        e = (1 + c + 2 * math.sqrt(c)) / (1 - c)
        return e + c ** (1 / 6) / (1 - c) * (1 + c + 2 * math.sqrt(c)) / lam ** _TWO_THIRDS * ai
    if kind == "cont_dual_hahn":
        return 1 + 2 ** _TWO_THIRDS * ai / lam ** (1 / 3)
    if kind == "wilson":
        return 1 + ai / lam ** (1 / 3)
    raise ValueError(kind)


def predict_zero(spec: FamilySpec, N: int, k: int, edge: str = "upper", form: str = "general") -> float:
    """Predicted k-th zero counted from the named edge, in scaled units.

    edge: 'upper' (k-th largest), 'lower' (k-th smallest, b < 2a families)
    or 'saturated' (meixner, k-th smallest inside the saturated region).
    form: 'general' uses the edge formula built from the comparison model;
    'family' uses the per-family closed form (for hermite, meixner_pollaczek
    and meixner it carries a different Airy-zero constant and converges
    only like N^(-2/3)).  For 'saturated', 'general' gives the lattice point
    (2k - 2 + beta)/(2 lambda) and 'family' the midpoint form
    ((2k - 1) pi + beta)/(2 lambda), which lands within 1/(2N) of a zero.
    """
    if k < 1 or k > N:
        raise DomainError("need 1 <= k <= N")
    if edge == "saturated":
        if spec.kind != "meixner":
            raise DomainError("only meixner has a saturated region")
        lam = spec.lambda_N(N)
        be = spec.param("beta")
        if form == "family":
            return ((2 * k - 1) * math.pi + be) / (2 * lam)
        return (2 * k - 2 + be) / (2 * lam)
    if edge not in ("upper", "lower"):
        raise ValueError(f"unknown edge {edge!r}")
    lower = edge == "lower"
    if lower and spec.kind not in ("hermite", "meixner_pollaczek"):
        raise DomainError(f"{spec.kind} has no Airy lower edge")
    if form == "family":
        return _family_edge_zero(spec, N, k, lower)
    return _general_edge_zero(spec, N, k, lower)


def true_zeros(spec: FamilySpec, N: int) -> np.ndarray:
    """Zeros of p_N in scaled units, descending."""
    z = polynomial_zeros(spec.coefficients, N)
    return (z / spec.lambda_N(N))[::-1]


# ---------------------------------------------------------------------------
# error tables


@dataclass(frozen=True)
class ErrorRow:
    N: int
    y: float
    exact: ScaledReal
    asym: ScaledReal
    rel_dev: float


@dataclass(frozen=True)
class ErrorTable:
    rows: tuple
    slope: float
    slope_stderr: float

    def deviations(self, y: Optional[float] = None) -> list[float]:
        return [r.rel_dev for r in self.rows if y is None or r.y == y]


def region_evaluator(spec: FamilySpec, region: str) -> Callable[[int, float], ScaledReal]:
    if region == "outer":
        return lambda N, y: asym_outer(spec, N, y)
    if region == "airy-plus":
        return lambda N, y: asym_airy(spec, N, y, "plus")
    if region == "airy-minus":
        return lambda N, y: asym_airy(spec, N, y, "minus")
    if region in ("band", "saturated"):
        if spec.kind != "meixner":
            raise DomainError(f"region {region} needs the meixner family")
        return lambda N, y: asym_oscillatory_band(spec, N, y)
    raise ValueError(f"unknown region {region!r}")


def fit_slope(Ns: Sequence[int], ys: Sequence[float], devs: Sequence[float]) -> tuple[float, float]:
    """Common log-log slope with one intercept per y; returns (slope, stderr)."""
    pts = [(n, y, d) for n, y, d in zip(Ns, ys, devs) if d > 0 and math.isfinite(d)]
    uniq = sorted({p[1] for p in pts})
    if len(pts) < 2 or len({p[0] for p in pts}) < 2:
        return math.nan, math.nan
    X = np.zeros((len(pts), 1 + len(uniq)))
    rhs = np.zeros(len(pts))
    for i, (n, y, d) in enumerate(pts):
        X[i, 0] = math.log(n)
        X[i, 1 + uniq.index(y)] = 1.0
        rhs[i] = math.log(d)
    coef, *_ = np.linalg.lstsq(X, rhs, rcond=None)
    dof = len(pts) - X.shape[1]
    if dof <= 0:
        return float(coef[0]), math.nan
    resid = rhs - X @ coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    return float(coef[0]), math.sqrt(max(cov[0, 0], 0.0))


def build_error_table(spec: FamilySpec, Ns: Sequence[int], ys: Sequence[float], region: str) -> ErrorTable:
    ev = region_evaluator(spec, region)
    rows = []
    for N in sorted(Ns):
        for y in sorted(ys):
            ex = exact_value(spec, N, y)
            ap = ev(N, y)
            rows.append(ErrorRow(int(N), float(y), ex, ap, relative_deviation(ap, ex)))
    slope, err = fit_slope([r.N for r in rows], [r.y for r in rows], [r.rel_dev for r in rows])
    return ErrorTable(tuple(rows), slope, err)


def coefficient_gap(spec: FamilySpec, N: int) -> tuple[float, float]:
    """max_n |a1^2 - a^2| and max_n |b1 - b| for n <= N, in eps-scaled model units (eps = 1/N)."""
    m = spec.model
    lam = float(m.qhat(N + 0.5))
    n = np.arange(1, N + 1)
    a1 = np.array([spec.coefficients.a1(int(i)) for i in n])
    b1 = np.array([spec.coefficients.b1(int(i)) for i in n])
    a_m = m.a * m.qhat(n)
    b_m = m.b * m.qhat(n + 0.5)
    return float(np.max(np.abs(a1**2 - a_m**2)) / lam**2), float(np.max(np.abs(b1 - b_m)) / lam)


def kappa1_closed_form(spec: FamilySpec) -> float:
    """Gamma-ratio value of the comparison product kappa1 (not available for wilson)."""
    k = spec.kind
    if k == "hermite":
        return 1.0
    if k in ("meixner_pollaczek", "meixner"):
        g = spec.param("eta" if k == "meixner_pollaczek" else "beta")
        return math.exp(0.5 * log_gamma(g) - log_gamma((g + 1) / 2))
    if k == "laguerre":
        al = spec.param("alpha")
        return math.exp(0.5 * log_gamma(al + 1) - log_gamma(al / 2 + 1))
    if k == "cont_dual_hahn":
        pa, pb, pc = (spec.param(n) for n in "abc")
        top = log_gamma(pa + pb) + log_gamma(pa + pc) + log_gamma(pb + pc)
        return math.exp(0.5 * top - 2 * log_gamma((2 * pa + 2 * pb + 2 * pc + 1) / 4))
    raise DomainError(f"no closed form for kappa1 of {k}")
