"""Discrete Langer transformation for the model difference equation.

The model has coefficients a(t, eps) = a*q(t) and b(t, eps) = b*q(t + eps/2)
built from q(t) = (t + s1)**(1/alpha).  Given a spectral point y, the
functions here locate the turning points, evaluate the phase k^2, the Langer
variables rho (upper and lower turning point), the amplitude g, the Airy
approximants g*Ai(eps^(-2/3) rho) and their residuals in the difference
equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .numerics import (
    DomainError,
    QuadratureSpec,
    ScaledReal,
    airy_scaled,
    integrate,
)

__all__ = [
    "CoefficientModel",
    "LangerData",
    "turning_points",
    "k_squared",
    "rho1",
    "rho2",
    "amplitude_g",
    "airy_approximant",
    "residual_beta",
    "Residual",
    "airy_shift_check",
    "leading_shift",
]

Branch = Literal["plus", "minus"]

# |t - t_p| below which rho and g come from the local series at the turning point
SERIES_WINDOW = 1e-4

TIGHT = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-14, max_subdivisions=4000)


@dataclass(frozen=True)
class CoefficientModel:
    """Model recurrence coefficients a*q(t), b*q(t) with q(t) = (t + s1)**(1/alpha)."""

    a: float
    b: float
    alpha: float
    s1: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("model needs a > 0")
        if not self.b >= 0:
            raise ValueError("model needs b >= 0")
        if not self.alpha > 0:
            raise ValueError("model needs alpha > 0")
        if not self.s1 > -0.5:
            raise ValueError("model needs s1 > -1/2")

    @property
    def case(self) -> str:
        b, two_a = self.b, 2.0 * self.a
        if b == 0.0:
            return "case1a"
        if math.isclose(b, two_a, rel_tol=1e-14):
            return "case2"
        return "case1" if b < two_a else "case3"

    def has_lower_edge(self) -> bool:
        return self.case != "case2"

    # -- q and friends; all accept numpy arrays -----------------------------
    def qhat(self, t):
        return np.power(np.asarray(t, dtype=float) + self.s1, 1.0 / self.alpha)

    def qhat_eps(self, t, eps: float):
        """qhat(t/eps)/qhat(1/eps + 1/2) written so that eps = 0 is allowed."""
        sig = self.s1 + 0.5
        return np.power((np.asarray(t, dtype=float) + self.s1 * eps) / (1.0 + sig * eps), 1.0 / self.alpha)

    def q_eps(self, t, eps: float):
        """qhat_eps(t + eps/2)."""
        sig = self.s1 + 0.5
        return np.power((np.asarray(t, dtype=float) + sig * eps) / (1.0 + sig * eps), 1.0 / self.alpha)

    def q_eps_inv(self, w, eps: float):
        sig = self.s1 + 0.5
        return np.power(np.asarray(w, dtype=float), self.alpha) * (1.0 + sig * eps) - sig * eps

    def q_eps_derivs(self, t: float, eps: float) -> tuple[float, float, float]:
        """q, q', q'' of q_eps at t."""
        sig = self.s1 + 0.5
        q = float(self.q_eps(t, eps))
        r = 1.0 / (t + sig * eps)
        inv = 1.0 / self.alpha
        return q, inv * q * r, inv * (inv - 1.0) * q * r * r

    def a_coef(self, t, eps: float):
        return self.a * self.qhat_eps(t, eps)

    def b_coef(self, t, eps: float):
        return self.b * self.q_eps(t, eps)

    def gamma_plus(self, t, eps: float):
        return (self.b + 2.0 * self.a) * self.q_eps(t, eps)

    def gamma_minus(self, t, eps: float):
        return (self.b - 2.0 * self.a) * self.q_eps(t, eps)

    def scaled_coefficients(self, eps: float):
        """Model coefficients indexed by n (t = n eps) for the monic recurrence."""
        from .recurrence import RecurrenceCoefficients

        return RecurrenceCoefficients(
            lambda n: float(self.a_coef(n * eps, eps)),
            lambda n: float(self.b_coef(n * eps, eps)),
            f"model a={self.a} b={self.b} alpha={self.alpha} s1={self.s1} eps={eps}",
        )


@dataclass(frozen=True)
class LangerData:
    y: float
    eps: float
    tp_plus: Optional[float]
    tp_minus: Optional[float]
    region: str


def _tp(model: CoefficientModel, w: float, eps: float) -> Optional[float]:
    if w <= 0:
        return None
    t = float(model.q_eps_inv(w, eps))
    return t if t > 0 else None


def turning_points(model: CoefficientModel, y: float, eps: float, t: float = 1.0, window: float = 0.1) -> LangerData:
    """Turning points for y and a coarse region label at time t.

    `window` is the half-width (in y) of the Airy neighbourhoods, as a
    fraction of the upper band edge at time t.
    """
    b, a = model.b, model.a
    tpp = _tp(model, y / (b + 2 * a), eps) if y > 0 else None
    tpm = None
    case = model.case
    if (case == "case1" and y < 0) or (case == "case3" and y > 0):
        tpm = _tp(model, y / (b - 2 * a), eps)
    elif case == "case1a" and y < 0:
        tpm = _tp(model, -y / (2 * a), eps)
    gp = float(model.gamma_plus(t, eps))
    gm = float(model.gamma_minus(t, eps))
    w = window * gp
    if abs(y - gp) <= w:
        region = "airy_band_plus"
    elif y > gp:
        region = "outer_growth"
    elif case != "case2" and abs(y - gm) <= w:
        region = "airy_band_minus"
    elif y < gm:
        region = "saturated" if case == "case3" else "outer_growth"
    else:
        region = "oscillatory"
    return LangerData(float(y), float(eps), tpp, tpm, region)


# ---------------------------------------------------------------------------
# phase


@dataclass(frozen=True)
class _Branch:
    """z(u) for one band edge, its turning point and orientation.

    orient = +1 when z decreases through 1 as u increases (growth for t < t_p),
    -1 for the reversed case (lower edge of a saturated band).
    """

    model: CoefficientModel
    y: float
    eps: float
    sign: float  # +1: z = (y - b)/2a, -1: z = (b - y)/2a
    tp: float
    orient: int

    def z(self, u):
        m = self.model
        q = m.q_eps(u, self.eps)
        return self.sign * (self.y / (2.0 * m.a * q) - m.b / (2.0 * m.a))

    def z_derivs(self, u: float) -> tuple[float, float]:
        m = self.model
        q, dq, ddq = m.q_eps_derivs(u, self.eps)
        c = self.sign * self.y / (2.0 * m.a)
        return -c * dq / q**2, -c * (ddq / q**2 - 2.0 * dq * dq / q**3)

    def local(self) -> tuple[float, float]:
        """(c, c2) with z = 1 + c s + c2 s^2 in s = orient*(tp - t)."""
        d1, d2 = self.z_derivs(self.tp)
        return -self.orient * d1, 0.5 * d2


def _branch(model: CoefficientModel, y: float, eps: float, which: Branch) -> _Branch:
    b, a = model.b, model.a
    case = model.case
    if which == "plus":
        if not y > 0:
            raise DomainError("the upper turning point needs y > 0")
        tp = _tp(model, y / (b + 2 * a), eps)
        if tp is None:
            raise DomainError(f"no upper turning point for y={y} at eps={eps}")
        return _Branch(model, y, eps, 1.0, tp, 1)
    if case in ("case1", "case1a"):
        if not y < 0:
            raise DomainError("the lower turning point in this case needs y < 0")
        tp = _tp(model, y / (b - 2 * a), eps)
        if tp is None:
            raise DomainError(f"no lower turning point for y={y} at eps={eps}")
        return _Branch(model, y, eps, -1.0, tp, 1)
    if case == "case3":
        if not y > 0:
            raise DomainError("the lower turning point in this case needs y > 0")
        tp = _tp(model, y / (b - 2 * a), eps)
        if tp is None:
            raise DomainError(f"no lower turning point for y={y} at eps={eps}")
        return _Branch(model, y, eps, -1.0, tp, -1)
    raise DomainError(f"{case} has no lower turning point")


def _k2_of_z(z: float) -> float:
    if z >= 1.0:
        return math.acosh(z) ** 2
    if z > -1.0:
        return -math.acos(z) ** 2
    raise DomainError(f"z={z} lies beyond the opposite band edge")


def k_squared(model: CoefficientModel, t: float, y: float, eps: float, which: Branch = "plus") -> float:
    """ln^2(z + sqrt(z^2 - 1)): positive where solutions grow, -(arccos z)^2 in the band."""
    if which == "plus":
        z = float((y - model.b_coef(t, eps)) / (2.0 * model.a * model.q_eps(t, eps)))
    else:
        z = float((model.b_coef(t, eps) - y) / (2.0 * model.a * model.q_eps(t, eps)))
    if z <= -1.0:
        band = "lower" if which == "plus" else "upper"
        raise DomainError(f"z={z} <= -1 at t={t}: y is beyond the {band} band edge")
    return _k2_of_z(z)


def _acosh_vec(z):
    z = np.asarray(z, dtype=float)
    return np.log(z + np.sqrt(np.maximum(z * z - 1.0, 0.0)))


def _acos_vec(z):
    return np.arccos(np.clip(np.asarray(z, dtype=float), -1.0, 1.0))


def _rho_from_branch(br: _Branch, t: float, spec: QuadratureSpec) -> float:
    s = br.orient * (br.tp - t)
    if abs(s) < SERIES_WINDOW:
        c, c2 = br.local()
        if c <= 0:
            raise DomainError("degenerate turning point")
        kap = c2 / (2.0 * c) - c / 12.0
        return (2.0 * c) ** (1.0 / 3.0) * s * (1.0 + 0.4 * kap * s)
    lo, hi = (t, br.tp) if t < br.tp else (br.tp, t)
    growth = s > 0
    if not growth:
        zfar = float(br.z(t))
        if zfar < -1.0 - 1e-12:
            raise DomainError(f"t={t} lies beyond the opposite band edge for y={br.y}")
    f = (lambda u: _acosh_vec(br.z(u))) if growth else (lambda u: _acos_vec(br.z(u)))
    delta = min(0.1, 0.5 * (hi - lo))
    near_tp_left = br.tp == hi
    if near_tp_left:
        inner = integrate(f, hi - delta, hi, spec.with_(endpoint_singularity="sqrt_right"), vectorized=True)
        outer = integrate(f, lo, hi - delta, spec.with_(endpoint_singularity="none"), vectorized=True) if hi - delta > lo else 0.0
    else:
        inner = integrate(f, lo, lo + delta, spec.with_(endpoint_singularity="sqrt_left"), vectorized=True)
        outer = integrate(f, lo + delta, hi, spec.with_(endpoint_singularity="none"), vectorized=True) if lo + delta < hi else 0.0
    val = 1.5 * (inner + outer)
    r = val ** (2.0 / 3.0)
    return r if growth else -r


def rho1(model: CoefficientModel, t: float, y: float, eps: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Langer variable at the upper turning point; positive for t < t_p."""
    if not t > 0:
        raise DomainError("rho1 needs t > 0")
    return _rho_from_branch(_branch(model, y, eps, "plus"), t, spec)


def rho2(model: CoefficientModel, t: float, y: float, eps: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Langer variable at the lower turning point.

    For y < 0 with b < 2a it has the same orientation as rho1.  For b > 2a the
    orientation is reversed: positive for t > t_p (the saturated side).
    """
    if not t > 0:
        raise DomainError("rho2 needs t > 0")
    if model.case == "case2":
        raise DomainError("case2 models have no lower turning point")
    return _rho_from_branch(_branch(model, y, eps, "minus"), t, spec)


def _rho(model, t, y, eps, which: Branch, spec) -> float:
    return rho1(model, t, y, eps, spec) if which == "plus" else rho2(model, t, y, eps, spec)


def amplitude_g(
    model: CoefficientModel, t: float, y: float, eps: float, rho: float, which: Branch = "plus"
) -> float:
    """(rho / (a^2(t + eps/2) sinh^2 k))**(1/4), with the finite limit at t_p."""
    br = _branch(model, y, eps, which)
    s = br.orient * (br.tp - t)
    a2 = (model.a * float(model.q_eps(t, eps))) ** 2
    if abs(s) < SERIES_WINDOW:
        c, c2 = br.local()
        kap = c2 / (2.0 * c) - c / 12.0
        ratio = (2.0 * c) ** (-2.0 / 3.0) * (1.0 + (0.4 * kap - c2 / c - 0.5 * c) * s)
        return (ratio / a2) ** 0.25
    z = float(br.z(t))
    sh2 = z * z - 1.0
    val = rho / (a2 * sh2)
    if not val > 0:
        raise DomainError(f"rho and sinh^2 k disagree in sign at t={t}, y={y}")
    return val**0.25


def airy_approximant(
    model: CoefficientModel,
    t: float,
    y: float,
    eps: float,
    which: Literal["psi1", "psi2"] = "psi1",
    branch: Branch = "plus",
    spec: QuadratureSpec = TIGHT,
) -> ScaledReal:
    """g*Ai(eps^(-2/3) rho) (psi1) or g*Bi(...) (psi2), exponent carried."""
    r = _rho(model, t, y, eps, branch, spec)
    g = amplitude_g(model, t, y, eps, r, branch)
    p = airy_scaled(eps ** (-2.0 / 3.0) * r)
    return (p.ai if which == "psi1" else p.bi) * g


@dataclass(frozen=True)
class Residual:
    beta: ScaledReal
    normalizer: ScaledReal
    eps: float

    def scaled(self) -> float:
        """|beta| / (eps^2 * normalizer)."""
        return abs((self.beta / self.normalizer).to_float()) / self.eps**2


def residual_beta(
    model: CoefficientModel,
    t: float,
    y: float,
    eps: float,
    which: Literal["psi1", "psi2"] = "psi1",
    branch: Branch = "plus",
    samples: int = 21,
    spec: QuadratureSpec = TIGHT,
) -> Residual:
    """Defect of the approximant in a(t+eps)f(t+eps) + a(t)f(t-eps) = 2a(t+eps/2)cosh(k) f(t)."""
    if not t - eps > 0:
        raise DomainError("residual_beta needs t - eps > 0")
    psi = {s: airy_approximant(model, t + s * eps, y, eps, which, branch, spec) for s in (-1, 0, 1)}
    sign = 1.0 if branch == "plus" else -1.0
    two_a_cosh = sign * (y - float(model.b_coef(t, eps)))
    beta = (
        psi[1] * float(model.a_coef(t + eps, eps))
        + psi[-1] * float(model.a_coef(t, eps))
        - psi[0] * two_a_cosh
    )
    e13 = eps ** (1.0 / 3.0)
    best = None
    for u in np.linspace(t - eps, t + eps, samples):
        x = eps ** (-2.0 / 3.0) * _rho(model, float(u), y, eps, branch, QuadratureSpec())
        p = airy_scaled(x)
        f, fp = (p.ai, p.ai_prime) if which == "psi1" else (p.bi, p.bi_prime)
        v = abs(f) + abs(fp) * e13
        if best is None or v > best:
            best = v
    return Residual(beta, best, eps)


def leading_shift(rho: float, rho_tilde: float) -> tuple[float, float]:
    """Leading-order coefficients of the Airy shift: (cosh, sinh/sqrt) or the cos/sin forms."""
    if rho > 0:
        r = math.sqrt(rho)
        return math.cosh(r * rho_tilde), math.sinh(r * rho_tilde) / r
    if rho < 0:
        r = math.sqrt(-rho)
        return math.cos(r * rho_tilde), math.sin(r * rho_tilde) / r
    return 1.0, rho_tilde


def airy_shift_check(rho_fn: Callable[[float], float], t: float, eps: float) -> tuple[float, float]:
    """Solve chi(x1) = chi(x0) X1 + eps^(1/3) chi'(x0) X2 for chi in {Ai, Bi}.

    x0 = eps^(-2/3) rho(t), x1 = eps^(-2/3) rho(t + eps).  Returns (X1, X2).
    """
    s = eps ** (-2.0 / 3.0)
    x0 = s * rho_fn(t)
    x1 = s * rho_fn(t + eps)
    p0 = airy_scaled(x0)
    p1 = airy_scaled(x1)
    det = p0.ai * p0.bi_prime - p0.ai_prime * p0.bi
    w = det.to_float()
    if not abs(w * math.pi - 1.0) < 1e-6:
        raise ArithmeticError(f"Airy system at x0={x0} is numerically singular (W*pi={w * math.pi})")
    x1v = ((p1.ai * p0.bi_prime - p1.bi * p0.ai_prime) / det).to_float()
    x2v = ((p0.ai * p1.bi - p0.bi * p1.ai) / det).to_float() / eps ** (1.0 / 3.0)
    return x1v, x2v
