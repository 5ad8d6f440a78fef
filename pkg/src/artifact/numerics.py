"""Scalar special functions, exponent-carrying reals and adaptive quadrature.

Everything here is a pure function of its arguments.  The Airy kernel is
written out by hand (series, Taylor continuation of the ODE and the large
argument expansions); numpy is only used for Gauss-Legendre nodes and for
vectorised integrand evaluation.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "ScaledReal",
    "AiryPair",
    "ScaledAiryPair",
    "QuadratureSpec",
    "airy",
    "airy_scaled",
    "airy_zero",
    "log_gamma",
    "integrate",
    "integrate_with_error",
]

LN2 = math.log(2.0)


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NonConvergenceError(ArithmeticError):
    """Raised when an iterative numerical method gives up."""

    def __init__(self, message: str, estimate: float = math.nan, error_estimate: float = math.inf):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


# ---------------------------------------------------------------------------
# ScaledReal


@dataclass(frozen=True, slots=True)
class ScaledReal:
    """sign * mantissa * 2**exponent with mantissa in [1, 2).

    Zero is stored as sign=0, mantissa=0.0, exponent=0.
    """

    sign: int
    mantissa: float
    exponent: int

    def __post_init__(self):
        if self.sign == 0:
            if self.mantissa != 0.0 or self.exponent != 0:
                raise ValueError("zero must have mantissa 0 and exponent 0")
        elif self.sign not in (1, -1) or not (1.0 <= self.mantissa < 2.0):
            raise ValueError(f"bad ScaledReal fields {self.sign}, {self.mantissa}, {self.exponent}")

    @staticmethod
    def normalize(value: float, exponent: int = 0) -> "ScaledReal":
        """Build from value * 2**exponent (value any finite double)."""
        if value == 0.0:
            return ZERO
        if not math.isfinite(value):
            raise DomainError(f"cannot scale non-finite value {value!r}")
        m, e = math.frexp(abs(value))
        return ScaledReal(1 if value > 0 else -1, 2.0 * m, e - 1 + int(exponent))

    from_float = normalize

    @staticmethod
    def from_log(log_abs: float, sign: int = 1) -> "ScaledReal":
        """Number with natural log of its magnitude equal to log_abs."""
        if sign == 0:
            return ZERO
        if log_abs == -math.inf:
            return ZERO
        if not math.isfinite(log_abs):
            raise DomainError("log magnitude must be finite")
        e2 = log_abs / LN2
        e = math.floor(e2)
        m = 2.0 ** (e2 - e)
        if m >= 2.0:
            m, e = 1.0, e + 1
        return ScaledReal(1 if sign > 0 else -1, m, int(e))

    def to_float(self) -> float:
        """Plain double; saturates to +-inf or 0 outside the double range."""
        if self.sign == 0:
            return 0.0
        if self.exponent > 1024:
            return math.copysign(math.inf, self.sign)
        return self.sign * math.ldexp(self.mantissa, self.exponent)

    __float__ = to_float

    def log_abs(self) -> float:
        if self.sign == 0:
            return -math.inf
        return math.log(self.mantissa) + self.exponent * LN2

    def __neg__(self) -> "ScaledReal":
        if self.sign == 0:
            return self
        return ScaledReal(-self.sign, self.mantissa, self.exponent)

    def __abs__(self) -> "ScaledReal":
        return self if self.sign >= 0 else -self

    def _coerce(self, other) -> "ScaledReal":
        if isinstance(other, ScaledReal):
            return other
        return ScaledReal.normalize(float(other))

    def __mul__(self, other) -> "ScaledReal":
        o = self._coerce(other)
        if self.sign == 0 or o.sign == 0:
            return ZERO
        return ScaledReal.normalize(self.sign * o.sign * self.mantissa * o.mantissa, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledReal":
        o = self._coerce(other)
        if o.sign == 0:
            raise ZeroDivisionError("ScaledReal division by zero")
        if self.sign == 0:
            return ZERO
        return ScaledReal.normalize(self.sign * o.sign * self.mantissa / o.mantissa, self.exponent - o.exponent)

    def __rtruediv__(self, other) -> "ScaledReal":
        return self._coerce(other) / self

    def __add__(self, other) -> "ScaledReal":
        o = self._coerce(other)
        if o.sign == 0:
            return self
        if self.sign == 0:
            return o
        big, small = (self, o) if self.exponent >= o.exponent else (o, self)
        shift = small.exponent - big.exponent
        if shift < -110:
            return big
        total = big.sign * big.mantissa + small.sign * math.ldexp(small.mantissa, shift)
        return ScaledReal.normalize(total, big.exponent)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledReal":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ScaledReal":
        return self._coerce(other) - self

    def ldexp(self, k: int) -> "ScaledReal":
        if self.sign == 0:
            return self
        return ScaledReal(self.sign, self.mantissa, self.exponent + int(k))

    def ratio(self, other: "ScaledReal") -> float:
        """self / other as a plain double (assumed representable)."""
        return (self / other).to_float()

    def __lt__(self, other) -> bool:
        return (self - self._coerce(other)).sign < 0

    def __le__(self, other) -> bool:
        return (self - self._coerce(other)).sign <= 0

    def __gt__(self, other) -> bool:
        return (self - self._coerce(other)).sign > 0

    def __ge__(self, other) -> bool:
        return (self - self._coerce(other)).sign >= 0

    def __repr__(self) -> str:
        return f"ScaledReal({self.sign:+d}*{self.mantissa!r}*2^{self.exponent})"


ZERO = ScaledReal(0, 0.0, 0)
ONE = ScaledReal(1, 1.0, 0)


def relative_deviation(approx: ScaledReal, exact: ScaledReal) -> float:
    """|approx - exact| / |exact| computed with aligned exponents."""
    if exact.sign == 0:
        return math.inf if approx.sign != 0 else 0.0
    return abs((approx - exact).ratio(exact))


# ---------------------------------------------------------------------------
# Airy functions


@dataclass(frozen=True, slots=True)
class AiryPair:
    ai: float
    bi: float
    ai_prime: float
    bi_prime: float

    def wronskian(self) -> float:
        return self.ai * self.bi_prime - self.ai_prime * self.bi


@dataclass(frozen=True, slots=True)
class ScaledAiryPair:
    ai: ScaledReal
    bi: ScaledReal
    ai_prime: ScaledReal
    bi_prime: ScaledReal

    def to_pair(self) -> AiryPair:
        return AiryPair(self.ai.to_float(), self.bi.to_float(), self.ai_prime.to_float(), self.bi_prime.to_float())


AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840
SQRT3 = math.sqrt(3.0)
SQRT_PI = math.sqrt(math.pi)

# |x| at and beyond which the large-argument expansions are used
ASYMPTOTIC_CUTOFF = 10.0
NODE_STEP = 0.25


def _taylor_eval(x0: float, y0: float, yp0: float, h: float) -> tuple[float, float]:
    """Value and derivative at x0 + h of the Airy-ODE solution through (y0, yp0)."""
    # (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}
    cm1, c0, c1 = 0.0, y0, yp0
    val = c0 + c1 * h
    der = c1
    hk = h  # h**(k+1) for the current c_{k+2}
    scale = abs(y0) + abs(yp0) + 1e-300
    small = 0
    for k in range(0, 200):
        c2 = (x0 * c0 + cm1) / ((k + 2) * (k + 1))
        der += (k + 2) * c2 * hk
        hk *= h
        val += c2 * hk
        small = small + 1 if abs(c2 * hk) < 1e-18 * scale else 0
        if small >= 3:
            break
        cm1, c0 = c0, c1
        c1 = c2
    return val, der


def _u_coefficients(n: int = 40) -> list[float]:
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1)))
    return u


_U = _u_coefficients()
_V = [1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, len(_U))]


def _asym_sums(zeta: float, alternate: bool) -> tuple[float, float]:
    """Truncated sums of u_k, v_k / zeta**k, stopping at the smallest term."""
    su = sv = 0.0
    zk = 1.0
    last = math.inf
    for k in range(len(_U)):
        s = (-1.0) ** k if alternate else 1.0
        tu = s * _U[k] * zk
        tv = s * _V[k] * zk
        if abs(tu) > last:
            break
        su += tu
        sv += tv
        last = abs(tu)
        if last < 1e-17:
            break
        zk /= zeta
    return su, sv


def _asym_osc_sums(zeta: float) -> tuple[float, float, float, float]:
    """Even/odd split sums used on the negative axis."""
    ue = uo = ve = vo = 0.0
    zk = 1.0
    last = math.inf
    for k in range(len(_U)):
        tu = _U[k] * zk
        if abs(tu) > last:
            break
        last = abs(tu)
        sgn = (-1.0) ** (k // 2)
        if k % 2 == 0:
            ue += sgn * tu
            ve += sgn * _V[k] * zk
        else:
            uo += sgn * tu
            vo += sgn * _V[k] * zk
        if last < 1e-17:
            break
        zk /= zeta
    return ue, uo, ve, vo


def _airy_asymptotic_positive(x: float) -> tuple[float, float, float, float, float]:
    """Return (ai_core, aip_core, bi_core, bip_core, zeta) with the exp(-+zeta) removed."""
    zeta = 2.0 / 3.0 * x * math.sqrt(x)
    x14 = x ** 0.25
    su_a, sv_a = _asym_sums(zeta, alternate=True)
    su_b, sv_b = _asym_sums(zeta, alternate=False)
    ai = su_a / (2.0 * SQRT_PI * x14)
    aip = -x14 * sv_a / (2.0 * SQRT_PI)
    bi = su_b / (SQRT_PI * x14)
    bip = x14 * sv_b / SQRT_PI
    return ai, aip, bi, bip, zeta


def _airy_asymptotic_negative(x: float) -> AiryPair:
    r = -x
    zeta = 2.0 / 3.0 * r * math.sqrt(r)
    r14 = r ** 0.25
    ue, uo, ve, vo = _asym_osc_sums(zeta)
    th = zeta - math.pi / 4.0
    c, s = math.cos(th), math.sin(th)
    ai = (c * ue + s * uo) / (SQRT_PI * r14)
    bi = (-s * ue + c * uo) / (SQRT_PI * r14)
    aip = r14 * (s * ve - c * vo) / SQRT_PI
    bip = r14 * (c * ve + s * vo) / SQRT_PI
    return AiryPair(ai, bi, aip, bip)


@lru_cache(maxsize=1)
def _node_table() -> tuple[np.ndarray, np.ndarray]:
    """Values (Ai, Ai', Bi, Bi') at nodes on [-L, L] built by Taylor marching.

    Ai on the positive side is marched backwards from its large-argument
    expansion (the stable direction); everything else marches outwards from
    the exact values at the origin.
    """
    L = ASYMPTOTIC_CUTOFF
    n = int(round(L / NODE_STEP))
    xs = np.arange(-n, n + 1) * NODE_STEP
    tab = np.zeros((2 * n + 1, 4))
    mid = n
    bi0, bip0 = SQRT3 * AI0, -SQRT3 * AIP0
    tab[mid] = (AI0, AIP0, bi0, bip0)
    # negative side: all four functions are oscillatory, march from 0
    ya, yap, yb, ybp = AI0, AIP0, bi0, bip0
    for j in range(1, n + 1):
        x0 = -(j - 1) * NODE_STEP
        ya, yap = _taylor_eval(x0, ya, yap, -NODE_STEP)
        yb, ybp = _taylor_eval(x0, yb, ybp, -NODE_STEP)
        tab[mid - j] = (ya, yap, yb, ybp)
    # positive side, Bi grows: march forward from 0
    yb, ybp = bi0, bip0
    for j in range(1, n + 1):
        yb, ybp = _taylor_eval((j - 1) * NODE_STEP, yb, ybp, NODE_STEP)
        tab[mid + j, 2:] = (yb, ybp)
    # positive side, Ai decays: march backward from the asymptotic values at L
    a_core, ap_core, _, _, zeta = _airy_asymptotic_positive(L)
    ya, yap = a_core * math.exp(-zeta), ap_core * math.exp(-zeta)
    tab[mid + n, :2] = (ya, yap)
    for j in range(n - 1, 0, -1):
        ya, yap = _taylor_eval((j + 1) * NODE_STEP, ya, yap, -NODE_STEP)
        tab[mid + j, :2] = (ya, yap)
    tab.setflags(write=False)
    xs.setflags(write=False)
    return xs, tab


def _airy_near_origin(x: float) -> AiryPair:
    """Maclaurin series, used for |x| <= 1 where no cancellation occurs."""
    x3 = x * x * x
    f, g = 1.0, x
    fp, gp = 0.0, 1.0
    tf, tg = 1.0, x
    tfp, tgp = 0.0, 1.0
    k = 0
    while True:
        k += 1
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        # f' = sum 3k a_k x^{3k-1}; build from the ratio to the previous term
        tfp = (3 * k) * tf / x if x != 0.0 else 0.0
        tgp = (3 * k + 1) * tg / x if x != 0.0 else 0.0
        f += tf
        g += tg
        fp += tfp
        gp += tgp
        if abs(tf) + abs(tg) + abs(tfp) + abs(tgp) < 1e-18 or k > 60:
            break
    c1, c2 = AI0, -AIP0
    return AiryPair(
        c1 * f - c2 * g,
        SQRT3 * (c1 * f + c2 * g),
        c1 * fp - c2 * gp,
        SQRT3 * (c1 * fp + c2 * gp),
    )


def _airy_taylor(x: float) -> AiryPair:
    xs, tab = _node_table()
    j = int(round((x - xs[0]) / NODE_STEP))
    j = min(max(j, 0), len(xs) - 1)
    x0 = float(xs[j])
    h = x - x0
    a, ap, b, bp = tab[j]
    ai, aip = _taylor_eval(x0, float(a), float(ap), h)
    bi, bip = _taylor_eval(x0, float(b), float(bp), h)
    return AiryPair(ai, bi, aip, bip)


def airy(x: float) -> AiryPair:
    """Ai, Bi, Ai', Bi' at a finite real x.

    Bi overflows to inf for x beyond about 104; use airy_scaled there.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("airy needs a finite argument")
    if abs(x) <= 1.0:
        return _airy_near_origin(x)
    if abs(x) < ASYMPTOTIC_CUTOFF:
        return _airy_taylor(x)
    if x < 0:
        return _airy_asymptotic_negative(x)
    ai, aip, bi, bip, zeta = _airy_asymptotic_positive(x)
    em, ep = math.exp(-zeta), (math.exp(zeta) if zeta < 709.0 else math.inf)
    return AiryPair(ai * em, bi * ep, aip * em, bip * ep)


def airy_scaled(x: float) -> ScaledAiryPair:
    """Same as airy() but every value carries its own binary exponent."""
    x = float(x)
    if x < ASYMPTOTIC_CUTOFF:
        p = airy(x)
        f = ScaledReal.normalize
        return ScaledAiryPair(f(p.ai), f(p.bi), f(p.ai_prime), f(p.bi_prime))
    ai, aip, bi, bip, zeta = _airy_asymptotic_positive(x)
    em = ScaledReal.from_log(-zeta)
    ep = ScaledReal.from_log(zeta)
    f = ScaledReal.normalize
    return ScaledAiryPair(f(ai) * em, f(bi) * ep, f(aip) * em, f(bip) * ep)


MAX_AIRY_ZERO_INDEX = 1_000_000


def _airy_zero_seed(k: int) -> float:
    t = 3.0 * math.pi * (4 * k - 1) / 8.0
    return -(t ** (2.0 / 3.0)) * (1.0 + 5.0 / 48.0 * t ** -2 - 5.0 / 36.0 * t ** -4)


def airy_zero(k: int) -> float:
    """k-th zero of Ai (k = 1, 2, ...), all negative and decreasing."""
    if int(k) != k or k < 1:
        raise DomainError("airy_zero index must be a positive integer")
    k = int(k)
    if k > MAX_AIRY_ZERO_INDEX:
        raise DomainError(f"airy_zero index {k} beyond supported range {MAX_AIRY_ZERO_INDEX}")
    x = _airy_zero_seed(k)
    if k <= 50:
        # bracket: neighbouring zeros are about pi/sqrt|x| apart
        half = 0.25 * math.pi / math.sqrt(abs(x))
        lo, hi = x - half, x + half
        flo = airy(lo).ai
        fhi = airy(hi).ai
        if flo * fhi > 0:
            raise NonConvergenceError(f"failed to bracket Airy zero {k}", x)
        for _ in range(200):
            p = airy(x)
            step = p.ai / p.ai_prime if p.ai_prime != 0 else math.inf
            xn = x - step
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            fn = airy(xn).ai
            if fn == 0.0:
                return xn
            if (fn < 0) == (flo < 0):
                lo, flo = xn, fn
            else:
                hi = xn
            if abs(xn - x) <= 1e-15 * abs(xn) or hi - lo < 1e-14 * abs(xn):
                return xn
            x = xn
        raise NonConvergenceError(f"Airy zero {k} did not converge", x)
    for _ in range(50):
        p = airy(x)
        step = p.ai / p.ai_prime
        x -= step
        if abs(step) <= 2e-15 * abs(x):
            return x
    raise NonConvergenceError(f"Airy zero {k} did not converge", x)


# ---------------------------------------------------------------------------
# Gamma


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a positive finite argument, got {x!r}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Quadrature

Singularity = Literal["none", "sqrt_left", "sqrt_right"]


@dataclass(frozen=True, slots=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    endpoint_singularity: Singularity = "none"

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if self.endpoint_singularity not in ("none", "sqrt_left", "sqrt_right"):
            raise ValueError(f"unknown endpoint_singularity {self.endpoint_singularity!r}")

    def with_(self, **kw) -> "QuadratureSpec":
        fields = dict(
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
            max_subdivisions=self.max_subdivisions,
            endpoint_singularity=self.endpoint_singularity,
        )
        fields.update(kw)
        return QuadratureSpec(**fields)


DEFAULT_SPEC = QuadratureSpec()

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


def _panel(g: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """Composite estimate on [a, b] (two halves) and its error estimate."""
    m = 0.5 * (a + b)
    r = 0.5 * (b - a)
    r2 = 0.5 * r
    nodes = np.concatenate((m + r * _GL_X, (a + m) / 2 + r2 * _GL_X, (m + b) / 2 + r2 * _GL_X))
    vals = np.asarray(g(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    coarse = r * float(np.dot(_GL_W, vals[:15]))
    fine = r2 * (float(np.dot(_GL_W, vals[15:30])) + float(np.dot(_GL_W, vals[30:])))
    if not math.isfinite(fine):
        raise NonConvergenceError(f"integrand not finite on [{a}, {b}]", fine, math.inf)
    return fine, abs(fine - coarse)


def integrate_with_error(
    f: Callable,
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    vectorized: bool = False,
) -> tuple[float, float]:
    """Adaptive 15-point Gauss-Legendre with bisection; returns (value, error estimate)."""
    lo, hi = float(lo), float(hi)
    if hi == lo:
        return 0.0, 0.0
    if hi < lo:
        raise ValueError("integrate expects lo < hi")
    if vectorized:
        fv = f
    else:
        def fv(u):
            return np.array([f(float(v)) for v in u])

    kind = spec.endpoint_singularity
    if kind == "sqrt_left":
        def g(v):
            return fv(lo + v * v) * 2.0 * v
        a, b = 0.0, math.sqrt(hi - lo)
    elif kind == "sqrt_right":
        def g(v):
            return fv(hi - v * v) * 2.0 * v
        a, b = 0.0, math.sqrt(hi - lo)
    else:
        g = fv
        a, b = lo, hi

    val, err = _panel(g, a, b)
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    splits = 0
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if splits >= spec.max_subdivisions:
            raise NonConvergenceError(
                f"quadrature on [{lo}, {hi}] did not reach tolerance after {splits} subdivisions",
                total,
                total_err,
            )
        negerr, pa, pb, pval = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        v1, e1 = _panel(g, pa, pm)
        v2, e2 = _panel(g, pm, pb)
        heapq.heappush(heap, (-e1, pa, pm, v1))
        heapq.heappush(heap, (-e2, pm, pb, v2))
        splits += 1
        # recompute sums from the heap now and then to avoid drift
        if splits % 64 == 0:
            total = math.fsum(h[3] for h in heap)
            total_err = math.fsum(-h[0] for h in heap)
        else:
            total += v1 + v2 - pval
            total_err += e1 + e2 + negerr
    total = math.fsum(h[3] for h in heap)
    return total, total_err


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    vectorized: bool = False,
) -> float:
    """Integral of f over [lo, hi] to within max(abs_tol, rel_tol*|I|).

    With endpoint_singularity set, the substitution u = lo + v**2 (or
    hi - v**2) removes square-root behaviour at that end before any
    subdivision happens.
    """
    return integrate_with_error(f, lo, hi, spec, vectorized)[0]
