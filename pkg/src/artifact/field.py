"""External field, potentials, equilibrium/constraint densities and outer WKB.

All quantities are for the model coefficients of `CoefficientModel` at a
fixed eps (eps = 0 gives the limiting problem) and time horizon t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .langer import CoefficientModel, rho1, rho2
from .numerics import (
    DomainError,
    QuadratureSpec,
    ScaledReal,
    integrate,
    log_gamma,
)
from .recurrence import RecurrenceCoefficients

__all__ = [
    "FieldContext",
    "WkbPhases",
    "external_Q",
    "field_constant_A",
    "field_constant_c",
    "potential_V",
    "log_mean_coefficient",
    "equilibrium_density",
    "density_on_support",
    "support",
    "integrate_density",
    "constraint_density",
    "saturated_complement_density",
    "gamma_phase",
    "measure_rho_identity",
    "wkb_phases",
    "wkb_outer",
    "wkb_tilde",
    "kappa_direct",
    "kappa_closed_form",
    "kappa1_product",
    "kappa_constants",
]

DEFAULT = QuadratureSpec()
# exponential map u = lo + h*exp(-s) stops once h*exp(-s) reaches this size
_EXP_MAP_FLOOR = 1e-140


@dataclass(frozen=True)
class FieldContext:
    model: CoefficientModel
    eps: float = 0.0
    t: float = 1.0
    spec: QuadratureSpec = DEFAULT

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        if not self.t > 0:
            raise ValueError("t must be positive")

    def at(self, t: float) -> "FieldContext":
        return FieldContext(self.model, self.eps, t, self.spec)

    @cached_property
    def l_t(self) -> float:
        return log_mean_coefficient(self)


# ---------------------------------------------------------------------------
# integration helpers


def _integrate_exp_left(f: Callable, lo: float, hi: float, spec: QuadratureSpec) -> float:
    """Integral with an integrable power/log singularity at lo via u = lo + h e^{-s}."""
    h = hi - lo
    if h <= 0:
        return 0.0

    def g(s):
        e = h * np.exp(-s)
        return np.asarray(f(lo + e), dtype=float) * e

    end = math.log(h / _EXP_MAP_FLOOR)
    return integrate(g, 0.0, end, spec.with_(endpoint_singularity="none"), vectorized=True)


def _integrate_piece(f: Callable, lo: float, hi: float, left: str, right: str, spec: QuadratureSpec) -> float:
    """One interval with endpoint behaviours 'none', 'sqrt' or 'log' (left only)."""
    if hi <= lo:
        return 0.0
    if left == "none" and right == "none":
        return integrate(f, lo, hi, spec.with_(endpoint_singularity="none"), vectorized=True)
    if right == "none" and left == "log":
        return _integrate_exp_left(f, lo, hi, spec)
    if right == "none" and left == "sqrt":
        return integrate(f, lo, hi, spec.with_(endpoint_singularity="sqrt_left"), vectorized=True)
    if left == "none" and right == "sqrt":
        return integrate(f, lo, hi, spec.with_(endpoint_singularity="sqrt_right"), vectorized=True)
    mid = 0.5 * (lo + hi)
    return _integrate_piece(f, lo, mid, left, "none", spec) + _integrate_piece(f, mid, hi, "none", right, spec)


def _arc_integral(g: Callable, center: float, radius: float, lo: float, hi: float, spec: QuadratureSpec) -> float:
    """int_lo^hi g(w) dw / sqrt(radius^2 - (w - center)^2) with w = center + radius cos(theta).

    The substitution absorbs both square-root ends, so no endpoint ever has to be
    resolved against rounding in radius^2 - (w - center)^2.
    """
    top, bottom = center + radius, center - radius

    def angle(w: float) -> float:
        # half-angle form measured from the nearer end keeps theta exact at the ends
        if w >= center:
            return 2.0 * math.asin(math.sqrt(min(max(top - w, 0.0) / (2 * radius), 1.0)))
        return math.pi - 2.0 * math.asin(math.sqrt(min(max(w - bottom, 0.0) / (2 * radius), 1.0)))

    th_lo, th_hi = angle(hi), angle(lo)

    def f(th):
        return g(center + radius * np.cos(th))

    return _integrate_piece(f, th_lo, th_hi, "none", "none", spec)


def _acosh_re(z):
    """Real part of ln(z + sqrt(z^2-1)) on the branch that behaves like ln 2z at infinity."""
    az = np.abs(np.asarray(z, dtype=float))
    return np.log(np.maximum(az, 1.0) + np.sqrt(np.maximum(az * az - 1.0, 0.0)))


# ---------------------------------------------------------------------------
# Q and the constants


def external_Q(ctx: FieldContext, y: float) -> float:
    """Q(y, eps) from the w-integral with the square-root end at the turning point."""
    m, eps = ctx.model, ctx.eps
    if y == 0:
        raise DomainError("external_Q is not defined at y = 0")
    if y > 0:
        top = y / (m.b + 2 * m.a)
        mult = y
    else:
        if m.case not in ("case1", "case1a"):
            raise DomainError("negative y only has a field in the b < 2a cases")
        top = y / (m.b - 2 * m.a)
        mult = -y
    w0 = float(m.q_eps(0.0, eps))
    if not top > w0:
        raise DomainError(f"y={y} is below the first band edge at eps={eps}")

    def f(w):
        w = np.asarray(w, dtype=float)
        num = m.q_eps_inv(w, eps) / w
        den = np.sqrt(np.maximum((y - m.b * w) ** 2 - (2 * m.a * w) ** 2, 0.0))
        return num / den

    left = "log" if w0 == 0.0 else "none"
    return mult * _integrate_piece(f, w0, top, left, "sqrt", ctx.spec)


def _a_integral(alpha: float, a: float, b: float, spec: QuadratureSpec) -> float:
    """alpha * int_0^{2a/(2a+b)} u^(alpha-1) acosh(1/u - b/2a) du."""
    top = 2 * a / (2 * a + b)

    def f(u):
        u = np.asarray(u, dtype=float)
        z = 1.0 / u - b / (2 * a)
        return u ** (alpha - 1.0) * np.log(z + np.sqrt(np.maximum(z * z - 1.0, 0.0)))

    return alpha * _integrate_piece(f, 0.0, top, "log", "sqrt", spec)


def field_constant_A(model: CoefficientModel, which: Optional[str] = None, spec: QuadratureSpec = DEFAULT) -> float:
    """The constant in front of the leading power of Q.

    `which` is 'plus' (y > 0, default) or 'minus' (y < 0 side, b < 2a only).
    The same integral serves every case on the y > 0 side.
    """
    if which in (None, "plus"):
        return _a_integral(model.alpha, model.a, model.b, spec)
    if which == "minus":
        if model.case not in ("case1", "case1a"):
            raise DomainError("the y < 0 constant only exists when b < 2a")
        return _a_integral(model.alpha, model.a, -model.b, spec)
    raise ValueError(f"unknown side {which!r}")


def field_constant_c(model: CoefficientModel, spec: QuadratureSpec = DEFAULT) -> float:
    """(alpha/pi) int_{b-2a}^{b+2a} u^(-alpha) du / sqrt(4a^2 - (u-b)^2), for b > 2a."""
    if model.case != "case3":
        raise DomainError("the constraint constant needs b > 2a")
    a, b, al = model.a, model.b, model.alpha

    def f(u):
        return np.power(u, -al)

    return al / math.pi * _arc_integral(f, b, 2 * a, b - 2 * a, b + 2 * a, spec)


# ---------------------------------------------------------------------------
# potential


def log_mean_coefficient(ctx: FieldContext) -> float:
    """l_t = (1/t) int_0^t ln(a q_eps(u)) du."""
    m, eps, t = ctx.model, ctx.eps, ctx.t

    def f(u):
        return np.log(m.a * m.q_eps(u, eps))

    left = "log" if eps == 0 else "none"
    return _integrate_piece(f, 0.0, t, left, "none", ctx.spec) / t


def _kinks(ctx: FieldContext, y: float) -> list[float]:
    """Times in (0, t) where |z(u)| crosses 1."""
    m, eps = ctx.model, ctx.eps
    out = []
    for edge in (m.b + 2 * m.a, m.b - 2 * m.a):
        if edge == 0 or y / edge <= 0:
            continue
        u = float(m.q_eps_inv(y / edge, eps))
        if 0 < u < ctx.t:
            out.append(u)
    return sorted(out)


def potential_V(ctx: FieldContext, y: float) -> float:
    """V^t(y): time average of Re ln(z + sqrt(z^2-1)) plus l_t."""
    m, eps, t = ctx.model, ctx.eps, ctx.t

    def f(u):
        q = m.q_eps(u, eps)
        return _acosh_re(y / (2 * m.a * q) - m.b / (2 * m.a))

    pts = [0.0] + _kinks(ctx, y) + [t]
    total = 0.0
    for i in range(len(pts) - 1):
        left = "sqrt" if i > 0 else ("log" if eps == 0 else "none")
        right = "sqrt" if i < len(pts) - 2 else "none"
        total += _integrate_piece(f, pts[i], pts[i + 1], left, right, ctx.spec)
    return total / t + ctx.l_t


# ---------------------------------------------------------------------------
# equilibrium measure


def support(ctx: FieldContext) -> tuple[float, float]:
    """Interval carrying the equilibrium measure at time t."""
    m, eps, t = ctx.model, ctx.eps, ctx.t
    hi = float(m.gamma_plus(t, eps))
    if m.case in ("case1", "case1a"):
        lo = float(m.gamma_minus(t, eps))
    else:
        lo = 0.0 if eps == 0 else min(float(m.gamma_plus(0.0, eps)), float(m.gamma_minus(0.0, eps)))
        lo = max(lo, 0.0)
    return lo, hi


def _density_w(m: CoefficientModel, bb: float, eps: float, t: float, y: float, spec: QuadratureSpec) -> tuple[float, bool]:
    """w-integral form for y > 0 with b replaced by bb (bb = -b mirrors y < 0)."""
    a = m.a
    q_t = float(m.q_eps(t, eps))
    q_0 = float(m.q_eps(0.0, eps))
    lo = max(y / q_t, bb - 2 * a)
    hi = min(y / q_0 if q_0 > 0 else math.inf, bb + 2 * a)
    if not hi > lo:
        return 0.0, False
    sig = m.s1 + 0.5
    al = m.alpha

    def f(w):
        v = y / w
        return al * v ** (al - 1.0) * (1.0 + sig * eps) / w

    val = _arc_integral(f, bb, 2 * a, lo, hi, spec)
    return val / (t * math.pi), True


def _density_time(ctx: FieldContext, y: float) -> tuple[float, bool]:
    """The time-integral form (1/(pi t)) int dp / sqrt((g+(p) - y)(y - g-(p)))."""
    m, eps, t = ctx.model, ctx.eps, ctx.t

    def f(p):
        gp = m.gamma_plus(p, eps)
        gm = m.gamma_minus(p, eps)
        return 1.0 / np.sqrt(np.abs(gp - y) * np.abs(y - gm))

    lo, hi = 0.0, t
    left = "log" if eps == 0 else "none"
    if y > 0:
        u = float(m.q_eps_inv(y / (m.b + 2 * m.a), eps))
        if u >= t:
            return 0.0, False
        if u > 0:
            lo, left = u, "sqrt"
    right = "none"
    edge_lower = m.b - 2 * m.a
    if edge_lower != 0 and y / edge_lower > 0:
        u = float(m.q_eps_inv(y / edge_lower, eps))
        if y > 0:
            # saturated side: the lower edge overtakes y at time u
            if u <= lo:
                return 0.0, False
            if u < t:
                hi, right = u, "sqrt"
        else:
            if u >= t:
                return 0.0, False
            if u > 0:
                lo, left = u, "sqrt"
    return _integrate_piece(f, lo, hi, left, right, ctx.spec) / (math.pi * t), True


def density_on_support(ctx: FieldContext, y: float) -> tuple[float, bool]:
    """(density, inside-support flag)."""
    m = ctx.model
    if y > 0:
        return _density_w(m, m.b, ctx.eps, ctx.t, y, ctx.spec)
    if y < 0:
        if m.case not in ("case1", "case1a"):
            return 0.0, False
        return _density_w(m, -m.b, ctx.eps, ctx.t, -y, ctx.spec)
    return _density_time(ctx, 0.0)


def equilibrium_density(ctx: FieldContext, y: float) -> float:
    """d nu_t / dy; zero outside the support."""
    return density_on_support(ctx, y)[0]


def integrate_density(ctx: FieldContext, lo: float, hi: float, density: Optional[Callable[[float], float]] = None) -> float:
    """int_lo^hi of a density in y, split at the points where it is not smooth."""
    m, eps, t = ctx.model, ctx.eps, ctx.t
    dens = density or (lambda s: equilibrium_density(ctx, s))
    s_lo, s_hi = support(ctx)
    breaks = {s_lo, s_hi, 0.0}
    if m.case == "case3":
        breaks.add(float(m.gamma_minus(t, eps)))
    if eps > 0:
        breaks.add(float(m.gamma_plus(0.0, eps)))
        if m.case != "case2":
            breaks.add(float(m.gamma_minus(0.0, eps)))
    pts = sorted({lo, hi} | {p for p in breaks if lo < p < hi})

    def vec(ys):
        return np.array([dens(float(v)) for v in ys])

    total = 0.0
    for i in range(len(pts) - 1):
        a_, b_ = pts[i], pts[i + 1]
        total += _integrate_piece(vec, a_, b_, "sqrt", "sqrt", ctx.spec)
    return total


def constraint_density(ctx: FieldContext, y: float) -> float:
    """d sigma / dy for b > 2a: (1 + (s1+1/2) eps) c_alpha y^(alpha-1) / t."""
    m = ctx.model
    if m.case != "case3":
        raise DomainError("constraint_density needs b > 2a")
    if not y > 0:
        raise DomainError("constraint_density needs y > 0")
    c = field_constant_c(m, ctx.spec)
    return (1.0 + (m.s1 + 0.5) * ctx.eps) * c * y ** (m.alpha - 1.0) / ctx.t


def saturated_complement_density(ctx: FieldContext, y: float) -> float:
    """Density whose integral from y to the lower edge gives the saturated-side phase.

    (1/(pi t)) int_{t_p^-}^t du / sqrt((g-(u) - y)(g+(u) - y)), for 0 < y < g-(t).
    """
    m, eps, t = ctx.model, ctx.eps, ctx.t
    if m.case != "case3":
        raise DomainError("needs b > 2a")
    tp = float(m.q_eps_inv(y / (m.b - 2 * m.a), eps))
    if not 0 < tp < t:
        return 0.0

    def f(u):
        return 1.0 / np.sqrt(np.abs(m.gamma_minus(u, eps) - y) * np.abs(m.gamma_plus(u, eps) - y))

    return _integrate_piece(f, tp, t, "sqrt", "none", ctx.spec) / (math.pi * t)


def gamma_phase(ctx: FieldContext, y: float) -> float:
    """(1/eps) Gamma_eps(y): int_{b-2a}^{b+2a} qhat^{-1}(qhat(1/eps+1/2) y/u) du / sqrt(4a^2-(u-b)^2)."""
    m, eps = ctx.model, ctx.eps
    if m.case != "case3":
        raise DomainError("gamma_phase needs b > 2a")
    if not eps > 0:
        raise DomainError("gamma_phase needs eps > 0")
    if not y > 0:
        raise DomainError("gamma_phase needs y > 0")
    a, b = m.a, m.b
    lam = float(m.qhat(1.0 / eps + 0.5))

    def f(u):
        return np.power(lam * y / u, m.alpha) - m.s1

    return _arc_integral(f, b, 2 * a, b - 2 * a, b + 2 * a, ctx.spec)


def measure_rho_identity(ctx: FieldContext, t: float, y: float, which: str = "plus") -> tuple[float, float]:
    """Both sides of the relation between the Langer variable and the measure.

    'plus':  (2/3)(-rho1)^{3/2} vs pi t int_y^{g+(t)} d nu_t
    'minus', b < 2a, y < 0: (2/3)(-rho2)^{3/2} vs pi t int_{g-(t)}^y d nu_t
    'minus', b > 2a, 0 < y < g-(t): (2/3) rho2^{3/2} vs pi t int_y^{g-(t)} of the
    saturated complement density.
    """
    c = ctx.at(t)
    m, eps = c.model, c.eps
    tight = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)
    if which == "plus":
        r = rho1(m, t, y, eps, tight)
        lhs = (2.0 / 3.0) * max(-r, 0.0) ** 1.5
        rhs = math.pi * t * integrate_density(c, y, float(m.gamma_plus(t, eps)))
        return lhs, rhs
    r = rho2(m, t, y, eps, tight)
    if m.case in ("case1", "case1a"):
        lhs = (2.0 / 3.0) * max(-r, 0.0) ** 1.5
        rhs = math.pi * t * integrate_density(c, float(m.gamma_minus(t, eps)), y)
        return lhs, rhs
    lhs = (2.0 / 3.0) * max(r, 0.0) ** 1.5
    gm = float(m.gamma_minus(t, eps))

    def dens(s):
        return saturated_complement_density(c, s)

    def vec(ys):
        return np.array([dens(float(v)) for v in ys])

    rhs = math.pi * t * _integrate_piece(vec, y, gm, "none", "sqrt", c.spec)
    return lhs, rhs


# ---------------------------------------------------------------------------
# outer WKB


@dataclass(frozen=True)
class WkbPhases:
    h1: float
    h2_plus: float
    h2_minus: float
    s0_prime_plus: float
    s1_prime_plus: float


def wkb_phases(ctx: FieldContext, t: float, y: float) -> WkbPhases:
    """Characteristic roots and the first two phase derivatives at time t."""
    m, eps = ctx.model, ctx.eps
    bt = float(m.b_coef(t, eps))
    at = float(m.a_coef(t, eps))
    d = y - bt
    disc = d * d - 4 * at * at
    if disc <= 0:
        raise DomainError(f"y={y} is inside the band at t={t}")
    h1 = math.sqrt(disc) if d > 0 else -math.sqrt(disc)
    h2p = d + h1
    h2m = 4 * at * at / h2p
    # s1' from differentiating the closed form of s1^+
    db = m.b * m.q_eps_derivs(t, eps)[1]
    da = m.a * float(m.qhat_eps(t, eps)) / (m.alpha * (t + m.s1 * eps))
    dd = -db
    ddisc = 2 * d * dd - 8 * at * da
    dh1 = ddisc / (2 * h1)
    s1p = -0.25 * ddisc / disc + 0.5 * (dd + dh1) / h2p + 0.5 * db / h1
    return WkbPhases(h1, h2p, h2m, math.log(abs(h2p)), s1p)


def _outer_phase_integral(ctx: FieldContext, tn: float, y: float) -> float:
    """int_0^{tn} ln(z + sqrt(z^2 - 1)) du with z = (y - b(u))/(2 a(u + eps/2))."""
    m, eps = ctx.model, ctx.eps
    if tn <= 0:
        return 0.0

    def f(u):
        q = m.q_eps(u, eps)
        z = y / (2 * m.a * q) - m.b / (2 * m.a)
        return np.log(z + np.sqrt(np.maximum(z * z - 1.0, 0.0)))

    left = "log" if eps == 0 else "none"
    return _integrate_piece(f, 0.0, tn, left, "none", ctx.spec)


def kappa_direct(model: CoefficientModel, n: int) -> float:
    """exp(int_0^n ln qhat(v + 1/2) dv) / prod_{i<=n} qhat(i), with the product summed in logs."""
    w0 = model.s1 + 0.5
    w1 = n + model.s1 + 0.5
    integral = (w1 * math.log(w1) - w1 - (w0 * math.log(w0) - w0)) / model.alpha
    logs = np.log(np.arange(1, n + 1, dtype=float) + model.s1) / model.alpha
    return math.exp(integral - math.fsum(logs))


def kappa_closed_form(model: CoefficientModel) -> float:
    """Large-n limit of kappa_direct from Stirling's formula."""
    al, s = model.alpha, model.s1
    w = s + 0.5
    lg = w / al + log_gamma(s + 1.0) / al - math.log(2 * math.pi) / (2 * al) - w * math.log(w) / al
    return math.exp(lg)


def kappa1_product(
    model: CoefficientModel,
    family_a1: Callable[[int], float],
    n: Optional[int] = None,
    cutoff: float = 1e-12,
    chunk: int = 32768,
    max_terms: int = 50_000_000,
) -> float:
    """prod_{i>=1} a qhat(i) / a1(i), truncated at n or run until terms are within `cutoff` of 1.

    When run to convergence the remaining tail is added from the last term,
    assuming terms approach 1 like 1/i^2.
    """
    a_vec = np.vectorize(family_a1, otypes=[float])
    total = 0.0
    start = 1
    while True:
        stop = start + chunk if n is None else min(start + chunk, n + 1)
        i = np.arange(start, stop, dtype=float)
        a1 = a_vec(np.arange(start, stop))
        if np.any(a1 <= 0):
            raise DomainError("family a1 must be positive")
        lt = np.log(model.a * np.power(i + model.s1, 1.0 / model.alpha) / a1)
        total += math.fsum(lt)
        if n is not None and stop > n:
            return math.exp(total)
        small = np.abs(lt) < cutoff
        if n is None and small[-1]:
            # first index of the trailing run of small terms
            big = np.flatnonzero(~small)
            j = int(big[-1]) + 1 if big.size else 0
            total = math.fsum([total, -math.fsum(lt[j:])])
            last = start + j
            # terms behave like c/i^2 with c = lt*last^2; sum_{i>=last} 1/i^2 ~ 1/last + 1/(2 last^2)
            total += float(lt[j]) * (last + 0.5)
            return math.exp(total)
        start = stop
        if start > max_terms:
            raise DomainError("kappa1 product did not settle")


def kappa_constants(
    model: CoefficientModel,
    family_coeffs: RecurrenceCoefficients,
    eps: float = 0.0,
    t_in: float = 0.0,
) -> tuple[float, float]:
    """(kappa, kappa1): Stirling closed form and the converged comparison product."""
    del eps, t_in  # the converged product does not depend on them
    return kappa_closed_form(model), kappa1_product(model, family_coeffs.a1)


def wkb_outer(ctx: FieldContext, n: int, y: float, kappa1_n: float = 1.0) -> ScaledReal:
    """Outer approximation of the orthonormal p_n at the scaled point y."""
    m, eps = ctx.model, ctx.eps
    if not eps > 0:
        raise DomainError("wkb_outer needs eps > 0")
    tn = n * eps
    if not y > float(m.gamma_plus(tn, eps)):
        raise DomainError(f"y={y} is inside the band hull at t={tn}")
    q = float(m.q_eps(tn, eps))
    den = (y - m.b * q) ** 2 - 4 * (m.a * q) ** 2
    log_amp = 0.25 * (2 * math.log(y) - math.log(den))
    phase = _outer_phase_integral(ctx, tn, y) / eps
    log_val = math.log(kappa_direct(m, n)) + math.log(kappa1_n) + log_amp + phase
    return ScaledReal.from_log(log_val)


def _psi_plus_log(ctx: FieldContext, t: float, y: float) -> float:
    m, eps = ctx.model, ctx.eps

    def h(u):
        bt = m.b_coef(u, eps)
        at = m.a_coef(u, eps)
        d = y - bt
        h1 = np.sqrt(np.maximum(d * d - 4 * at * at, 0.0))
        return d, h1

    def f_log(u):
        d, h1 = h(u)
        return np.log(d + h1)

    def f_b(u):
        _, h1 = h(u)
        qq = m.q_eps(u, eps)
        dq = qq / (m.alpha * (np.asarray(u) + (m.s1 + 0.5) * eps))
        return m.b * dq / (2.0 * h1)

    d, h1 = h(t)
    val = 0.5 * math.log((d + h1) / h1)
    if t > 0:
        spec = ctx.spec
        val += _integrate_piece(f_log, 0.0, t, "none", "none", spec) / eps
        if m.b != 0:
            val += _integrate_piece(f_b, 0.0, t, "none", "none", spec)
    return float(val)


def wkb_tilde(ctx: FieldContext, n: int, y: float) -> ScaledReal:
    """psi_1^+(n eps)/psi_1^+(0): outer approximation of the monic-type sequence."""
    if not ctx.eps > 0:
        raise DomainError("wkb_tilde needs eps > 0")
    return ScaledReal.from_log(_psi_plus_log(ctx, n * ctx.eps, y) - _psi_plus_log(ctx, 0.0, y))
