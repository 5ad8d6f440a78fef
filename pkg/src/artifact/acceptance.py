"""The eleven end-to-end checks, shared by the command line and the test suite.

Each check returns a `CheckResult` holding the measured numbers, the bound it
was held to and the elapsed time.  A check passes only if both the numeric
bound and its runtime budget hold.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import families as fam
from .field import (
    FieldContext,
    equilibrium_density,
    field_constant_A,
    field_constant_c,
    integrate_density,
    kappa1_product,
    kappa_closed_form,
    kappa_direct,
    measure_rho_identity,
)
from .langer import CoefficientModel, airy_shift_check, residual_beta
from .numerics import ScaledReal, airy, airy_scaled, relative_deviation

__all__ = ["CheckResult", "CHECKS", "run_checks", "select_checks"]


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    measured: dict
    bound: dict
    elapsed: float = 0.0
    budget: float = math.inf
    notes: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "measured": _jsonable(self.measured),
            "bound": _jsonable(self.bound),
            "pass": bool(self.passed),
            "elapsed_s": round(self.elapsed, 4),
        }

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.id:2d} {self.name}: {_summary(self.measured)} ({self.elapsed:.2f}s)"


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _summary(measured: dict) -> str:
    parts = []
    for k, v in measured.items():
        if isinstance(v, float):
            parts.append(f"{k}={v:.3g}")
        elif isinstance(v, (int, bool, str)):
            parts.append(f"{k}={v}")
    return ", ".join(parts)


@dataclass(frozen=True)
class Check:
    id: int
    name: str
    tags: tuple
    budget: float
    body: Callable[[], tuple[bool, dict, dict]]

    def run(self) -> CheckResult:
        t0 = time.perf_counter()
        ok, measured, bound = self.body()
        dt = time.perf_counter() - t0
        within = dt <= self.budget
        if not within:
            measured = dict(measured, runtime_exceeded=True)
        return CheckResult(self.id, self.name, bool(ok and within), measured, dict(bound, runtime_s=self.budget), dt, self.budget)


# ---------------------------------------------------------------------------


def _airy_kernel():
    xs = np.linspace(-10.0, 5.0, 1000)
    w_err = max(abs(airy(float(x)).wronskian() - 1 / math.pi) for x in xs)
    g23 = math.gamma(2.0 / 3.0)
    ai0 = 1.0 / (3 ** (2.0 / 3.0) * g23)
    bi0 = 1.0 / (3 ** (1.0 / 6.0) * g23)
    p = airy(0.0)
    e0 = max(abs(p.ai - ai0), abs(p.bi - bi0))
    return w_err <= 1e-12 and e0 <= 1e-13, {"wronskian_err": w_err, "origin_err": e0}, {"wronskian": 1e-12, "origin": 1e-13}


def _ratios(devs: list[float]) -> list[float]:
    return [devs[i] / devs[i + 1] for i in range(len(devs) - 1)]


def _hermite_outer():
    spec = fam.make_family("hermite")
    Ns = [50, 100, 200, 400]
    tab = fam.build_error_table(spec, Ns, [1.5, 2.0], "outer")
    ok = True
    worst_scaled = 0.0
    ratios = {}
    for y in (1.5, 2.0):
        devs = tab.deviations(y)
        worst_scaled = max(worst_scaled, max(d * n for d, n in zip(devs, Ns)))
        r = _ratios(devs)
        ratios[str(y)] = r
        ok &= all(1.6 <= q <= 2.4 for q in r)
    ok &= worst_scaled <= 5.0
    return ok, {"max_N_times_dev": worst_scaled, "slope": tab.slope, "ratios": ratios}, {"N_times_dev": 5.0, "ratio": [1.6, 2.4]}


def hermite_edge_residual(N: int, y: float) -> tuple[float, float]:
    """(relative deviation, normalised residual) of the Hermite Airy closed form at (N, y).

    The residual is the error measured in Airy units, times exp((2/3) z^{3/2})
    on the decaying side so that the exponential decay is removed.
    """
    spec = fam.make_family("hermite")
    exact = fam.exact_value(spec, N, y)
    approx = fam.asym_airy(spec, N, y, "plus")
    lam = spec.lambda_N(N)
    z = lam ** (4.0 / 3.0) * fam.rho_hat(spec, y)
    ai = airy_scaled(z).ai
    err = ((exact - approx) / approx) * ai
    if z > 0:
        err = err * ScaledReal.from_log((2.0 / 3.0) * z**1.5)
    return relative_deviation(approx, exact), abs(err.to_float())


def hermite_edge_constant(N: int, y: float, samples: int = 41) -> float:
    """N times the normalised residual; on the oscillating side y < 1 the
    sup over one local oscillation period centred at y, since the pointwise
    residual of an oscillating function passes through zero."""
    if y >= 1.0:
        return N * hermite_edge_residual(N, y)[1]
    lam2 = 2 * N + 1
    period = 2 * math.pi / (lam2 * math.sqrt(1 - y * y))
    pts = np.linspace(y - period / 2, y + period / 2, samples)
    return N * max(hermite_edge_residual(N, float(v))[1] for v in pts)


def _hermite_airy():
    Ns = [100, 200, 400]
    ok = True
    worst = 0.0
    d_vals = {}
    for y in (0.95, 1.0, 1.05):
        ds = []
        for N in Ns:
            dev, _ = hermite_edge_residual(N, y)
            worst = max(worst, dev * N)
            ds.append(hermite_edge_constant(N, y))
        d_vals[str(y)] = ds
        ok &= all(0.5 <= q <= 1.5 for q in (ds[i + 1] / ds[i] for i in range(len(ds) - 1)))
    ok &= worst <= 10.0
    return ok, {"max_N_times_dev": worst, "d": d_vals}, {"N_times_dev": 10.0, "d_ratio": [0.5, 1.5]}


def zero_errors(spec: fam.FamilySpec, edge: str, Ns=(50, 100, 200), ks=(1, 2, 3)) -> list[float]:
    out = []
    for N in Ns:
        z = fam.true_zeros(spec, N)
        if edge == "upper":
            out.append(max(abs(z[k - 1] - fam.predict_zero(spec, N, k, "upper")) for k in ks))
        else:
            out.append(max(abs(z[-k] - fam.predict_zero(spec, N, k, "lower")) for k in ks))
    return out


def _zeros():
    Ns = (50, 100, 200)
    ok = True
    slopes = {}
    consts = {}
    for kind in fam.FAMILY_KINDS:
        spec = fam.make_family(kind)
        edges = ["upper"] + (["lower"] if kind in ("hermite", "meixner_pollaczek") else [])
        for edge in edges:
            errs = zero_errors(spec, edge, Ns)
            slope = float(np.polyfit(np.log(Ns), np.log(errs), 1)[0])
            slopes[f"{kind}:{edge}"] = slope
            consts[f"{kind}:{edge}"] = max(e * n ** (4.0 / 3.0) for e, n in zip(errs, Ns))
            ok &= slope <= -1.15
    mx = fam.make_family("meixner")
    worst_sat = 0.0
    for N in Ns:
        z = fam.true_zeros(mx, N)
        for k in (1, 2, 3):
            pred = fam.predict_zero(mx, N, k, "saturated", form="family")
            worst_sat = max(worst_sat, float(np.min(np.abs(z - pred))) * N)
    ok &= worst_sat <= 0.5
    return (
        ok,
        {"slopes": slopes, "C": consts, "max_slope": max(slopes.values()), "saturated_N_times_dist": worst_sat},
        {"slope": -1.15, "saturated_N_times_dist": 0.5},
    )


IDENTITY_MODELS = {
    "case1": CoefficientModel(math.sqrt(2.0), 2.0, 1.0, 0.5),
    "case2": CoefficientModel(1.0, 2.0, 1.0, 0.25),
    "case3": CoefficientModel(0.5 / 0.75, 1.25 / 0.75, 1.0, 0.0),
}


def _identity(seed: int = 20240611, eps: float = 0.01):
    rng = np.random.default_rng(seed)
    worst = {}
    for name, m in IDENTITY_MODELS.items():
        ctx = FieldContext(m, eps)
        w = 0.0
        for _ in range(20):
            t = float(rng.uniform(0.5, 1.0))
            hi = float(m.gamma_plus(t, eps))
            # the upper-edge variable lives on y > 0; keep clear of y = 0 itself
            lo = max(float(m.gamma_minus(t, eps)), 0.0) + 0.01 * hi
            y = float(rng.uniform(lo, hi))
            lhs, rhs = measure_rho_identity(ctx, t, y, "plus")
            w = max(w, abs(lhs - rhs))
        worst[name] = w
    return max(worst.values()) <= 1e-6, {"max_err": max(worst.values()), "per_case": worst}, {"abs": 1e-6}


def _constants():
    errs = {
        "A_plus_hermite": abs(field_constant_A(CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)) - 1.0),
        "A_laguerre": abs(field_constant_A(CoefficientModel(1.0, 2.0, 1.0, 0.25)) - 1.0),
        "A_cdh": abs(field_constant_A(CoefficientModel(1.0, 2.0, 0.5, 0.75)) - math.pi / math.sqrt(2)),
        "c_meixner": abs(field_constant_c(CoefficientModel(0.5 / 0.75, 1.25 / 0.75, 1.0, 0.0)) - 1.0),
    }
    worst = max(errs.values())
    return worst <= 1e-9, dict(errs, max_err=worst), {"abs": 1e-9}


def _normalization():
    models = {
        "hermite": CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0),
        "laguerre": CoefficientModel(1.0, 2.0, 1.0, 0.25),
        "meixner": CoefficientModel(0.5 / 0.75, 1.25 / 0.75, 1.0, 0.0),
    }
    mass = {}
    for name, m in models.items():
        ctx = FieldContext(m, 0.0, 1.0)
        lo = float(m.gamma_minus(1.0, 0.0)) if m.case in ("case1", "case1a") else 0.0
        hi = float(m.gamma_plus(1.0, 0.0))
        mass[name] = abs(integrate_density(ctx, lo, hi) - 1.0)
    a = 1 / math.sqrt(2)
    ctx = FieldContext(models["hermite"], 0.0, 1.0)
    grid = np.linspace(-2 * a, 2 * a, 52)[1:-1]
    pw = max(abs(equilibrium_density(ctx, float(y)) - math.sqrt(4 * a * a - y * y) / (2 * math.pi * a * a)) for y in grid)
    ok = max(mass.values()) <= 1e-8 and pw <= 1e-8
    return ok, {"mass_err": max(mass.values()), "semicircle_err": pw, "per_model": mass}, {"mass": 1e-8, "semicircle": 1e-8}


def _residual():
    m = CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)
    vals = [residual_beta(m, 0.7, 1.0, eps).scaled() for eps in (1e-2, 5e-3, 2.5e-3)]
    spread = max(vals) / min(vals)
    ok = all(math.isfinite(v) for v in vals) and spread < 2.0
    return ok, {"scaled_beta": vals, "spread": spread}, {"spread": 2.0}


def _shift():
    eps_list = (0.01, 0.005, 0.0025)
    ok = True
    consts = {}
    for t in (0.5, 1.0, 2.0):
        cs = []
        for eps in eps_list:
            x1, _ = airy_shift_check(lambda u: u, t, eps)
            cs.append(abs(x1 - math.cosh(math.sqrt(t))) / eps)
        consts[str(t)] = cs
        ok &= max(cs) / min(cs) <= 1.5
    return ok, {"C": consts, "max_C": max(max(v) for v in consts.values())}, {"C_ratio": 1.5}


def sweep_points(spec: fam.FamilySpec) -> tuple[float, float]:
    """(outer point, edge point) used by the six-family sweep."""
    e = spec.upper_edge
    return e + 0.5, e


def _sweep(N: int = 200):
    ok = True
    d = {}
    for kind in fam.FAMILY_KINDS:
        spec = fam.make_family(kind)
        y_out, y_edge = sweep_points(spec)
        dev_o = relative_deviation(fam.asym_outer(spec, N, y_out), fam.exact_value(spec, N, y_out))
        dev_a = relative_deviation(fam.asym_airy(spec, N, y_edge), fam.exact_value(spec, N, y_edge))
        d[f"{kind}:outer"] = dev_o * N
        d[f"{kind}:airy"] = dev_a * N
        ok &= dev_o <= 0.1 and dev_a <= 0.1
    return ok, {"d": d, "max_dev": max(d.values()) / N}, {"dev": 0.1}


def _kappa():
    out = {}
    ok = True
    for name, m in (
        ("hermite", CoefficientModel(1 / math.sqrt(2), 0.0, 2.0, 0.0)),
        ("laguerre", CoefficientModel(1.0, 2.0, 1.0, 0.25)),
    ):
        k = kappa_closed_form(m)
        e1 = abs(kappa_direct(m, 5000) / k - 1)
        e2 = abs(kappa_direct(m, 10000) / k - 1)
        out[f"{name}:n_times_err"] = e2 * 10000
        out[f"{name}:halving_ratio"] = e1 / e2
        ok &= 1.6 <= e1 / e2 <= 2.4 and e2 * 10000 <= 1.0
    k1 = {}
    for kind in ("meixner_pollaczek", "laguerre", "meixner", "cont_dual_hahn"):
        spec = fam.make_family(kind)
        k1[kind] = abs(kappa1_product(spec.model, spec.coefficients.a1) - fam.kappa1_closed_form(spec))
    worst = max(k1.values())
    ok &= worst <= 1e-8
    return ok, dict(out, kappa1_max_err=worst, kappa1_err=k1), {"n_times_err": 1.0, "halving_ratio": [1.6, 2.4], "kappa1": 1e-8}


CHECKS: tuple[Check, ...] = (
    Check(1, "airy kernel", ("airy", "kernel", "numerics"), 1.0, _airy_kernel),
    Check(2, "hermite outer", ("hermite", "outer", "families"), 5.0, _hermite_outer),
    Check(3, "hermite airy edge", ("hermite", "airy", "edge", "families"), 5.0, _hermite_airy),
    Check(4, "zeros", ("zeros", "airy", "families"), 30.0, _zeros),
    Check(5, "langer measure identity", ("langer", "field", "identity"), 10.0, _identity),
    Check(6, "field constants", ("field", "constants"), 2.0, _constants),
    Check(7, "equilibrium normalization", ("field", "density"), 5.0, _normalization),
    Check(8, "residual bound", ("langer", "airy", "residual"), 5.0, _residual),
    Check(9, "airy shift leading order", ("langer", "airy", "shift"), 1.0, _shift),
    Check(10, "six-family sweep", ("families", "sweep", "outer", "airy"), 30.0, _sweep),
    Check(11, "kappa constants", ("field", "kappa"), 2.0, _kappa),
)


def select_checks(only: Optional[str] = None) -> list[Check]:
    """Filter by comma-separated ids or tags; None selects everything."""
    if not only:
        return list(CHECKS)
    keys = [k.strip().lower() for k in only.split(",") if k.strip()]
    chosen = []
    for c in CHECKS:
        for k in keys:
            if k.isdigit() and int(k) == c.id or k in c.tags or k in c.name:
                chosen.append(c)
                break
    return chosen


def run_checks(only: Optional[str] = None) -> list[CheckResult]:
    return [c.run() for c in select_checks(only)]
