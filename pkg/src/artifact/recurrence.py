"""Three-term recurrences evaluated without overflow, plus Jacobi-matrix zeros.

These are the ground truth every asymptotic formula is compared with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .numerics import ScaledReal

__all__ = [
    "RecurrenceCoefficients",
    "eval_orthonormal",
    "orthonormal_value",
    "eval_monic_tilde",
    "polynomial_zeros",
    "sturm_count",
    "gauss_rule",
    "casorati",
]

_BIG = 2.0**100
_SMALL = 2.0**-100


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """a1(n) for n >= 1 (must be positive) and b1(n) for n >= 0."""

    a1: Callable[[int], float]
    b1: Callable[[int], float]
    description: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def arrays(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """a1(1..n) and b1(0..n-1) as float arrays (a1 checked positive)."""
        key = n
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        a = np.array([float(self.a1(i)) for i in range(1, n + 1)])
        b = np.array([float(self.b1(i)) for i in range(0, n)])
        if n and not np.all(a > 0):
            bad = int(np.argmin(a > 0)) + 1
            raise ValueError(f"{self.description or 'coefficients'}: a1({bad}) is not positive")
        self._cache.clear()
        self._cache[key] = (a, b)
        return a, b


def _check_n(N: int) -> int:
    if int(N) != N or N < 0:
        raise ValueError(f"N must be a non-negative integer, got {N!r}")
    return int(N)


def _run(step: Callable[[int, float, float], float], p0: float, p1: float, N: int, keep: bool):
    """Drive a two-term linear recurrence with a shared binary exponent."""
    out: list[ScaledReal] = [ScaledReal.normalize(p0)]
    if N == 0:
        return out
    shift = 0
    prev, cur = p0, p1
    if keep:
        out.append(ScaledReal.normalize(cur))
    for n in range(1, N):
        nxt = step(n, prev, cur)
        prev, cur = cur, nxt
        m = max(abs(prev), abs(cur))
        if m > _BIG or (0.0 < m < _SMALL):
            e = math.frexp(m)[1]
            prev, cur = math.ldexp(prev, -e), math.ldexp(cur, -e)
            shift += e
        if keep:
            out.append(ScaledReal.normalize(cur, shift))
    if not keep:
        out.append(ScaledReal.normalize(prev, shift))
        out.append(ScaledReal.normalize(cur, shift))
    return out


def eval_orthonormal(coeffs: RecurrenceCoefficients, N: int, x: float) -> list[ScaledReal]:
    """p_0..p_N with p_0 = 1 and a1(n+1)p_{n+1} = (x - b1(n))p_n - a1(n)p_{n-1}."""
    N = _check_n(N)
    x = float(x)
    a, b = coeffs.arrays(N + 1)
    if N == 0:
        return [ScaledReal.normalize(1.0)]
    p1 = (x - b[0]) / a[0]

    def step(n, pm, pc):
        return ((x - b[n]) * pc - a[n - 1] * pm) / a[n]

    return _run(step, 1.0, p1, N, keep=True)


def orthonormal_value(coeffs: RecurrenceCoefficients, N: int, x: float) -> ScaledReal:
    """Only p_N, skipping the intermediate ScaledReal allocations."""
    N = _check_n(N)
    x = float(x)
    if N == 0:
        return ScaledReal.normalize(1.0)
    a, b = coeffs.arrays(N + 1)
    p1 = (x - b[0]) / a[0]

    def step(n, pm, pc):
        return ((x - b[n]) * pc - a[n - 1] * pm) / a[n]

    return _run(step, 1.0, p1, N, keep=False)[-1]


def eval_monic_tilde(scaled: RecurrenceCoefficients, N: int, y: float) -> list[ScaledReal]:
    """Sequence with p_0 = 1, p_1 = 2(y - b(0)) and
    p_{n+1} = 2(y - b(n)) p_n - 4 a(n)^2 p_{n-1}.

    `scaled` must already hold the epsilon-scaled coefficients indexed by n.
    """
    N = _check_n(N)
    y = float(y)
    a, b = scaled.arrays(N + 1)
    if N == 0:
        return [ScaledReal.normalize(1.0)]

    def step(n, pm, pc):
        return 2.0 * (y - b[n]) * pc - 4.0 * a[n - 1] ** 2 * pm

    return _run(step, 1.0, 2.0 * (y - b[0]), N, keep=True)


def sturm_count(coeffs: RecurrenceCoefficients, N: int, x) -> np.ndarray:
    """Number of zeros of p_N strictly below each entry of x (LDL^T sign count)."""
    a, b = coeffs.arrays(N)
    return _sturm_counts(a[: N - 1] ** 2, b, np.atleast_1d(np.asarray(x, dtype=float)))


def _sturm_counts(a2: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    tiny = np.finfo(float).tiny ** 0.5
    d = b[0] - x
    d = np.where(d == 0.0, -tiny, d)
    count = (d < 0).astype(np.int64)
    for i in range(1, len(b)):
        d = (b[i] - x) - a2[i - 1] / d
        d = np.where(d == 0.0, -tiny, d)
        count += d < 0
    return count


def polynomial_zeros(coeffs: RecurrenceCoefficients, N: int) -> np.ndarray:
    """The N zeros of p_N in ascending order, by bisection on Sturm counts."""
    N = _check_n(N)
    if N < 1:
        raise ValueError("polynomial_zeros needs N >= 1")
    a, b = coeffs.arrays(N)
    off = a[: N - 1]
    rad = np.zeros(N)
    rad[:-1] += off
    rad[1:] += off
    lo0 = float(np.min(b - rad))
    hi0 = float(np.max(b + rad))
    scale = max(abs(lo0), abs(hi0), 1e-300)
    pad = 1e-12 * scale
    floor = 1e-15 * scale  # absolute resolution for zeros at or near the origin
    lo = np.full(N, lo0 - pad)
    hi = np.full(N, hi0 + pad)
    k = np.arange(N)
    a2 = off**2
    ulp = np.finfo(float).eps
    while True:
        width = hi - lo
        active = width > np.maximum(4 * ulp * np.maximum(np.abs(lo), np.abs(hi)), floor)
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        c = _sturm_counts(a2, b, mid[active])
        # eigenvalue k (0-based) lies below mid iff more than k eigenvalues do
        below = c > k[active]
        idx = np.nonzero(active)[0]
        hi[idx[below]] = mid[active][below]
        lo[idx[~below]] = mid[active][~below]
        if np.all(mid[active] == lo[active]) and np.all(mid[active] == hi[active]):
            break
    return 0.5 * (lo + hi)


def gauss_rule(coeffs: RecurrenceCoefficients, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes (zeros of p_N) and Christoffel weights 1/sum_{j<N} p_j(x)^2."""
    nodes = polynomial_zeros(coeffs, N)
    weights = np.empty(N)
    for i, x in enumerate(nodes):
        vals = eval_orthonormal(coeffs, N - 1, x)
        weights[i] = 1.0 / math.fsum(v.to_float() ** 2 for v in vals)
    return nodes, weights


def casorati(
    u: Sequence[ScaledReal],
    v: Sequence[ScaledReal],
    a1: Callable[[float, float], float],
    eps: float,
    n: int,
) -> ScaledReal:
    """a1(n eps, eps) * (u_n v_{n-1} - u_{n-1} v_n); constant in n for two solutions."""
    if n < 1:
        raise ValueError("casorati needs n >= 1")
    coef = ScaledReal.normalize(float(a1(n * eps, eps)))
    return coef * (u[n] * v[n - 1] - u[n - 1] * v[n])
