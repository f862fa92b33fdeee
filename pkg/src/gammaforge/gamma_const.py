"""Euler's constant: Brent-McMillan ratio engine, Glaisher zeta series, and
convergence-rate measurement.

The ratio U/V with

    U = sum_k H_k (x^k/k!)^n,    V = sum_k (x^k/k!)^n

approaches ln x + gamma with error O(exp(-c_n x)).  Both sums have positive
terms, so only a handful of guard digits are needed.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from . import numkernel as nk
from .errors import DegenerateFitError, DomainError
from .numkernel import BigReal, big

LN10 = math.log(10)


def c_n(n) -> float:
    """Exponential convergence constant of the n-th ratio."""
    if n == 1:
        return 1.0
    if n < 1:
        raise DomainError("n must be >= 1")
    return 2 * n * math.sin(math.pi / n) ** 2


def c_n_big(n: int, precision: int) -> BigReal:
    if n == 1:
        return BigReal(1, precision)
    s = nk.sin(nk.const_pi(precision) / n)
    return s * s * (2 * n)


@dataclass(frozen=True)
class BMPlan:
    n: int
    target_digits: int
    x: int
    working_digits: int
    truncation_k: int

    def __post_init__(self):
        if self.n < 1 or self.target_digits < 1:
            raise ValueError("n and target_digits must be >= 1")

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "target_digits": self.target_digits,
            "x": self.x,
            "working_digits": self.working_digits,
            "truncation_k": self.truncation_k,
        }


def _estimate_truncation(n: int, x: float, digits: int) -> int:
    # first k > x where (x^k/k!)^n has dropped 10**-digits below its peak
    peak = n * (x * math.log(x) - math.lgamma(x + 1)) if x > 1 else 0.0
    floor = peak - digits * LN10
    k = max(int(x), 1)
    cap = max(int(math.ceil(8 * x)), 50)
    while k < cap and n * (k * math.log(max(x, 1e-300)) - math.lgamma(k + 1)) > floor:
        k += 1
    return k


def plan_brent_mcmillan(n: int, target_digits: int) -> BMPlan:
    """x = ceil(1.05 * target * ln 10 / c_n) + 5; guard 10 + ceil(log10 x)."""
    if n < 1 or target_digits < 1:
        raise DomainError("n and target_digits must be >= 1")
    x = int(math.ceil(target_digits * LN10 / c_n(n) * 1.05)) + 5
    working = target_digits + 10 + int(math.ceil(math.log10(x)))
    k = _estimate_truncation(n, x, working)
    return BMPlan(n, target_digits, x, working, max(k, x))


def brent_mcmillan_ratio(n: int, x, digits: int) -> Tuple[BigReal, int]:
    """U(x)/V(x) at ``digits`` working digits; returns (ratio, terms summed)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    xb = big(x, digits)
    if xb <= 0:
        raise DomainError("x must be positive")
    xf = float(xb)
    step = nk.pow_int(xb, n) if not isinstance(x, int) else None
    xn = x**n if isinstance(x, int) else None
    threshold = nk.eps(digits)
    cap = max(int(math.ceil(8 * xf)), 50)
    t = BigReal(1, digits)
    H = BigReal(0, digits)
    U = BigReal(0, digits)
    V = BigReal(1, digits)
    k = 0
    while k < cap:
        k += 1
        if xn is not None:
            t = t * xn / k**n
        else:
            t = t * step / k**n
        H = H + Fraction(1, k)
        U = U + H * t
        V = V + t
        if k > xf and t < V * threshold:
            break
    return U / V, k


def gamma_brent_mcmillan(n: int, target_digits: int) -> Tuple[BigReal, BMPlan]:
    """gamma = U/V - ln x at the planned x; returns (gamma, plan actually used)."""
    plan = plan_brent_mcmillan(n, target_digits)
    W = plan.working_digits
    ratio, k = brent_mcmillan_ratio(n, plan.x, W)
    g = ratio - nk.ln(BigReal(plan.x, W))
    return g.with_precision(W), replace(plan, truncation_k=k)


@lru_cache(maxsize=64)
def euler_gamma(digits: int) -> BigReal:
    """gamma to ``digits`` digits via the n = 2 ratio; cached."""
    g, _ = gamma_brent_mcmillan(2, digits)
    return g.with_precision(digits)


# ---------------------------------------------------------------------------
# Glaisher's zeta series
# ---------------------------------------------------------------------------


def glaisher_partial_sum(K: int, digits: int) -> BigReal:
    """1 - sum_{k=1}^{K} zeta(2k+1)/((k+1)(2k+1)) in its literal, slowly
    converging form (tail after K terms is below 1.21/(2K))."""
    from .special import zeta_int

    W = digits + 5
    total = BigReal(1, W)
    for k in range(1, K + 1):
        total = total - zeta_int(2 * k + 1, W) / ((k + 1) * (2 * k + 1))
    return total.with_precision(digits)


def glaisher_terms_needed(digits: int) -> int:
    # tail < sum_{k>K} 4^{-k} <= 4^{-K}/3, using zeta(2k+1) - 1 < 2^{-2k}
    K = 1
    while -K * math.log(4) - math.log(3) > -digits * LN10:
        K += 1
    return K


def gamma_glaisher(target_digits: int) -> BigReal:
    """gamma = 1 - sum zeta(2k+1)/((k+1)(2k+1)).

    The constant part of each zeta value is summed in closed form
    (sum 1/((k+1)(2k+1)) = 2 ln 2 - 1), leaving the geometrically convergent
    sum of (zeta(2k+1) - 1)/((k+1)(2k+1)).
    """
    from .special import zeta_int

    if target_digits < 1:
        raise DomainError("target_digits must be >= 1")
    K = glaisher_terms_needed(target_digits + 10)
    W = target_digits + 10 + int(math.ceil(math.log10(K + 1)))
    total = BigReal(2, W) - nk.const_ln2(W) * 2
    for k in range(1, K + 1):
        total = total - (zeta_int(2 * k + 1, W) - 1) / ((k + 1) * (2 * k + 1))
    return total.with_precision(target_digits + 10)


# ---------------------------------------------------------------------------
# Convergence-rate measurement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateFit:
    n: int
    samples: List[Tuple[float, float]]
    fitted_slope: float
    expected: float

    def __post_init__(self):
        xs = [s[0] for s in self.samples]
        if len(xs) < 6 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("need >= 6 samples strictly increasing in x")

    @property
    def relative_deviation(self) -> float:
        return abs(self.fitted_slope - self.expected) / abs(self.expected)

    def within(self, tolerance: float = 0.05) -> bool:
        return self.relative_deviation <= tolerance


def fit_convergence_rate(
    n: int, x_values: Sequence, precision: Optional[int] = None
) -> RateFit:
    """Least-squares slope of ln|U/V - ln x - gamma| against x."""
    xs = sorted(float(v) for v in x_values)
    if len(xs) < 6:
        raise ValueError("need at least 6 x values")
    if any(v < 5 for v in xs) or any(b - a < 2 for a, b in zip(xs, xs[1:])):
        raise ValueError("x values must be >= 5 and spaced >= 2 apart")
    cn = c_n(n)
    if precision is None:
        precision = int(math.ceil(cn * xs[-1] / LN10)) + 20
    ref = euler_gamma(precision + 10)
    samples = []
    for raw in sorted(x_values, key=float):
        ratio, _ = brent_mcmillan_ratio(n, raw, precision)
        err = ratio - nk.ln(big(raw, precision)) - ref
        if err.is_zero() or err.log10_abs() < -(precision - 5):
            raise DegenerateFitError(
                f"error at x={raw} is below working precision; raise precision"
            )
        samples.append((float(raw), float(nk.ln(abs(err)))))
    slope, _ = statistics.linear_regression([s[0] for s in samples], [s[1] for s in samples])
    return RateFit(n, samples, slope, -cn)
