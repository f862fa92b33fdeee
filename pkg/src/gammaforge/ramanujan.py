"""The alternating series S_n(x), its error term e_n(x) = S_n(x) - ln x - gamma,
and three independent ways of computing e(x) = e_2(x):

* ``direct-series``: sum S_2(x) with enough guard digits to absorb the
  cancellation, then subtract ln x + gamma;
* ``bessel-integral``: the tail integral of J0(t)/t from 2x;
* ``asymptotic-expansion``: two factorial-coefficient series multiplying
  J0'(2x) and J0(2x), truncated optimally with a rigorous remainder bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from . import numkernel as nk
from .bessel import ExpansionEvaluation, bessel_hankel
from .errors import DomainError, InsufficientAccuracyError
from .gamma_const import euler_gamma
from .numkernel import BigReal, SeriesResult, big

GUARD = 10
ROUTES = ("direct-series", "bessel-integral", "asymptotic-expansion")
SCAN_POINTS_PER_UNIT = 20


def _is_int(n) -> bool:
    return isinstance(n, int) or (isinstance(n, Fraction) and n.denominator == 1)


@dataclass(frozen=True)
class RamanujanSeriesSpec:
    """Parameters of S_n(x).  Non-integral n > 0 is accepted experimentally."""

    n: Union[int, Fraction]
    x: BigReal
    target_digits: int

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, Fraction)):
            raise DomainError("n must be an int or Fraction")
        if n <= 0 or (_is_int(n) and n < 1):
            raise DomainError("n must be positive")
        if not isinstance(self.x, BigReal):
            object.__setattr__(self, "x", big(self.x, self.target_digits + GUARD))
        if self.x <= 0:
            raise DomainError("x must be positive")
        if self.target_digits < 1:
            raise DomainError("target_digits must be >= 1")

    @classmethod
    def make(cls, n, x, target_digits: int) -> "RamanujanSeriesSpec":
        if isinstance(n, float):
            n = Fraction(n).limit_denominator(10**6)
        if isinstance(n, str):
            n = Fraction(n)
        if isinstance(n, Fraction) and n.denominator == 1:
            n = int(n)
        return cls(n, big(x, target_digits + GUARD), target_digits)


def series_guard_digits(n, x: float) -> int:
    return int(math.ceil(float(n) * x * nk.LOG10_E)) + GUARD


def _log10_peak_term(n, x: float) -> float:
    # max_k of log10 |(x^k/k!)^n / (n k)|, over the integers near x
    nf = float(n)
    best = -math.inf
    for k in range(max(1, int(x) - 1), int(x) + 3):
        v = nf * (k * math.log(x) - math.lgamma(k + 1)) - math.log(nf * k)
        best = max(best, v)
    return best / math.log(10)


def series_S_n(spec: RamanujanSeriesSpec, guard_digits: Optional[int] = None) -> SeriesResult:
    """sum_{k>=1} (-1)^{k-1}/(n k) (x^k/k!)^n.

    Terms grow to about e^{nx} before decaying, so the default guard is
    ceil(n x log10 e) + 10 digits.  Summation stops after three consecutive
    negligible terms past k = x (hard cap ceil(8 max(x, 1)) + 50).
    """
    n, x, P = spec.n, spec.x, spec.target_digits
    xf = float(x)
    guard = series_guard_digits(n, xf) if guard_digits is None else int(guard_digits)
    W = P + guard
    x = x.with_precision(W)
    integral = _is_int(n)
    nn = int(n) if integral else big(n, W)
    u = BigReal(1, W)  # x^k / k!
    total = BigReal(0, W)
    peak = BigReal(0, W)
    cap = int(math.ceil(8 * max(xf, 1.0))) + 50
    stop = P + 5
    small = 0
    k = 0
    while k < cap:
        k += 1
        u = u * x / k
        mag = (nk.pow_int(u, nn) if integral else nk.power(u, nn)) / (nn * k)
        if mag > peak:
            peak = mag
        total = total + mag if k % 2 == 1 else total - mag
        if k > xf and nk.negligible(mag, total, stop):
            small += 1
            if small == 3:
                break
        else:
            small = 0
    u = u * x / (k + 1)
    omitted = (nk.pow_int(u, nn) if integral else nk.power(u, nn)) / (nn * (k + 1))
    err = abs(omitted) + peak * k * nk.eps(W - 1)
    return SeriesResult(total.with_precision(P + 2), k, err.with_precision(6))


def harmonic_exp_series(x, precision: int) -> BigReal:
    """e^{-x} sum_{k>=0} H_k x^k / k!; all terms positive, no cancellation."""
    W = precision + GUARD
    x = big(x, W)
    if x <= 0:
        raise DomainError("x must be positive")
    xf = float(x)
    t = BigReal(1, W)  # x^k / k!
    H = Fraction(0)
    total = BigReal(0, W)
    small = 0
    k = 0
    while small < 3:
        k += 1
        t = t * x / k
        H += Fraction(1, k)
        term = t * H
        total = total + term
        if k > xf and nk.negligible(term, total, W):
            small += 1
        else:
            small = 0
    return (nk.exp(-x) * total).with_precision(precision)


# ---------------------------------------------------------------------------
# Error term e(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorTermResult:
    x: BigReal
    route: str
    value: BigReal
    error_bound: BigReal
    cancellation_digits_lost: int
    terms: int = 0

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if self.cancellation_digits_lost < 0:
            raise ValueError("cancellation_digits_lost must be >= 0")


def e_n_direct(n, x, precision: int, guard_digits: Optional[int] = None) -> ErrorTermResult:
    """e_n(x) = S_n(x) - ln x - gamma with gamma at precision + 10 digits."""
    spec = RamanujanSeriesSpec.make(n, x, precision + 2)
    s = series_S_n(spec, guard_digits)
    W = precision + GUARD
    xb = spec.x.with_precision(W)
    val = s.value.with_precision(W) - nk.ln(xb) - euler_gamma(W)
    err = s.error_bound + nk.eps(W - 1)
    lost = nk.cancellation_digits(
        _log10_peak_term(spec.n, float(xb)),
        val.log10_abs() if not val.is_zero() else -precision,
    )
    return ErrorTermResult(xb, "direct-series", val.with_precision(precision), err, lost, s.terms)


def error_term_e(x, route: str, precision: int) -> ErrorTermResult:
    """e(x) = S_2(x) - ln x - gamma by the chosen route."""
    from .quad import bessel_tail_over_t

    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    xb = big(x, precision + GUARD)
    if xb <= 0:
        raise DomainError("x must be positive")
    if route == "direct-series":
        return e_n_direct(2, xb, precision)
    if route == "bessel-integral":
        r = bessel_tail_over_t(xb * 2, 1, precision)
        terms = r.panel.evaluations if r.panel is not None else 0
        return ErrorTermResult(xb, route, r.value.with_precision(precision), r.error, 0, terms)
    ev = error_term_expansion(xb, "auto", precision, strict=True)
    return ErrorTermResult(xb, route, ev.value, ev.error_estimate, 0, ev.terms_used)


def expansion_coefficients(count: int) -> Tuple[List[int], List[int]]:
    """((-1)^k k!k!, (-1)^k k!(k+1)!) for k < count, by integer recurrence."""
    a, b = [1], [1]
    for k in range(1, count):
        a.append(-a[-1] * k * k)
        b.append(-b[-1] * k * (k + 1))
    return a[:count], b[:count]


def _log_expansion_remainder(x: float, m: int) -> float:
    # remainder after m steps of integration by parts on int_{2x} J0(t)/t dt,
    # using |J0(t)| <= sqrt(2/(pi t)):  (m!)^2 x^{-2m} / (sqrt(pi x) (2m + 1/2))
    return (
        2 * math.lgamma(m + 1)
        - 2 * m * math.log(x)
        - 0.5 * math.log(math.pi * x)
        - math.log(2 * m + 0.5)
    )


def expansion_truncation(x: float, digits: int) -> Tuple[int, float]:
    """(m, log remainder): first m meeting 10**-digits, else the minimizer."""
    target = -digits * math.log(10)
    prev = math.inf
    m = 0
    while True:
        lb = _log_expansion_remainder(x, m)
        if lb < target:
            return m, lb
        if lb > prev:
            return m - 1, prev
        prev = lb
        m += 1


def error_term_expansion(x, terms="auto", precision: int = 30, strict: bool = True) -> ExpansionEvaluation:
    """e(x) ~ (J0'(2x)/(2x)) sum (-1)^k k!k!/x^{2k} + (J0(2x)/(2x^2)) sum (-1)^k k!(k+1)!/x^{2k}.

    The remainder bound after m terms of each series is the integration-by-parts
    bound above; Hankel error estimates for J0(2x) and J1(2x) are added on.
    """
    W = precision + GUARD
    xb = big(x, W)
    if xb <= 0:
        raise DomainError("x must be positive")
    xf = float(xb)
    if terms == "auto":
        m, lb = expansion_truncation(xf, precision + 2)
    else:
        m = int(terms)
        if m < 1:
            raise DomainError("terms must be >= 1")
        lb = _log_expansion_remainder(xf, m)
    A, B = expansion_coefficients(m + 1)
    inv_x2 = 1 / (xb * xb)
    pw = BigReal(1, W)
    sa = BigReal(0, W)
    sb = BigReal(0, W)
    for k in range(m):
        sa = sa + pw * A[k]
        sb = sb + pw * B[k]
        pw = pw * inv_x2
    smallest = abs(pw * A[m])
    two_x = xb * 2
    j0 = bessel_hankel(0, two_x, precision + 2, strict=False)
    j1 = bessel_hankel(1, two_x, precision + 2, strict=False)
    value = -j1.value * sa / two_x + j0.value * sb / (two_x * xb)
    err = (
        nk.from_log(lb)
        + j1.error_estimate * abs(sa) / two_x
        + j0.error_estimate * abs(sb) / (two_x * xb)
        + nk.eps(W - 2)
    )
    if strict and err > nk.eps(precision):
        raise InsufficientAccuracyError(
            f"asymptotic expansion at x={xf:g} reaches only ~{err.sig(3)}", estimate=err
        )
    return ExpansionEvaluation(
        value.with_precision(precision), m, smallest.with_precision(6), err.with_precision(6)
    )


def corollary_residual(x, precision: int = 30, route: str = "bessel-integral") -> BigReal:
    """R(x) = e(x) 2 sqrt(pi) x^{3/2} - cos(2x + pi/4) - 13 sin(2x + pi/4)/(16x)."""
    W = precision + GUARD
    xb = big(x, W)
    e = error_term_e(xb, route, precision).value.with_precision(W)
    pi = nk.const_pi(W)
    phase = xb * 2 + pi / 4
    lead = e * 2 * nk.sqrt(pi) * xb * nk.sqrt(xb)
    return (lead - nk.cos(phase) - nk.sin(phase) * Fraction(13, 16) / xb).with_precision(precision)


# ---------------------------------------------------------------------------
# Sign-change scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignChangeScan:
    n: Union[int, Fraction]
    x_max: BigReal
    grid: int
    brackets: List[Tuple[BigReal, BigReal]]
    max_abs: BigReal
    argmax: BigReal


def _scan_point(args):
    n, x, precision = args
    return e_n_direct(n, x, precision)


def sign_change_scan(
    n, x_max, grid: Optional[int] = None, precision: int = 20, workers: int = 1
) -> SignChangeScan:
    """Evaluate e_n on x_max * i / grid, i = 1..grid, and bracket sign changes.

    Meant for n >= 3 (and n = 2 as a control); guard digits scale with n x
    through series_S_n.  The default grid has 20 points per unit of x.
    """
    if isinstance(n, float):
        n = Fraction(n).limit_denominator(10**6)
    if n <= 0:
        raise DomainError("n must be positive")
    xm = big(x_max, precision + GUARD)
    if xm <= 0:
        raise DomainError("x_max must be positive")
    if grid is None:
        grid = max(1, int(math.ceil(SCAN_POINTS_PER_UNIT * float(xm))))
    if grid < 1:
        raise DomainError("grid must be >= 1")
    xs = [xm * i / grid for i in range(1, grid + 1)]
    jobs = [(n, x, precision) for x in xs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            vals = list(ex.map(_scan_point, jobs, chunksize=8))
    else:
        vals = [_scan_point(j) for j in jobs]
    brackets = []
    for (a, ra), (b, rb) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        if ra.value.sign() * rb.value.sign() < 0:
            brackets.append((a, b))
    best = max(range(grid), key=lambda i: abs(vals[i].value))
    return SignChangeScan(n, xm, grid, brackets, abs(vals[best].value), xs[best])


def refine_sign_change(fn, a, b, tol: float = 1e-6, max_iter: int = 200) -> BigReal:
    """Bisect a bracket [a, b] of a sign change of ``fn`` (BigReal -> BigReal)."""
    fa = fn(a).sign()
    fb = fn(b).sign()
    if fa * fb > 0:
        raise DomainError("no sign change in bracket")
    for _ in range(max_iter):
        if float(b - a) <= tol:
            break
        mid = (a + b) / 2
        fm = fn(mid).sign()
        if fm == 0:
            return mid
        if fm == fa:
            a = mid
        else:
            b = mid
    return (a + b) / 2
