"""Supporting special functions on the positive real axis.

Gamma, harmonic numbers, Pochhammer symbols, the Gauss hypergeometric
series, the exponential integral E1 and zeta at integer arguments.  All
routines take a target precision in decimal digits and work internally with
guard digits on top of it.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import numkernel as nk
from .errors import DomainError, NonConvergenceError, PoleError
from .numkernel import BigReal, SeriesResult, big

GUARD = 10
LN10 = math.log(10)

# ---------------------------------------------------------------------------
# Bernoulli numbers (tangent-number recurrence, exact integers)
# ---------------------------------------------------------------------------

_bern_lock = threading.Lock()
_bern_even: tuple = (Fraction(1),)  # B_0, B_2, B_4, ...


def _tangent_numbers(n):
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def bernoulli_even(j: int) -> Fraction:
    """B_{2j} as an exact fraction."""
    global _bern_even
    if j < len(_bern_even):
        return _bern_even[j]
    with _bern_lock:
        if j >= len(_bern_even):
            n = max(j, 2 * (len(_bern_even) - 1), 16)
            t = _tangent_numbers(n)
            vals = [Fraction(1)]
            for k in range(1, n + 1):
                four = 4**k
                vals.append(Fraction((-1) ** (k - 1) * 2 * k * t[k], four * (four - 1)))
            _bern_even = tuple(vals)
    return _bern_even[j]


def _log_abs_bernoulli_even(j: int) -> float:
    # |B_2j| = 2 (2j)! zeta(2j) / (2 pi)^{2j},  zeta(2j) <= 1.65
    return math.log(2 * 1.65) + math.lgamma(2 * j + 1) - 2 * j * math.log(2 * math.pi)


# ---------------------------------------------------------------------------
# Harmonic numbers, Pochhammer symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HarmonicNumber:
    k: int
    value: BigReal


@dataclass(frozen=True)
class Pochhammer:
    a: BigReal
    k: int
    value: BigReal


def _harmonic_split(a, b):
    """sum_{j=a}^{b-1} 1/j as an unreduced (p, q)."""
    if b - a == 1:
        return 1, a
    m = (a + b) // 2
    p1, q1 = _harmonic_split(a, m)
    p2, q2 = _harmonic_split(m, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic_fraction(k: int) -> Fraction:
    if k < 0:
        raise DomainError("harmonic index must be >= 0")
    if k == 0:
        return Fraction(0)
    p, q = _harmonic_split(1, k + 1)
    return Fraction(p, q)


def harmonic(k: int, precision: int) -> BigReal:
    """H_k = 1 + 1/2 + ... + 1/k, exact rational accumulation then one rounding."""
    if k < 0:
        raise DomainError("harmonic index must be >= 0")
    if k == 0:
        return BigReal(0, precision)
    p, q = _harmonic_split(1, k + 1)
    return BigReal(Fraction(p, q), precision)


def pochhammer(a, k: int, precision: int) -> BigReal:
    if k < 0:
        raise DomainError("Pochhammer index must be >= 0")
    a = big(a, precision + GUARD)
    acc = BigReal(1, precision + GUARD)
    for j in range(k):
        acc = acc * (a + j)
    return acc.with_precision(precision)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------


def _stirling_terms(z: float, digits: int):
    """Number of Stirling correction terms m with first-omitted bound < 10**-digits."""
    target = -digits * LN10
    logz = math.log(z)
    prev = math.inf
    for m in range(0, 4000):
        j = m + 1
        lb = _log_abs_bernoulli_even(j) - math.log(2 * j * (2 * j - 1)) - (2 * j - 1) * logz
        if lb < target:
            return m
        if lb > prev:
            return None
        prev = lb
    return None


def loggamma_stirling(z: BigReal, digits: int):
    """ln Gamma(z) for z large enough; returns (value, remainder bound).

    The remainder of the Stirling series for real z > 0 is smaller in magnitude
    than the first omitted term, which is what the bound reports.
    """
    W = digits
    m = _stirling_terms(float(z), W)
    if m is None:
        raise NonConvergenceError("Stirling series cannot reach requested accuracy at this z")
    z = big(z, W)
    half_ln_2pi = nk.ln(nk.const_pi(W) * 2) / 2
    val = (z - Fraction(1, 2)) * nk.ln(z) - z + half_ln_2pi
    zsq = z * z
    zpow = z
    for j in range(1, m + 1):
        val = val + BigReal(bernoulli_even(j) / (2 * j * (2 * j - 1)), W) / zpow
        zpow = zpow * zsq
    j = m + 1
    bound = BigReal(abs(bernoulli_even(j)) / (2 * j * (2 * j - 1)), W) / zpow
    return val, bound


def gamma_fn(x, precision: int) -> BigReal:
    """Gamma(x) for x > 0: upward shift to z >= 0.5*W + 5, Stirling series with
    an explicit remainder bound, then division by the shift product."""
    W = precision + GUARD
    x = big(x, W)
    if x <= 0:
        raise DomainError("gamma_fn requires x > 0")
    zmin = 0.5 * W + 5
    shift = max(0, int(math.ceil(zmin - float(x))))
    prod = BigReal(1, W)
    for j in range(shift):
        prod = prod * (x + j)
    lg, bound = loggamma_stirling(x + shift, W)
    if bound > nk.eps(W):
        raise NonConvergenceError("gamma remainder bound too large")
    return (nk.exp(lg) / prod).with_precision(precision)


# ---------------------------------------------------------------------------
# Gauss hypergeometric series
# ---------------------------------------------------------------------------


def hyp2f1(a, b, c, z, precision: int) -> SeriesResult:
    """F(a, b; c; z) by direct summation for |z| < 1.

    Stops after three consecutive negligible terms; the error bound is a
    geometric tail estimate from the current term ratio.
    """
    W = precision + GUARD
    a, b, c, z = (big(v, W) for v in (a, b, c, z))
    if abs(z) >= 1:
        raise NonConvergenceError("hyp2f1 series requires |z| < 1")
    cf = c.to_fraction()
    if cf <= 0 and cf.denominator == 1:
        raise PoleError("c is a non-positive integer")
    term = BigReal(1, W)
    total = BigReal(1, W)
    small = 0
    k = 0
    cap = 100000
    ratio = abs(z)
    while small < 3:
        num = (a + k) * (b + k)
        den = (c + k) * (k + 1)
        step = num / den * z
        term = term * step
        k += 1
        total = total + term
        ratio = abs(step)
        if term.is_zero() or nk.negligible(term, total, W):
            small += 1
        else:
            small = 0
        if k > cap:
            raise NonConvergenceError("hyp2f1 did not converge")
    r = max(ratio, abs(z))
    if r < 1:
        tail = abs(term) * r / (1 - r)
    else:
        tail = abs(term)
    err = tail + abs(total) * nk.eps(W - 1) * k
    return SeriesResult(total.with_precision(precision), k, err.with_precision(6))


# ---------------------------------------------------------------------------
# Exponential integral
# ---------------------------------------------------------------------------


def e1_crossover(working_digits: int) -> float:
    return 0.7 * working_digits


def _e1_series(x: BigReal, W: int) -> BigReal:
    from .gamma_const import euler_gamma

    guard = int(math.ceil(float(x) * nk.LOG10_E)) + 2
    P = W + guard
    x = big(x, P)
    total = BigReal(0, P)
    t = BigReal(1, P)
    k = 0
    small = 0
    while small < 3:
        k += 1
        t = t * x / k
        term = t / k
        total = total + term if k % 2 == 1 else total - term
        if k > float(x) and nk.negligible(term, total, P):
            small += 1
        else:
            small = 0
    return (total - euler_gamma(P) - nk.ln(x)).with_precision(W)


def _e1_continued_fraction(x: BigReal, W: int) -> BigReal:
    # E1(x) = e^{-x} / (x+1 - 1^2/(x+3 - 2^2/(x+5 - ...)))   (modified Lentz)
    P = W + 5
    x = big(x, P)
    tiny = nk.eps(10 * P, P)
    threshold = nk.eps(P, P)
    f = x + 1
    C = f
    D = BigReal(0, P)
    for k in range(1, 200000):
        ak = -(k * k)
        bk = x + (2 * k + 1)
        D = bk + D * ak
        if abs(D) < tiny:
            D = tiny
        D = 1 / D
        C = bk + ak / C
        if abs(C) < tiny:
            C = tiny
        delta = C * D
        f = f * delta
        if abs(delta - 1) < threshold:
            return (nk.exp(-x) / f).with_precision(W)
    raise NonConvergenceError("E1 continued fraction did not converge")


def exp_integral_E1(x, precision: int) -> BigReal:
    """E1(x) = int_x^oo e^{-t}/t dt for x > 0."""
    W = precision + GUARD
    x = big(x, W)
    if x <= 0:
        raise DomainError("E1 requires x > 0")
    if float(x) <= e1_crossover(W):
        return _e1_series(x, W).with_precision(precision)
    return _e1_continued_fraction(x, W).with_precision(precision)


# ---------------------------------------------------------------------------
# Zeta at integers
# ---------------------------------------------------------------------------


def _zeta_log_first_omitted(s: int, N: int, m: int) -> float:
    j = m + 1
    return (
        _log_abs_bernoulli_even(j)
        - math.lgamma(2 * j + 1)
        + math.lgamma(s + 2 * j - 1)
        - math.lgamma(s)
        - (s + 2 * j - 1) * math.log(N)
    )


def zeta_plan(s: int, digits: int):
    """(N, m): direct terms and Euler-Maclaurin correction order, cheapest pair
    whose first omitted correction clears 10**-digits."""
    target = -digits * LN10
    best = None
    N = 1
    while True:
        prev = math.inf
        for m in range(0, 3000):
            lb = _zeta_log_first_omitted(s, N, m)
            if lb < target:
                cost = N + 2 * m
                if best is None or cost < best[0]:
                    best = (cost, N, m)
                break
            if lb > prev:
                break
            prev = lb
        if best is not None and N > best[0]:
            break
        N = N + 1 if N < 16 else int(N * 1.15) + 1
    return best[1], best[2]


def zeta_int(s: int, precision: int) -> BigReal:
    """zeta(s) for integer s >= 2: N-1 direct terms plus Euler-Maclaurin tail."""
    return zeta_int_with_bound(s, precision)[0]


def zeta_int_with_bound(s: int, precision: int):
    if s < 2:
        raise DomainError("zeta_int requires s >= 2")
    W = precision + GUARD
    N, m = zeta_plan(s, W)
    total = BigReal(0, W)
    for n in range(1, N):
        total = total + nk.pow_int(BigReal(n, W), -s)
    Nb = BigReal(N, W)
    n_pow = nk.pow_int(Nb, -s)  # N^{-s}
    total = total + n_pow * N / (s - 1) + n_pow / 2
    # j-th correction: B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
    inv_n2 = 1 / (Nb * Nb)
    factor = n_pow * s / N  # (s)_1 N^{-s-1}
    for j in range(1, m + 2):
        coeff = BigReal(bernoulli_even(j) / math.factorial(2 * j), W)
        term = coeff * factor
        if j == m + 1:
            bound = abs(term)
            break
        total = total + term
        factor = factor * ((s + 2 * j - 1) * (s + 2 * j)) * inv_n2
    return total.with_precision(precision), bound.with_precision(6)
