"""J0 and J1 on the positive real axis.

Power series for small and moderate x (with guard digits for the alternating
cancellation), Hankel's asymptotic expansion at optimal truncation for large
x, and a dispatcher that takes Hankel whenever its estimate clears the target
by two digits.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from . import numkernel as nk
from .errors import DomainError, InsufficientAccuracyError
from .numkernel import BigReal, SeriesResult, big

GUARD = 10


@dataclass(frozen=True)
class ExpansionEvaluation:
    value: BigReal
    terms_used: int
    smallest_term_magnitude: BigReal
    error_estimate: BigReal


def series_guard_digits(x: float) -> int:
    return int(math.ceil(2 * x * nk.LOG10_E)) + GUARD


def _bessel_series(order: int, x, precision: int) -> SeriesResult:
    x = big(x, precision + GUARD)
    if x < 0:
        raise DomainError("x must be >= 0")
    xf = float(x)
    W = precision + series_guard_digits(xf)
    # fixed-point summation with B fractional bits: each operation costs one
    # unit of 2**-B absolutely, whatever the size of the intermediate terms
    B = nk.bits_for(W)
    xq = x.with_precision(W).to_fixed(B)
    q = (xq * xq) >> (B + 2)  # (x/2)^2
    term = (xq >> 1) if order == 1 else (1 << B)
    total = term
    peak = abs(term)
    stop_bits = int(math.ceil((precision + GUARD) * nk.LOG2_10))
    floor_abs = 1 << max(B - stop_bits, 0)
    k = 0
    small = 0
    while small < 3:
        k += 1
        mag = (abs(term) * q >> B) // (k * (k + order))
        term = -mag if term > 0 else mag
        total += term
        if mag > peak:
            peak = mag
        if k > xf / 2:
            a = abs(total)
            if (mag < floor_abs) if a < floor_abs else ((mag << stop_bits) < a):
                small += 1
                continue
        small = 0
    omitted = (abs(term) * q >> B) // ((k + 1) * (k + 1 + order)) + 1
    value = BigReal.from_fixed(total, B, precision)
    err = BigReal.from_fixed(omitted + 2 * (k + 1), B, 6) + abs(value) * nk.eps(precision)
    return SeriesResult(value, k + 1, err.with_precision(6))


def bessel_j0_series(x, precision: int) -> SeriesResult:
    """sum_k (-1)^k (x/2)^{2k} / (k!)^2 with ceil(2x log10 e) + 10 guard digits."""
    return _bessel_series(0, x, precision)


def bessel_j1_series(x, precision: int) -> SeriesResult:
    return _bessel_series(1, x, precision)


# ---------------------------------------------------------------------------
# Hankel expansion
# ---------------------------------------------------------------------------

_coef_lock = threading.Lock()
_hankel_coefs = {0: [Fraction(1)], 1: [Fraction(1)]}


def hankel_coefficients(order: int, count: int) -> List[Fraction]:
    """a_k(nu) = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k), k < count."""
    if order not in (0, 1):
        raise DomainError("only orders 0 and 1 are supported")
    coefs = _hankel_coefs[order]
    if len(coefs) < count:
        with _coef_lock:
            coefs = list(_hankel_coefs[order])
            mu = 4 * order * order
            while len(coefs) < count:
                k = len(coefs)
                coefs.append(coefs[-1] * Fraction(mu - (2 * k - 1) ** 2, 8 * k))
            _hankel_coefs[order] = coefs
    return coefs[:count]


def _log_hankel_terms(order: int, x: float, limit: int = 100000):
    """Yield log|a_k| - k log x for k = 0, 1, ... ."""
    mu = 4 * order * order
    lx = math.log(x)
    acc = 0.0
    yield acc
    for k in range(1, limit):
        f = abs(mu - (2 * k - 1) ** 2)
        if f == 0:
            return
        acc += math.log(f / (8 * k)) - lx
        yield acc


def hankel_truncation(order: int, x: float, digits: int):
    """(K, log first-omitted magnitude): stop at the smallest term or once a
    term drops below 10**-digits, whichever comes first."""
    target = -digits * math.log(10)
    prev = None
    for k, lm in enumerate(_log_hankel_terms(order, x)):
        if lm < target:
            return k, lm
        if prev is not None and lm > prev:
            return k - 1, prev
        prev = lm
    return k, prev


def hankel_error_log10(order: int, x: float, digits: int) -> float:
    """log10 of the error estimate bessel_hankel would report."""
    K, lm = hankel_truncation(order, x, digits)
    nxt = lm + math.log(abs(4 * order * order - (2 * K + 1) ** 2) / (8 * (K + 1)) / x)
    hi, lo = max(lm, nxt), min(lm, nxt)
    log_est = math.log(2 * math.sqrt(2 / (math.pi * x))) + hi + math.log1p(math.exp(lo - hi))
    return log_est / math.log(10)


def bessel_hankel(order: int, x, precision: int, strict: bool = True) -> ExpansionEvaluation:
    """Hankel expansion sqrt(2/(pi x)) (P cos w - Q sin w), w = x - (2 order + 1) pi/4.

    The error estimate is twice the first omitted P and Q magnitudes times the
    prefactor (a heuristic safety factor).  With ``strict`` an estimate above
    10**-precision raises InsufficientAccuracyError.
    """
    if order not in (0, 1):
        raise DomainError("only orders 0 and 1 are supported")
    W = precision + GUARD
    x = big(x, W)
    if x <= 0:
        raise DomainError("x must be positive")
    xf = float(x)
    K, _ = hankel_truncation(order, xf, W)
    # fixed point: t_k = t_{k-1} * (4nu^2 - (2k-1)^2) / (8k x), the exact
    # rational ratio of consecutive a_k / x^k, so |t_k| stays <= 1 up to K
    B = nk.bits_for(W)
    invx = (1 << (2 * B)) // x.to_fixed(B)
    mu = 4 * order * order
    t = 1 << B
    P = t
    Q = 0
    mags = [t]
    for k in range(1, K + 2):
        t = (t * (mu - (2 * k - 1) ** 2) * invx >> B) // (8 * k)
        mags.append(abs(t))
        if k < K:
            # (-1)^j a_{2j} / x^{2j} into P, (-1)^j a_{2j+1} / x^{2j+1} into Q
            sgn = -1 if (k // 2) % 2 else 1
            if k % 2 == 0:
                P += sgn * t
            else:
                Q += sgn * t
    Pb = BigReal.from_fixed(P, B, W)
    Qb = BigReal.from_fixed(Q, B, W)
    pi = nk.const_pi(W)
    w = x - pi * (2 * order + 1) / 4
    pref = nk.sqrt(2 / (pi * x))
    value = pref * (Pb * nk.cos(w) - Qb * nk.sin(w))
    smallest = pref * BigReal.from_fixed(mags[K], B, W)
    est = pref * BigReal.from_fixed(mags[K] + mags[K + 1] + 2 * K + 2, B, W) * 2 + nk.eps(W - 1)
    if strict and est > nk.eps(precision):
        raise InsufficientAccuracyError(
            f"Hankel expansion at x={xf:g} reaches only ~{est.sig(3)}", estimate=est
        )
    est = est + abs(value) * nk.eps(precision)
    return ExpansionEvaluation(
        value.with_precision(precision), K, smallest.with_precision(6), est.with_precision(6)
    )


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def j0_route(x, precision: int, order: int = 0) -> str:
    """'hankel' iff its optimal-truncation error estimate < 10**-(precision+2)."""
    xf = float(x)
    if xf <= 0:
        return "series"
    if hankel_error_log10(order, xf, precision + GUARD) < -(precision + 2):
        return "hankel"
    return "series"


def bessel_j0_auto(x, precision: int) -> BigReal:
    if float(x) == 0:
        return BigReal(1, precision)
    if j0_route(x, precision) == "hankel":
        return bessel_hankel(0, x, precision, strict=False).value
    return bessel_j0_series(x, precision).value


def bessel_j1_auto(x, precision: int) -> BigReal:
    if float(x) == 0:
        return BigReal(0, precision)
    if j0_route(x, precision, order=1) == "hankel":
        return bessel_hankel(1, x, precision, strict=False).value
    return bessel_j1_series(x, precision).value
