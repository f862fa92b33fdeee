"""High-precision quadrature for the Bessel integrals.

Finite intervals use tanh-sinh quadrature with step halving until two levels
agree.  Semi-infinite Bessel integrals are split at a cutoff T: the finite
part is integrated in panels, the oscillatory tail is closed by repeated
integration by parts against Bessel's equation,

    I(p) = int_T^oo J0(t) t^-p dt
         = T^-p J0'(T) + (p+1) T^-(p+1) J0(T) - (p+1)^2 I(p+2),

with the final I(p+2m) bounded through |J0(t)| <= sqrt(2/(pi t)).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Tuple, Union

from . import numkernel as nk
from .bessel import bessel_j0_auto, bessel_j1_auto
from .errors import DomainError, InsufficientAccuracyError, NonConvergenceError
from .numkernel import BigReal, big
from .reports import VerificationReport
from .special import exp_integral_E1, gamma_fn, hyp2f1

GUARD = 10
LN10 = math.log(10)
# nodes are generated out to this t; |1 - x| there is ~ 10**-748
_T_CAP = 7.0


@dataclass(frozen=True)
class Integrand:
    """An integrand plus what the engine needs to know about it.

    ``fn`` receives a BigReal whose precision is the digits it must deliver.
    ``endpoint_exponent`` is mu when the integrand behaves like (t-a)^(mu-1)
    at an endpoint; it controls how far the tanh-sinh nodes reach.
    """

    fn: Callable[[BigReal], BigReal]
    extra_digits: int = 0
    endpoint_exponent: float = 1.0

    def __call__(self, t: BigReal) -> BigReal:
        return self.fn(t)


@dataclass(frozen=True)
class QuadResult:
    value: BigReal
    error: BigReal
    levels: int = 0
    evaluations: int = 0


@dataclass(frozen=True)
class TailStrategy:
    kind: str  # "exponential-decay" | "bessel-oscillatory"
    cutoff: BigReal
    tail_value: BigReal
    tail_error: BigReal

    def __post_init__(self):
        if self.kind not in ("exponential-decay", "bessel-oscillatory"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.tail_error < 0:
            raise ValueError("tail_error must be >= 0")


@dataclass(frozen=True)
class TailResult:
    value: BigReal
    error: BigReal
    strategy: TailStrategy
    panel: Optional[QuadResult] = None


# ---------------------------------------------------------------------------
# tanh-sinh
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _level_nodes(W: int, level: int, tmax: float) -> Tuple[Tuple[float, BigReal, BigReal], ...]:
    """(t, delta, weight) for the nodes new at ``level`` with t > 0.

    delta = 1 - tanh(pi/2 sinh t) is computed directly so points next to an
    endpoint keep full relative accuracy.
    """
    h = Fraction(1, 2**level)
    half_pi = nk.const_pi(W) / 2
    out = []
    j = 1
    while True:
        if level > 0 and j % 2 == 0:
            j += 1
            continue
        t = h * j
        if t > tmax:
            break
        tb = BigReal(t, W)
        et = nk.exp(tb)
        iet = 1 / et
        sh = (et - iet) / 2
        ch = (et + iet) / 2
        e2u = nk.exp(half_pi * sh * 2)
        delta = 2 / (e2u + 1)
        weight = half_pi * ch * 4 * e2u / ((e2u + 1) * (e2u + 1))
        out.append((float(t), delta, weight))
        j += 1
    return tuple(out)


def _tmax(W: int, mu: float) -> float:
    # stop where the endpoint contribution ~ delta^mu drops below 10**-W
    lnd = W * LN10 / max(mu, 1e-3) + math.log(2)
    # rounded up to a quarter so the node cache is shared between callers
    return min(_T_CAP, math.ceil(4 * math.asinh(lnd / math.pi)) / 4)


def integrate_finite(
    f: Union[Integrand, Callable[[BigReal], BigReal]],
    a,
    b,
    precision: int,
    max_level: int = 12,
) -> QuadResult:
    """int_a^b f(t) dt with reported absolute error bound <= 10**-precision.

    The bound is |I_k - I_{k-1}| for the accepted level k (tanh-sinh roughly
    doubles its correct digits per level, so this overstates the true error)
    plus node-truncation and rounding allowances.
    """
    integrand = f if isinstance(f, Integrand) else Integrand(f)
    W = precision + GUARD + integrand.extra_digits
    a = big(a, W)
    b = big(b, W)
    if not a < b:
        raise DomainError("integrate_finite requires a < b")
    half = (b - a) / 2
    mid = (a + b) / 2
    tmax = _tmax(W, integrand.endpoint_exponent)
    tol = nk.eps(precision)
    half_pi = nk.const_pi(W) / 2

    total = half_pi * integrand(mid)
    total_abs = abs(total)
    evals = 1
    prev = None
    edge = BigReal(0, W)
    for level in range(0, max_level + 1):
        for t, delta, weight in _level_nodes(W, level, tmax):
            off = half * delta
            fl = integrand(a + off)
            fr = integrand(b - off)
            evals += 2
            c = weight * (fl + fr)
            total = total + c
            total_abs = total_abs + abs(c)
            edge = abs(c)
        h = Fraction(1, 2**level)
        est = half * total * h
        if prev is not None and level >= 3:
            diff = abs(est - prev)
            if diff <= tol:
                trunc = half * edge * h
                rounding = half * total_abs * h * nk.eps(W - 2)
                err = diff + trunc + rounding
                return QuadResult(est.with_precision(precision + GUARD), err.with_precision(6), level, evals)
        prev = est
    raise NonConvergenceError(
        f"tanh-sinh did not converge by level {max_level} on [{a.sig(8)}, {b.sig(8)}]"
    )


def _breakpoints(a: Fraction, b: Fraction, width: float = 8.0) -> List[Fraction]:
    """Panel edges: geometric up to 1 (for a > 0), [0, 1] when a = 0, then
    panels of about ``width``."""
    pts = [a]
    cur = a
    if cur < 1:
        if cur > 0:
            while cur * 4 < min(b, Fraction(1)):
                cur = cur * 4
                pts.append(cur)
        cur = min(b, Fraction(1))
        if cur > pts[-1]:
            pts.append(cur)
    n = int(math.ceil(float(b - cur) / width)) if b > cur else 0
    for i in range(1, n + 1):
        pts.append(cur + (b - cur) * i / n)
    return pts


def integrate_panels(
    f: Union[Integrand, Callable[[BigReal], BigReal]], a, b, precision: int, width: float = 8.0
) -> QuadResult:
    """integrate_finite over consecutive panels; errors add."""
    f = f if isinstance(f, Integrand) else Integrand(f)
    fa = a.to_fraction() if isinstance(a, BigReal) else Fraction(a)
    fb = b.to_fraction() if isinstance(b, BigReal) else Fraction(b)
    pts = _breakpoints(fa, fb, width)
    per = precision + int(math.ceil(math.log10(max(len(pts) - 1, 1)))) + 1
    value = BigReal(0, precision + GUARD)
    err = BigReal(0, 6)
    levels = evals = 0
    for lo, hi in zip(pts, pts[1:]):
        ep = f.endpoint_exponent if lo == 0 else 1.0
        g = Integrand(f.fn, f.extra_digits, ep)
        r = integrate_finite(g, lo, hi, per)
        value = value + r.value
        err = err + r.error
        levels = max(levels, r.levels)
        evals += r.evaluations
    return QuadResult(value, err, levels, evals)


# ---------------------------------------------------------------------------
# Oscillatory Bessel tails by integration by parts
# ---------------------------------------------------------------------------


def _log_byparts_bound(T: float, p: float, m: int) -> float:
    # log of prod_{i<m}(p+2i+1)^2 * sqrt(2/pi) T^{1/2-p-2m} / (p+2m-1/2)
    acc = 0.0
    for i in range(m):
        acc += 2 * math.log(p + 2 * i + 1)
    q = p + 2 * m
    return acc + 0.5 * math.log(2 / math.pi) + (0.5 - q) * math.log(T) - math.log(q - 0.5)


def byparts_order(T: float, p: float, digits: int):
    """Smallest m whose remainder bound clears 10**-digits, else (None, best log bound)."""
    target = -digits * LN10
    best = math.inf
    m = 1 if p <= 0.5 else 0
    prev = math.inf
    while True:
        lb = _log_byparts_bound(T, p, m)
        best = min(best, lb)
        if lb < target:
            return m, lb
        if lb > prev:
            return None, best
        prev = lb
        m += 1


def choose_cutoff(p: float, digits: int, lower: float = 0.0) -> float:
    """Smallest T >= max(lower, 20, 2 sqrt(digits)) (in steps of 1) whose
    by-parts remainder bound clears 10**-(digits+1)."""
    T = max(lower, 20.0, 2 * math.sqrt(digits))
    while byparts_order(T, p, digits + 1)[0] is None:
        T += 1.0
    return T


def bessel_power_tail(T, p, precision: int) -> TailResult:
    """int_T^oo J0(t) t^-p dt (p > -1/2) by integration by parts alone."""
    W = precision + GUARD
    Tb = big(T, W)
    pb = big(p, W)
    Tf, pf = float(Tb), float(pb)
    if pf <= -0.5:
        raise DomainError("power must exceed -1/2 for convergence")
    if Tf <= 0:
        raise DomainError("lower limit must be positive")
    m, lb = byparts_order(Tf, pf, precision)
    if m is None:
        raise InsufficientAccuracyError(
            f"integration by parts from T={Tf:g} reaches only ~1e{lb / LN10:.1f}",
            estimate=nk.from_log(lb),
        )
    j0 = bessel_j0_auto(Tb, W)
    dj0 = -bessel_j1_auto(Tb, W)
    inv_t = 1 / Tb
    inv_t2 = inv_t * inv_t
    g = nk.power(Tb, -pb)  # T^{-(p+2j)}
    coef = BigReal(1, W)  # prod_{i<j} (p+2i+1)^2
    total = BigReal(0, W)
    for j in range(m):
        q = pb + 2 * j
        term = coef * (g * dj0 + (q + 1) * j0 * g * inv_t)
        total = total + term if j % 2 == 0 else total - term
        coef = coef * (q + 1) * (q + 1)
        g = g * inv_t2
    bound = nk.from_log(lb) + abs(total) * nk.eps(W - 2)
    strat = TailStrategy("bessel-oscillatory", Tb.with_precision(precision), total, bound)
    return TailResult(total.with_precision(precision + GUARD), bound, strat)


def _j0_power_integrand(p) -> Integrand:
    def fn(t: BigReal) -> BigReal:
        return bessel_j0_auto(t, t.precision) * nk.power(t, -big(p, t.precision))

    return Integrand(fn)


def bessel_tail_over_t(
    lower, power, precision: int, cutoff: Optional[float] = None, allow_panel: bool = True
) -> TailResult:
    """int_lower^oo J0(t) / t^power dt.

    If integration by parts cannot meet 10**-precision from ``lower``, a
    finite panel [lower, T] is integrated numerically first (``allow_panel``),
    otherwise InsufficientAccuracyError is raised.
    """
    lo = big(lower, precision + GUARD)
    if lo <= 0:
        raise DomainError("lower must be positive")
    pf = float(big(power, 20))
    T = cutoff if cutoff is not None else choose_cutoff(pf, precision, 0.0)
    T = max(T, float(lo))
    if T <= float(lo) or byparts_order(float(lo), pf, precision + 1)[0] is not None:
        return bessel_power_tail(lo, power, precision + 1)
    if not allow_panel:
        raise InsufficientAccuracyError(
            f"lower={float(lo):g} too small for integration by parts at 1e-{precision}"
        )
    Tq = Fraction(math.ceil(T))
    panel = integrate_panels(_j0_power_integrand(power), lo, Tq, precision + 1)
    tail = bessel_power_tail(BigReal(Tq, precision + GUARD), power, precision + 1)
    return TailResult(panel.value + tail.value, panel.error + tail.error, tail.strategy, panel)


# ---------------------------------------------------------------------------
# Weber, Nielsen and Laplace-transform checks
# ---------------------------------------------------------------------------


def _as_fraction(v) -> Fraction:
    if isinstance(v, BigReal):
        return v.to_fraction()
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def weber_closed_form(mu, precision: int) -> BigReal:
    """2^{mu-1} Gamma(mu/2) / Gamma(1 - mu/2)."""
    W = precision + GUARD
    mu = big(_as_fraction(mu), W)
    return nk.power(BigReal(2, W), mu - 1) * gamma_fn(mu / 2, W) / gamma_fn(1 - mu / 2, W)


def weber_integral(mu, precision: int, cutoff: Optional[float] = None) -> Tuple[BigReal, BigReal, float]:
    """(value, error bound, cutoff) for int_0^oo t^{mu-1} J0(t) dt."""
    muf = _as_fraction(mu)
    if not (0 < muf < Fraction(3, 2)):
        raise DomainError("Weber integral needs 0 < mu < 3/2")
    p = 1 - muf
    T = cutoff if cutoff is not None else choose_cutoff(float(p), precision)
    Tq = Fraction(math.ceil(T))

    def fn(t: BigReal) -> BigReal:
        P = t.precision
        return bessel_j0_auto(t, P) * nk.power(t, big(muf - 1, P))

    panel = integrate_panels(Integrand(fn, 0, float(muf)), 0, Tq, precision + 1)
    tail = bessel_power_tail(BigReal(Tq, precision + GUARD), BigReal(p, precision + GUARD), precision + 1)
    return panel.value + tail.value, panel.error + tail.error, float(Tq)


def weber_integral_check(mu, precision: int, tolerance=None, cutoff=None) -> VerificationReport:
    """Numerical Weber integral against its Gamma-function closed form."""
    started = time.perf_counter()
    muf = _as_fraction(mu)
    tol = tolerance if tolerance is not None else nk.eps(precision - 10, 20)
    value, err, T = weber_integral(muf, precision, cutoff)
    closed = weber_closed_form(muf, precision)
    residual = value - closed
    return VerificationReport.build(
        f"lemma1[mu={muf}]",
        {"mu": muf, "precision": precision, "cutoff": int(T)},
        residual,
        tol,
        started,
        notes={
            "error_bound": err.sig(3),
            "outside_proof_window": str(muf >= Fraction(1, 2)).lower(),
        },
    )


def nielsen_integrand(t: BigReal) -> BigReal:
    """(e^{-t/2} - J0(t)) / t, finite (-> -1/2) as t -> 0+."""
    P = t.precision
    return (nk.exp(-t / 2) - bessel_j0_auto(t, P)) / t


def nielsen_integral(precision: int, cutoff: Optional[float] = None) -> Tuple[BigReal, BigReal, float]:
    """(value, error bound, split point) for int_0^oo (e^{-t/2} - J0(t))/t dt."""
    T = Fraction(math.ceil(cutoff)) if cutoff is not None else Fraction(
        math.ceil(choose_cutoff(1.0, precision))
    )
    panel = integrate_panels(Integrand(nielsen_integrand, extra_digits=5), 0, T, precision + 1)
    exp_tail = exp_integral_E1(BigReal(T / 2, precision + GUARD), precision + GUARD)
    j0_tail = bessel_tail_over_t(BigReal(T, precision + GUARD), 1, precision + 1)
    value = panel.value + exp_tail - j0_tail.value
    err = panel.error + j0_tail.error + abs(exp_tail) * nk.eps(precision + GUARD - 1)
    return value, err, float(T)


def nielsen_integral_check(precision: int, tolerance=None, cutoff=None) -> VerificationReport:
    started = time.perf_counter()
    tol = tolerance if tolerance is not None else nk.eps(precision - 5, 20)
    value, err, T = nielsen_integral(precision, cutoff)
    return VerificationReport.build(
        "lemma2",
        {"precision": precision, "cutoff": int(T)},
        value,
        tol,
        started,
        notes={"error_bound": err.sig(3)},
    )


def exponential_cutoff(alpha: float, mu: float, digits: int) -> Tuple[float, float]:
    """(T, log bound) with int_T^oo e^{-alpha t} t^{mu-1} dt <= T^{mu-1} e^{-alpha T}/alpha
    below 10**-digits (valid for mu <= 1)."""
    target = -digits * LN10
    T = 1.0 / alpha
    while True:
        lb = (mu - 1) * math.log(T) - alpha * T - math.log(alpha)
        if lb < target:
            return T, lb
        T *= 1.05


def laplace_j0_quadrature(alpha, mu, precision: int) -> Tuple[BigReal, BigReal, TailStrategy]:
    W = precision + GUARD
    af = _as_fraction(alpha)
    muf = _as_fraction(mu)
    T, lb = exponential_cutoff(float(af), float(muf), precision + 2)
    Tq = Fraction(T).limit_denominator(10**6)
    if Tq < Fraction(T):
        Tq += Fraction(1, 10**6)

    def fn(t: BigReal) -> BigReal:
        P = t.precision
        return nk.exp(-big(af, P) * t) * nk.power(t, big(muf - 1, P)) * bessel_j0_auto(t, P)

    panel = integrate_panels(Integrand(fn, 0, float(muf)), 0, Tq, precision + 1)
    tail_err = nk.from_log(lb)
    strat = TailStrategy("exponential-decay", BigReal(Tq, W), BigReal(0, W), tail_err)
    return panel.value, panel.error + tail_err, strat


def laplace_closed_form(alpha, mu, precision: int) -> BigReal:
    """alpha^{-mu} Gamma(mu) F(mu/2, (mu+1)/2; 1; -alpha^{-2})."""
    W = precision + GUARD
    a = big(_as_fraction(alpha), W)
    mu = big(_as_fraction(mu), W)
    F = hyp2f1(mu / 2, (mu + 1) / 2, 1, -1 / (a * a), W).value
    return nk.power(a, -mu) * gamma_fn(mu, W) * F


def laplace_j0_hypergeometric(alpha, mu, precision: int, tolerance=None) -> VerificationReport:
    """Quadrature of int_0^oo e^{-alpha t} t^{mu-1} J0(t) dt against the
    hypergeometric closed form (alpha > 1, where the series converges)."""
    started = time.perf_counter()
    af = _as_fraction(alpha)
    muf = _as_fraction(mu)
    if af <= 1:
        raise DomainError("alpha must exceed 1 (hypergeometric series route)")
    if not (0 < muf < Fraction(1, 2)):
        raise DomainError("mu must lie in (0, 1/2)")
    tol = tolerance if tolerance is not None else nk.eps(precision - 10, 20)
    value, err, strat = laplace_j0_quadrature(af, muf, precision)
    closed = laplace_closed_form(af, muf, precision)
    return VerificationReport.build(
        f"ex5.7[alpha={af},mu={muf}]",
        {"alpha": af, "mu": muf, "precision": precision},
        value - closed,
        tol,
        started,
        notes={"error_bound": err.sig(3), "cutoff": strat.cutoff.sig(8)},
    )
