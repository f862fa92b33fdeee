"""Claim checks behind ``gammaforge verify``.

Each runner takes a precision and an optional grid and returns one
VerificationReport per sub-check, in grid order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import numkernel as nk
from .gamma_const import c_n, fit_convergence_rate
from .numkernel import big
from .quad import laplace_j0_hypergeometric, nielsen_integral_check, weber_integral_check
from .ramanujan import (
    corollary_residual,
    error_term_e,
    harmonic_exp_series,
    RamanujanSeriesSpec,
    series_S_n,
    sign_change_scan,
)
from .reports import VerificationReport

# Frozen from a pre-build oracle run (see scripts/oracle_constants.py).
COROLLARY_C = Fraction(11, 10)
N3_GROWTH_THRESHOLD = 10**20
N3_MIN_SIGN_CHANGES = 3


@dataclass(frozen=True)
class ClaimDef:
    default_precision: int
    default_grid: tuple
    run_one: Callable  # (grid point, precision) -> list of reports


def _theorem1(x, precision):
    t0 = time.perf_counter()
    d = error_term_e(x, "direct-series", precision)
    i = error_term_e(x, "bessel-integral", precision)
    return [
        VerificationReport.build(
            f"theorem1[x={x}]",
            {"x": x, "precision": precision},
            d.value - i.value,
            nk.eps(precision - 20),
            t0,
            notes={
                "direct_error_bound": d.error_bound.sig(3),
                "integral_error_bound": i.error_bound.sig(3),
                "cancellation_digits_lost": d.cancellation_digits_lost,
            },
        )
    ]


def _corollary1(x, precision):
    t0 = time.perf_counter()
    r = corollary_residual(x, precision)
    xb = big(x, precision)
    return [
        VerificationReport.build(
            f"corollary1[x={x}]",
            {"x": x, "precision": precision},
            abs(r) * xb * xb,
            nk.big(COROLLARY_C, 20),
            t0,
            notes={"R": r.sig(12)},
        )
    ]


def _lemma1(mu, precision):
    return [weber_integral_check(Fraction(mu), precision)]


def _lemma2(_, precision):
    return [nielsen_integral_check(precision)]


def _ex57(point, precision):
    alpha, mu = point
    return [laplace_j0_hypergeometric(Fraction(alpha), Fraction(mu), precision)]


def _hid(x, precision):
    t0 = time.perf_counter()
    a = harmonic_exp_series(x, precision + 2)
    b = series_S_n(RamanujanSeriesSpec.make(1, x, precision + 2)).value
    return [
        VerificationReport.build(
            f"hid-identity[x={x}]",
            {"x": x, "precision": precision},
            a - b,
            nk.eps(precision - 2),
            t0,
        )
    ]


def _n3(x_max, precision):
    t0 = time.perf_counter()
    scan = sign_change_scan(3, x_max, None, precision)
    out = []
    for a, b in scan.brackets:
        out.append(
            VerificationReport.build(
                f"n3-divergence[bracket={a.sig(6)}..{b.sig(6)}]",
                {"a": a.sig(8), "b": b.sig(8), "n": 3},
                0,
                0,
                notes={"kind": "sign-change"},
            )
        )
    out.append(
        VerificationReport.build(
            "n3-divergence[count]",
            {"x_max": x_max, "grid": scan.grid, "n": 3},
            max(0, N3_MIN_SIGN_CHANGES - len(scan.brackets)),
            0,
            notes={"sign_changes": len(scan.brackets)},
        )
    )
    gap = big(N3_GROWTH_THRESHOLD, 30) - scan.max_abs
    out.append(
        VerificationReport.build(
            "n3-divergence[growth]",
            {"x_max": x_max, "grid": scan.grid, "n": 3},
            gap if gap > 0 else 0,
            0,
            t0,
            notes={"max_abs_e3": scan.max_abs.sig(6), "argmax": scan.argmax.sig(6)},
        )
    )
    return out


def _rate_fit(n):
    def run(xs, precision):
        t0 = time.perf_counter()
        fit = fit_convergence_rate(n, xs, precision or None)
        return [
            VerificationReport.build(
                f"rate-fit[n={n}]",
                {"n": n, "x": ",".join(str(v) for v in xs)},
                fit.relative_deviation,
                "0.05",
                t0,
                notes={"fitted_slope": f"{fit.fitted_slope:.6f}", "expected": f"{-c_n(n):.6f}"},
            )
        ]

    return run


RATE_GRID = (5, 10, 15, 20, 25, 30)

CLAIMS: Dict[str, ClaimDef] = {
    "theorem1": ClaimDef(40, (2, 5, 10, 20, 40), _theorem1),
    "corollary1": ClaimDef(30, (20, 30, 50, 80, 100), _corollary1),
    "lemma1": ClaimDef(30, ("1/8", "1/4", "3/8"), _lemma1),
    "weber-sweep": ClaimDef(30, ("1/8", "1/4", "1/2", "3/4", "1", "5/4"), _lemma1),
    "lemma2": ClaimDef(30, (None,), _lemma2),
    "ex5.7": ClaimDef(
        30, tuple((a, m) for a in ("2", "3", "10") for m in ("1/4", "1/3")), _ex57
    ),
    "hid-identity": ClaimDef(30, (1, 5, 10), _hid),
    "n3-divergence": ClaimDef(20, (40,), _n3),
}


def claim_names() -> List[str]:
    return sorted(CLAIMS) + ["rate-fit:<n>"]


def resolve(claim: str) -> ClaimDef:
    """ClaimDef for a claim name; KeyError if unknown, ValueError if malformed."""
    if claim.startswith("rate-fit:"):
        n = int(claim.split(":", 1)[1])
        if n < 1:
            raise ValueError("rate-fit order must be >= 1")
        return ClaimDef(0, (RATE_GRID,), _rate_fit(n))
    return CLAIMS[claim]


def parse_grid(claim: str, text: str) -> tuple:
    """Comma-separated grid; ex5.7 points are ``alpha:mu``; rate-fit takes x values."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty grid")
    if claim == "ex5.7":
        pts = []
        for it in items:
            a, m = it.split(":")
            Fraction(a), Fraction(m)
            pts.append((a, m))
        return tuple(pts)
    for it in items:
        Fraction(it)
    if claim.startswith("rate-fit:"):
        return (tuple(Fraction(v) if "/" in v else int(v) for v in items),)
    if claim in ("lemma1", "weber-sweep"):
        return tuple(items)
    return tuple(Fraction(v) if "/" in v else (int(v) if v.lstrip("-").isdigit() else v) for v in items)


def _call(args):
    fn, point, precision = args
    return fn(point, precision)


def run_claim(
    claim: str, precision: Optional[int] = None, grid: Optional[Sequence] = None, threads: int = 1
) -> List[VerificationReport]:
    cd = resolve(claim)
    P = precision if precision is not None else cd.default_precision
    pts = tuple(grid) if grid is not None else cd.default_grid
    jobs = [(cd.run_one, p, P) for p in pts]
    if threads > 1 and len(jobs) > 1 and not claim.startswith("rate-fit:"):
        with ProcessPoolExecutor(max_workers=threads) as ex:
            chunks = list(ex.map(_call, jobs))
    else:
        chunks = [_call(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]
