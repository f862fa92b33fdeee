"""gammaforge command line: ``gamma``, ``verify`` and ``eval`` subcommands.

Exit codes: 0 success, 1 a verification check failed, 2 invalid flags or
combination, 3 internal precision failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from . import numkernel as nk
from .bessel import bessel_hankel, bessel_j0_series, j0_route
from .claims import claim_names, parse_grid, resolve, run_claim
from .errors import (
    DegenerateFitError,
    DomainError,
    InsufficientAccuracyError,
    NonConvergenceError,
)
from .gamma_const import gamma_brent_mcmillan, gamma_glaisher, glaisher_terms_needed
from .ramanujan import RamanujanSeriesSpec, error_term_e, error_term_expansion, series_S_n
from .reports import reports_to_csv, reports_to_json, reports_to_text
from .special import exp_integral_E1

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
DEFAULT_MAX_DIGITS = 5000

ROUTE_ALIASES = {
    "series": "direct-series",
    "direct": "direct-series",
    "direct-series": "direct-series",
    "integral": "bessel-integral",
    "bessel-integral": "bessel-integral",
    "expansion": "asymptotic-expansion",
    "asymptotic-expansion": "asymptotic-expansion",
}


class UsageError(Exception):
    pass


def max_digits() -> int:
    raw = os.environ.get("GAMMAFORGE_MAX_DIGITS", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIGITS
    except ValueError:
        return DEFAULT_MAX_DIGITS


def _check_digits(value: int, flag: str) -> int:
    if value < 1:
        raise UsageError(f"{flag} must be >= 1")
    cap = max_digits()
    if value > cap:
        raise UsageError(f"{flag} {value} exceeds GAMMAFORGE_MAX_DIGITS={cap}")
    return value


def _trim(s: str) -> str:
    if "." in s and "e" not in s:
        s = s.rstrip("0").rstrip(".")
    return s


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------


def _bm_order(method: str) -> Optional[int]:
    if method in ("bm1", "bm2", "bm3"):
        return int(method[2])
    if method.startswith("bm-n:"):
        try:
            n = int(method[5:])
        except ValueError:
            raise UsageError(f"bad method {method!r}") from None
        if n < 1:
            raise UsageError("bm-n order must be >= 1")
        return n
    if method == "glaisher":
        return None
    raise UsageError(f"unknown method {method!r}")


def cmd_gamma(args) -> int:
    digits = _check_digits(args.digits, "--digits")
    n = _bm_order(args.method)
    if n is None:
        value = gamma_glaisher(digits)
        plan = {"method": "glaisher", "terms": glaisher_terms_needed(digits + 10)}
    else:
        value, bm = gamma_brent_mcmillan(n, digits)
        plan = bm.as_dict()
    text = value.fixed(digits)
    if args.out == "json":
        doc = {
            "tool_version": __version__,
            "command": "gamma",
            "method": args.method,
            "digits": digits,
            "value": text,
            "plan": plan,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        resolve(args.claim)
    except KeyError:
        raise UsageError(
            f"unknown claim {args.claim!r}; known: {', '.join(claim_names())}"
        ) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    precision = None
    if args.precision is not None:
        precision = _check_digits(args.precision, "--precision")
        if precision <= 20 and args.claim == "theorem1":
            raise UsageError("theorem1 needs --precision > 20")
    grid = None
    if args.grid:
        try:
            grid = parse_grid(args.claim, args.grid)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --grid: {exc}") from None
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    reports = run_claim(args.claim, precision, grid, args.threads)
    if args.out == "json":
        print(reports_to_json(f"verify --claim {args.claim}", reports))
    elif args.out == "csv":
        sys.stdout.write(reports_to_csv(reports))
    else:
        print(reports_to_text(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _parse_x(raw: str, precision: int):
    try:
        f = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --x {raw!r}") from None
    return f, nk.big(f, precision + 10)


def cmd_eval(args) -> int:
    P = _check_digits(args.precision, "--precision")
    if args.x is None:
        raise UsageError("--x is required")
    xf, x = _parse_x(args.x, P)
    what = args.what
    route = args.route
    if route is not None and what in ("S", "E1"):
        raise UsageError(f"--route does not apply to {what}")
    if args.n is not None and what != "S":
        raise UsageError("--n only applies to --what S")
    if xf < 0 or (xf == 0 and what != "J0"):
        raise UsageError("--x must be positive" + (" (J0 accepts 0)" if what != "J0" else ""))

    if what == "S":
        n = args.n if args.n is not None else 2
        if n < 1:
            raise UsageError("--n must be >= 1")
        r = series_S_n(RamanujanSeriesSpec.make(n, x, P))
        out = dict(value=r.value, error=r.error_bound, route="direct-series", terms=r.terms)
    elif what == "e":
        rname = ROUTE_ALIASES.get(route or "series")
        if rname is None:
            raise UsageError(f"unknown route {route!r} for e")
        r = error_term_e(x, rname, P)
        out = dict(value=r.value, error=r.error_bound, route=rname, terms=r.terms)
    elif what == "expansion":
        if route not in (None, "expansion", "asymptotic-expansion"):
            raise UsageError("--what expansion only has the expansion route")
        ev = error_term_expansion(x, "auto", P, strict=True)
        out = dict(value=ev.value, error=ev.error_estimate, route="asymptotic-expansion",
                   terms=ev.terms_used)
    elif what == "J0":
        if xf == 0:
            out = dict(value=nk.BigReal(1, P), error=nk.BigReal(0, 6), route="series", terms=1)
        else:
            rname = route or j0_route(x, P)
            if rname == "series":
                r = bessel_j0_series(x, P)
                out = dict(value=r.value, error=r.error_bound, route="series", terms=r.terms)
            elif rname == "hankel":
                ev = bessel_hankel(0, x, P, strict=True)
                out = dict(value=ev.value, error=ev.error_estimate, route="hankel",
                           terms=ev.terms_used)
            else:
                raise UsageError(f"unknown route {route!r} for J0 (series|hankel)")
    elif what == "E1":
        v = exp_integral_E1(x, P)
        out = dict(value=v, error=nk.eps(P, 6), route="series" if float(x) <= 0.7 * (P + 10)
                   else "continued-fraction", terms=0)
    else:  # argparse restricts choices
        raise UsageError(f"unknown --what {what!r}")

    value_s = _trim(out["value"].sig(P))
    err_s = out["error"].sig(3) if not out["error"].is_zero() else "0"
    if args.out == "json":
        doc = {
            "tool_version": __version__,
            "command": "eval",
            "what": what,
            "x": args.x,
            "precision": P,
            "value": value_s,
            "error_bound": err_s,
            "route": out["route"],
            "terms": out["terms"],
        }
        print(json.dumps(doc, indent=2))
    else:
        print(value_s)
        print(f"error_bound {err_s}")
        print(f"route {out['route']}")
        print(f"terms {out['terms']}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gammaforge",
        description="Euler's constant, Ramanujan's alternating series and their Bessel-integral "
        "error term.  Printed digits are rounded half-to-even from a value carried with "
        "guard digits.",
        epilog="Exit codes: 0 ok, 1 failed check, 2 invalid usage, 3 precision failure. "
        f"GAMMAFORGE_MAX_DIGITS caps --digits/--precision (default {DEFAULT_MAX_DIGITS}).",
    )
    p.add_argument("--version", action="version", version=f"gammaforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="print gamma to --digits decimals (round-half-even)")
    g.add_argument("--digits", type=int, required=True)
    g.add_argument("--method", default="bm2", help="bm1 | bm2 | bm3 | bm-n:<k> | glaisher")
    g.add_argument("--out", choices=("text", "json"), default="text")
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="check a claim over its default grid")
    v.add_argument("--claim", required=True, help=" | ".join(claim_names()))
    v.add_argument("--precision", type=int, default=None)
    v.add_argument("--grid", default=None, help="comma-separated override (ex5.7: alpha:mu)")
    v.add_argument("--out", choices=("text", "json", "csv"), default="text")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate S_n, e, J0, E1 or the expansion at one x")
    e.add_argument("--what", choices=("S", "e", "J0", "E1", "expansion"), required=True)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--x", default=None)
    e.add_argument("--precision", type=int, default=30)
    e.add_argument("--route", default=None, help="e: series|integral|expansion; J0: series|hankel")
    e.add_argument("--out", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gammaforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientAccuracyError as exc:
        # asymptotic routes asked for more than they can deliver at this x
        print(f"gammaforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"gammaforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, DegenerateFitError, ArithmeticError) as exc:
        print(f"gammaforge: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
