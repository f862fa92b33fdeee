"""Cross-route table for e(x): direct series, Bessel tail integral and the
asymptotic expansion, with reported bounds and cancellation digits.

Run:  python3 scripts/route_agreement.py --precision 40 --x 2,5,10,20,40,80
"""

import argparse
import time
from dataclasses import dataclass

from gammaforge.errors import InsufficientAccuracyError
from gammaforge.ramanujan import error_term_e


@dataclass
class RouteConfig:
    precision: int = 40
    xs: tuple = (2, 5, 10, 20, 40, 80)


def run(cfg: RouteConfig):
    print(f"{'x':>5} {'e(x)':>24} {'|series-integral|':>18} {'bounds':>10} {'lost':>5} "
          f"{'|expansion-integral|':>21} {'t_int s':>8}")
    for x in cfg.xs:
        d = error_term_e(x, "direct-series", cfg.precision)
        t0 = time.perf_counter()
        i = error_term_e(x, "bessel-integral", cfg.precision)
        dt = time.perf_counter() - t0
        try:
            a = error_term_e(x, "asymptotic-expansion", cfg.precision)
            exp_col = abs(a.value - i.value).sig(3)
        except InsufficientAccuracyError as exc:
            exp_col = f"n/a ({exc.estimate.sig(2)})"
        print(f"{x:>5} {d.value.sig(18):>24} {abs(d.value - i.value).sig(3):>18} "
              f"{(d.error_bound + i.error_bound).sig(2):>10} {d.cancellation_digits_lost:>5} "
              f"{exp_col:>21} {dt:8.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--precision", type=int, default=RouteConfig.precision)
    ap.add_argument("--x", default="2,5,10,20,40,80")
    a = ap.parse_args()
    run(RouteConfig(a.precision, tuple(int(v) for v in a.x.split(","))))


if __name__ == "__main__":
    main()
