"""Fitted convergence rates of the Brent-McMillan ratio for n = 1..N.

Prints the least-squares slope of ln|U/V - ln x - gamma| against x, the
expected -c_n, and (for n = 1) the slope after removing the known 1/x factor
of E1, which explains the n = 1 deviation.

Run:  python3 scripts/rate_table.py --max-n 8
"""

import argparse
import math
import statistics
from dataclasses import dataclass

from gammaforge.errors import DegenerateFitError
from gammaforge.gamma_const import c_n, fit_convergence_rate


@dataclass
class RateConfig:
    max_n: int = 8
    x_values: tuple = (5, 10, 15, 20, 25, 30)
    tolerance: float = 0.05


def run(cfg: RateConfig):
    print(f"{'n':>3} {'slope':>9} {'-c_n':>8} {'dev %':>7}  within {cfg.tolerance:.0%}")
    for n in range(1, cfg.max_n + 1):
        try:
            fit = fit_convergence_rate(n, cfg.x_values)
        except DegenerateFitError as exc:
            print(f"{n:3d}  degenerate: {exc}")
            continue
        print(f"{n:3d} {fit.fitted_slope:9.4f} {-c_n(n):8.4f} {100 * fit.relative_deviation:7.2f}"
              f"  {fit.within(cfg.tolerance)}")
        if n == 1:
            xs = [s[0] for s in fit.samples]
            ys = [s[1] + math.log(s[0]) for s in fit.samples]
            adj, _ = statistics.linear_regression(xs, ys)
            print(f"    n=1 with ln x added back (E1(x) ~ e^-x / x): slope {adj:.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=RateConfig.max_n)
    run(RateConfig(max_n=ap.parse_args().max_n))


if __name__ == "__main__":
    main()
