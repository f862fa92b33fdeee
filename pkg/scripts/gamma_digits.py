"""Compute Euler's constant by every method and report agreement and timing.

Run:  python3 scripts/gamma_digits.py --digits 1000 --methods bm2,bm3,glaisher
"""

import argparse
import time
from dataclasses import dataclass, field
from typing import List

from gammaforge.gamma_const import gamma_brent_mcmillan, gamma_glaisher, plan_brent_mcmillan


@dataclass
class GammaRunConfig:
    digits: int = 500
    methods: List[str] = field(default_factory=lambda: ["bm1", "bm2", "bm3", "glaisher"])
    plan_only: List[int] = field(default_factory=lambda: [30000])


def compute(method: str, digits: int):
    if method == "glaisher":
        return gamma_glaisher(digits).fixed(digits), None
    n = int(method[2:]) if method.startswith("bm") and method[2:].isdigit() else None
    if n is None:
        raise SystemExit(f"unknown method {method!r}")
    g, plan = gamma_brent_mcmillan(n, digits)
    return g.fixed(digits), plan


def run(cfg: GammaRunConfig):
    results = {}
    for m in cfg.methods:
        t0 = time.perf_counter()
        digits, plan = compute(m, cfg.digits)
        dt = time.perf_counter() - t0
        results[m] = digits
        extra = f"x={plan.x} K={plan.truncation_k} W={plan.working_digits}" if plan else ""
        print(f"{m:9s} {dt:8.3f} s  {digits[:22]}...{digits[-8:]}  {extra}")
    ref = next(iter(results.values()))
    for m, d in results.items():
        agree = next((i for i, (a, b) in enumerate(zip(ref, d)) if a != b), len(d)) - 2
        print(f"{m:9s} agrees with {cfg.methods[0]} to {agree} decimals")
    for target in cfg.plan_only:
        p = plan_brent_mcmillan(2, target)
        print(f"plan n=2 target {target}: x={p.x} ({100 * abs(p.x - 17400) / 17400:.2f}% from 17400), "
              f"K~{p.truncation_k}, W={p.working_digits}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=GammaRunConfig.digits)
    ap.add_argument("--methods", default="bm1,bm2,bm3,glaisher")
    a = ap.parse_args()
    run(GammaRunConfig(digits=a.digits, methods=a.methods.split(",")))


if __name__ == "__main__":
    main()
