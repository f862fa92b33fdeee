"""mpmath reference values frozen into the unit tests.

Run:  python3 scripts/oracle_values.py
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import (
    besselj,
    cos,
    e,
    e1,
    euler,
    exp,
    findroot,
    gamma,
    harmonic,
    hyp2f1,
    log,
    mp,
    mpf,
    nstr,
    pi,
    sin,
    zeta,
)


@dataclass
class ValuesConfig:
    dps: int = 60


def main(cfg: ValuesConfig = ValuesConfig()):
    mp.dps = cfg.dps
    mu = mpf(1) / 4
    S2 = sum(Fraction((-1) ** (k - 1), 2 * k) / Fraction(math.factorial(k)) ** 2 for k in range(1, 31))
    rows = [
        ("E1(1)", e1(1), 20),
        ("E1(10) / (e^-10/10)", e1(10) / (exp(-10) / 10), 6),
        ("E1(20) / e^-20", e1(20) / exp(-20), 6),
        ("Gamma(1/4)", gamma(mu), 30),
        ("H_100", harmonic(100), 42),
        ("2F1(1/8, 5/8; 1; -1/4)", hyp2f1(mu / 2, (mu + 1) / 2, 1, mpf(-1) / 4), 30),
        ("zeta(3)", zeta(3), 25),
        ("J0(1)", besselj(0, 1), 25),
        ("S_2(1), 30 exact terms", mpf(S2.numerator) / S2.denominator, 30),
        ("e", e, 30),
        ("gamma", euler, 60),
        ("1 - zeta(3)/6", 1 - zeta(3) / 6, 10),
        ("S_1(5) = ln 5 + gamma + E1(5)", log(5) + euler + e1(5), 35),
        (
            "root of cos(2x+pi/4) + 13 sin(2x+pi/4)/(16x) near 5.1",
            findroot(lambda x: cos(2 * x + pi / 4) + 13 * sin(2 * x + pi / 4) / (16 * x), 5.05),
            12,
        ),
    ]
    for name, val, digits in rows:
        print(f"{name:55s} {nstr(val, digits)}")


if __name__ == "__main__":
    main()
