"""High-precision tools for Ramanujan's S_n(x) series, its Bessel-integral
error term, and Euler's constant by the Brent-McMillan ratio."""

__version__ = "0.1.0"
