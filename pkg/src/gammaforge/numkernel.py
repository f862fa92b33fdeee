"""Precision-tagged arbitrary-precision reals.

Everything numeric in the package goes through :class:`BigReal`.  A value
carries its own working precision in *decimal* digits; there is no global
precision state.  The binary backend is mpmath's ``libmp`` layer, which takes
an explicit bit precision on every call, so the facade is a thin shim that
converts digits to bits and keeps the tag up to date.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

from mpmath import libmp

from .errors import DomainError

LOG2_10 = math.log2(10)
LOG10_E = math.log10(math.e)

# Extra bits beyond ceil(digits * log2(10)); keeps one rounding well under
# one unit in the last retained decimal digit.
_SPARE_BITS = 8
_RND = libmp.round_nearest

Number = Union["BigReal", int, Fraction, str, float]


def bits_for(digits: int) -> int:
    return int(math.ceil(digits * LOG2_10)) + _SPARE_BITS


def default_guard_digits(target_digits: int) -> int:
    return max(10, int(math.ceil(0.05 * target_digits)))


class BigReal:
    """An immutable real number together with its working precision (digits).

    Arithmetic between two BigReals is carried out at the smaller of the two
    precisions.  Python ints and Fractions are treated as exact and take the
    other operand's precision.
    """

    __slots__ = ("_v", "precision")

    def __init__(self, value: Number, precision: int):
        if precision < 1:
            raise ValueError("precision must be a positive number of digits")
        object.__setattr__(self, "precision", int(precision))
        object.__setattr__(self, "_v", _to_mpf(value, int(precision)))

    @classmethod
    def _wrap(cls, v, precision: int) -> "BigReal":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_v", v)
        object.__setattr__(obj, "precision", precision)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    def __reduce__(self):
        return (BigReal._wrap, (self._v, self.precision))

    # -- precision handling -------------------------------------------------

    def with_precision(self, precision: int) -> "BigReal":
        """Round (or re-tag, when raising precision) to ``precision`` digits."""
        if precision >= self.precision:
            return BigReal._wrap(self._v, precision)
        return BigReal._wrap(libmp.mpf_pos(self._v, bits_for(precision), _RND), precision)

    # -- arithmetic -----------------------------------------------------------

    def _other(self, other):
        if isinstance(other, BigReal):
            return other._v, min(self.precision, other.precision)
        if isinstance(other, (int, Rational, str, float)):
            return _to_mpf(other, self.precision), self.precision
        return None, None

    def __add__(self, other):
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        return BigReal._wrap(libmp.mpf_add(self._v, v, bits_for(p), _RND), p)

    __radd__ = __add__

    def __sub__(self, other):
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        return BigReal._wrap(libmp.mpf_sub(self._v, v, bits_for(p), _RND), p)

    def __rsub__(self, other):
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        return BigReal._wrap(libmp.mpf_sub(v, self._v, bits_for(p), _RND), p)

    def __mul__(self, other):
        if isinstance(other, int):
            return BigReal._wrap(
                libmp.mpf_mul_int(self._v, other, bits_for(self.precision), _RND), self.precision
            )
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        return BigReal._wrap(libmp.mpf_mul(self._v, v, bits_for(p), _RND), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        if v == libmp.fzero:
            raise DomainError("division by zero")
        return BigReal._wrap(libmp.mpf_div(self._v, v, bits_for(p), _RND), p)

    def __rtruediv__(self, other):
        v, p = self._other(other)
        if v is None:
            return NotImplemented
        if self._v == libmp.fzero:
            raise DomainError("division by zero")
        return BigReal._wrap(libmp.mpf_div(v, self._v, bits_for(p), _RND), p)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return pow_int(self, k)

    def __neg__(self):
        return BigReal._wrap(libmp.mpf_neg(self._v), self.precision)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigReal._wrap(libmp.mpf_abs(self._v), self.precision)

    # -- comparisons (exact on the stored binary values) -------------------------

    def _cmp(self, other):
        if isinstance(other, BigReal):
            return libmp.mpf_cmp(self._v, other._v)
        if isinstance(other, int):
            return libmp.mpf_cmp(self._v, libmp.from_int(other))
        if isinstance(other, (Rational, float)):
            a = self.to_fraction()
            b = Fraction(other)
            return (a > b) - (a < b)
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return libmp.mpf_hash(self._v)

    # -- conversions --------------------------------------------------------------

    def __float__(self):
        return libmp.to_float(self._v)

    def __bool__(self):
        return self._v != libmp.fzero

    def sign(self) -> int:
        return libmp.mpf_sign(self._v)

    def is_zero(self) -> bool:
        return self._v == libmp.fzero

    def to_fraction(self) -> Fraction:
        p, q = libmp.to_rational(self._v)
        return Fraction(p, q)

    def to_fixed(self, bits: int) -> int:
        """floor(x * 2**bits) as a Python int."""
        return libmp.to_fixed(self._v, bits)

    @classmethod
    def from_fixed(cls, n: int, bits: int, precision: int) -> "BigReal":
        """The value n * 2**-bits, rounded to ``precision`` digits."""
        return cls._wrap(libmp.from_man_exp(n, -bits, bits_for(precision), _RND), precision)

    def log10_abs(self) -> float:
        """Cheap float estimate of log10|x| (``-inf`` for zero)."""
        if self._v == libmp.fzero:
            return -math.inf
        _, man, exp, bc = self._v
        # |x| = man * 2**exp with man in [2**(bc-1), 2**bc)
        top = man >> max(bc - 53, 0)
        shift = exp + max(bc - 53, 0)
        return math.log10(top) + shift * math.log10(2)

    def fixed(self, places: int) -> str:
        """Decimal string with exactly ``places`` digits after the point.

        Rounds half-to-even on the exact stored binary value.
        """
        scaled = round(self.to_fraction() * 10**places)
        neg = scaled < 0
        s = str(abs(scaled)).rjust(places + 1, "0")
        body = s[:-places] + "." + s[-places:] if places > 0 else s
        return ("-" if neg else "") + body

    def sig(self, digits: Optional[int] = None) -> str:
        """Decimal string with ``digits`` significant digits (default: precision)."""
        digits = self.precision if digits is None else digits
        if self.is_zero():
            return "0"
        frac = self.to_fraction()
        e10 = int(math.floor(self.log10_abs()))
        scaled = round(frac * Fraction(10) ** (digits - 1 - e10))
        if abs(scaled) >= 10**digits:
            e10 += 1
            scaled = round(frac * Fraction(10) ** (digits - 1 - e10))
        elif abs(scaled) < 10 ** (digits - 1):
            e10 -= 1
            scaled = round(frac * Fraction(10) ** (digits - 1 - e10))
        neg = scaled < 0
        mant = str(abs(scaled))
        sign = "-" if neg else ""
        if -6 <= e10 < digits:
            if e10 >= 0:
                head, tail = mant[: e10 + 1], mant[e10 + 1 :]
                return sign + head + ("." + tail if tail else "")
            return sign + "0." + "0" * (-e10 - 1) + mant
        tail = mant[1:]
        return f"{sign}{mant[0]}{'.' + tail if tail else ''}e{e10:+d}"

    def __str__(self):
        return self.sig()

    def __repr__(self):
        return f"BigReal('{self.sig()}', precision={self.precision})"


def _to_mpf(value, precision):
    bits = bits_for(precision)
    if isinstance(value, BigReal):
        return libmp.mpf_pos(value._v, bits, _RND)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return libmp.from_int(value)
    if isinstance(value, Rational):
        return libmp.from_rational(value.numerator, value.denominator, bits, _RND)
    if isinstance(value, float):
        return libmp.from_float(value)
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            f = Fraction(s)
            return libmp.from_rational(f.numerator, f.denominator, bits, _RND)
        return libmp.from_str(s, bits, _RND)
    if isinstance(value, tuple):
        return libmp.mpf_pos(value, bits, _RND)
    raise TypeError(f"cannot build a BigReal from {type(value).__name__}")


def big(value: Number, precision: int) -> BigReal:
    """Coerce ``value`` to a BigReal; BigReal inputs keep their value and get
    re-tagged (not re-rounded) when ``precision`` is higher."""
    if isinstance(value, BigReal):
        return value.with_precision(precision)
    return BigReal(value, precision)


# -- elementary functions --------------------------------------------------------


def _prec_of(x, precision):
    if precision is not None:
        return precision
    if isinstance(x, BigReal):
        return x.precision
    raise ValueError("precision required for non-BigReal argument")


def exp(x: Number, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    return BigReal._wrap(libmp.mpf_exp(_to_mpf(x, p), bits_for(p), _RND), p)


def ln(x: Number, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    v = _to_mpf(x, p)
    if libmp.mpf_sign(v) <= 0:
        raise DomainError("ln requires a positive argument")
    return BigReal._wrap(libmp.mpf_log(v, bits_for(p), _RND), p)


def sqrt(x: Number, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    v = _to_mpf(x, p)
    if libmp.mpf_sign(v) < 0:
        raise DomainError("sqrt of a negative number")
    return BigReal._wrap(libmp.mpf_sqrt(v, bits_for(p), _RND), p)


def sin(x: Number, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    return BigReal._wrap(libmp.mpf_sin(_to_mpf(x, p), bits_for(p), _RND), p)


def cos(x: Number, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    return BigReal._wrap(libmp.mpf_cos(_to_mpf(x, p), bits_for(p), _RND), p)


def pow_int(x: Number, k: int, precision: Optional[int] = None) -> BigReal:
    p = _prec_of(x, precision)
    v = _to_mpf(x, p)
    if k < 0 and v == libmp.fzero:
        raise DomainError("division by zero")
    return BigReal._wrap(libmp.mpf_pow_int(v, k, bits_for(p), _RND), p)


def power(x: Number, y: Number, precision: Optional[int] = None) -> BigReal:
    """x**y for x > 0 and real y (x = 0 with y > 0 gives 0)."""
    p = _prec_of(x, precision)
    if isinstance(y, int):
        return pow_int(x, y, p)
    xv = big(x, p)
    if xv.is_zero() and big(y, p) > 0:
        return xv
    return exp(big(y, p) * ln(xv), p)


def const_pi(precision: int) -> BigReal:
    if precision < 1:
        raise ValueError("precision must be >= 1")
    return BigReal._wrap(libmp.mpf_pi(bits_for(precision), _RND), precision)


def const_ln2(precision: int) -> BigReal:
    return BigReal._wrap(libmp.mpf_ln2(bits_for(precision), _RND), precision)


_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}
_UNARY = {"sqrt": sqrt, "exp": exp, "ln": ln, "sin": sin, "cos": cos}


def elementary(op: str, *args):
    """Tag-dispatched elementary operation: add, sub, mul, div, sqrt, exp, ln,
    sin, cos, pow-int.  ``pow-int`` takes (base, integer exponent)."""
    if op in _BINARY:
        a, b = args
        return _BINARY[op](a, b)
    if op in _UNARY:
        (a,) = args
        return _UNARY[op](a)
    if op in ("pow-int", "pow_int"):
        a, k = args
        return pow_int(a, int(k))
    raise ValueError(f"unknown elementary op {op!r}")


# -- small shared records ---------------------------------------------------------


@dataclass(frozen=True)
class PrecisionPlan:
    target_digits: int
    guard_digits: int
    truncation_hint: Optional[int] = None

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be >= 1")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be >= 10")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @classmethod
    def for_target(cls, target_digits: int, extra_guard: int = 0, truncation_hint=None):
        """Default guard plus an operation-specific cancellation allowance."""
        guard = default_guard_digits(target_digits) + max(0, int(extra_guard))
        return cls(target_digits, guard, truncation_hint)


@dataclass(frozen=True)
class SeriesResult:
    value: BigReal
    terms: int
    error_bound: BigReal


def from_log(log_value: float, precision: int = 10) -> BigReal:
    """exp(log_value) without float underflow/overflow (for error bounds)."""
    return exp(BigReal(log_value, precision))


def cancellation_digits(peak_log10: float, result_log10: float) -> int:
    """Decimal digits lost summing terms of size 10**peak to a result of size 10**result."""
    if not math.isfinite(peak_log10) or not math.isfinite(result_log10):
        return 0
    return max(0, int(math.ceil(peak_log10 - result_log10)))


def ten_to(k: int, precision: int) -> BigReal:
    """10**k exactly representable for k >= 0, correctly rounded otherwise."""
    if k >= 0:
        return BigReal(10**k, precision)
    return BigReal(Fraction(1, 10 ** (-k)), precision)


@lru_cache(maxsize=None)
def _inv10(k: int, precision: int) -> BigReal:
    return ten_to(-k, precision)


def eps(digits: int, precision: Optional[int] = None) -> BigReal:
    """10**-digits tagged at ``precision`` (default: 20 digits is plenty for a threshold)."""
    return _inv10(digits, precision or 20)


def negligible(term: BigReal, partial: BigReal, digits: int) -> bool:
    """Stop-rule test: |term| below 10**-digits relative to |partial|, or
    absolutely when the partial sum itself is below 10**-digits."""
    lt = term.log10_abs()
    lp = partial.log10_abs()
    if lp < -digits:
        return lt < -digits
    return lt < lp - digits
