"""Binary fixed-point reals of arbitrary size.

A value is ``raw * 2**-frac_bits`` with ``raw`` a Python int.  Binary
operations align both operands to the larger ``frac_bits`` first.  Addition
and subtraction are exact; multiplication, division and square root
truncate toward zero at the result's ``frac_bits``.

    >>> a = bf_from_decimal("1.5", 8)
    >>> a.magnitude, a.frac_bits
    (384, 8)
    >>> bf_to_decimal(bf_div(BigFixed(1 << 64, 64), BigFixed(3 << 64, 64)), 6)
    '0.333333'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError

__all__ = [
    "BigFixed",
    "PrecisionPlan",
    "isqrt",
    "bf_from_decimal",
    "bf_from_value",
    "bf_add",
    "bf_sub",
    "bf_mul",
    "bf_div",
    "bf_sqrt",
    "bf_to_decimal",
    "plan_precision",
    "frac_bits_for",
]

LOG2_10 = math.log2(10)
GUARD_BITS = 64

_DECIMAL = re.compile(r"([+-]?)(\d+)(?:\.(\d+))?")


def _trunc_div(num: int, den: int) -> int:
    q = abs(num) // abs(den)
    return q if (num < 0) == (den < 0) else -q


def isqrt(n: int) -> int:
    """floor(sqrt(n)) by Newton iteration started above the root."""
    if n < 0:
        raise DomainError("square root of a negative integer")
    if n < 2:
        return n
    # seed from the top ~100 bits through a double, rounded up
    shift = max(0, n.bit_length() - 100) & ~1
    x = (int(math.sqrt(n >> shift)) + 2) << (shift >> 1)
    while True:
        y = (x + n // x) >> 1
        if y >= x:
            return x
        x = y


class BigFixed:
    """Immutable fixed-point real ``sign * magnitude * 2**-frac_bits``."""

    __slots__ = ("_raw", "_frac_bits")

    def __init__(self, raw: int, frac_bits: int):
        if frac_bits < 0:
            raise ValueError("frac_bits must be non-negative")
        object.__setattr__(self, "_raw", int(raw))
        object.__setattr__(self, "_frac_bits", int(frac_bits))

    def __setattr__(self, name, value):
        raise AttributeError("BigFixed is immutable")

    @classmethod
    def from_parts(cls, sign: int, magnitude: int, frac_bits: int) -> "BigFixed":
        if magnitude < 0 or sign not in (-1, 0, 1) or (sign == 0) != (magnitude == 0):
            raise ValueError("inconsistent sign/magnitude")
        return cls(sign * magnitude, frac_bits)

    @property
    def raw(self) -> int:
        return self._raw

    @property
    def frac_bits(self) -> int:
        return self._frac_bits

    @property
    def sign(self) -> int:
        return (self._raw > 0) - (self._raw < 0)

    @property
    def magnitude(self) -> int:
        return abs(self._raw)

    def with_frac_bits(self, frac_bits: int) -> "BigFixed":
        """Re-express at another precision, truncating toward zero."""
        d = frac_bits - self._frac_bits
        if d >= 0:
            return BigFixed(self._raw << d, frac_bits)
        return BigFixed(_trunc_div(self._raw, 1 << -d), frac_bits)

    def to_fraction(self) -> Fraction:
        return Fraction(self._raw, 1 << self._frac_bits)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self):
        return f"BigFixed({bf_to_decimal(self, 20)}, frac_bits={self._frac_bits})"

    def __str__(self):
        return bf_to_decimal(self, 20)

    # arithmetic; plain ints are promoted at this operand's precision
    def _coerce(self, other):
        if isinstance(other, BigFixed):
            return other
        if isinstance(other, int):
            return BigFixed(other << self._frac_bits, self._frac_bits)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_add(self, other)

    def __radd__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_add(other, self)

    def __sub__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_mul(other, self)

    def __truediv__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else bf_div(other, self)

    def __neg__(self):
        return BigFixed(-self._raw, self._frac_bits)

    def __abs__(self):
        return BigFixed(abs(self._raw), self._frac_bits)

    def __bool__(self):
        return self._raw != 0

    def _cmp(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None
        a, b = _align(self, other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if isinstance(other, float):
            return self.to_fraction() == Fraction(other)
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __hash__(self):
        return hash(self.to_fraction())

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


def _align(a: BigFixed, b: BigFixed):
    fa, fb = a.frac_bits, b.frac_bits
    if fa == fb:
        return a.raw, b.raw
    if fa > fb:
        return a.raw, b.raw << (fa - fb)
    return a.raw << (fb - fa), b.raw


def bf_add(a: BigFixed, b: BigFixed) -> BigFixed:
    x, y = _align(a, b)
    return BigFixed(x + y, max(a.frac_bits, b.frac_bits))


def bf_sub(a: BigFixed, b: BigFixed) -> BigFixed:
    x, y = _align(a, b)
    return BigFixed(x - y, max(a.frac_bits, b.frac_bits))


def bf_mul(a: BigFixed, b: BigFixed) -> BigFixed:
    f = max(a.frac_bits, b.frac_bits)
    x, y = _align(a, b)
    return BigFixed(_trunc_div(x * y, 1 << f), f)


def bf_div(a: BigFixed, b: BigFixed) -> BigFixed:
    if not b.raw:
        raise ZeroDivisionError("BigFixed division by zero")
    f = max(a.frac_bits, b.frac_bits)
    x, y = _align(a, b)
    return BigFixed(_trunc_div(x << f, y), f)


def bf_sqrt(a: BigFixed) -> BigFixed:
    """Largest r on the 2**-F grid with r*r <= a."""
    if a.raw < 0:
        raise DomainError("square root of a negative value")
    return BigFixed(isqrt(a.raw << a.frac_bits), a.frac_bits)


def bf_from_decimal(text: str, frac_bits: int) -> BigFixed:
    """Parse ``[-]digits[.digits]``, truncating toward zero."""
    m = _DECIMAL.fullmatch(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise ParseError(f"not a decimal number: {text!r}")
    sign, whole, frac = m.groups()
    frac = frac or ""
    num = int(whole + frac)
    raw = (num << frac_bits) // 10 ** len(frac)
    return BigFixed(-raw if sign == "-" else raw, frac_bits)


def bf_from_value(value, frac_bits: int) -> BigFixed:
    """Convert int, float, Fraction, decimal text or BigFixed; floats are exact when F allows."""
    if isinstance(value, BigFixed):
        return value.with_frac_bits(frac_bits)
    if isinstance(value, str):
        return bf_from_decimal(value, frac_bits)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return BigFixed(value << frac_bits, frac_bits)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"cannot represent {value!r} in fixed point")
        value = Fraction(value)
    if isinstance(value, Fraction):
        return BigFixed(_trunc_div(value.numerator << frac_bits, value.denominator), frac_bits)
    raise TypeError(f"cannot convert {type(value).__name__} to BigFixed")


def _scaled_floor(n: int, frac_bits: int, k: int) -> int:
    # floor(n * 2**-frac_bits * 10**k) for n >= 0
    if k >= 0:
        return (n * 10**k) >> frac_bits
    return (n >> frac_bits) // 10 ** (-k)


def bf_to_decimal(a: BigFixed, digits: int) -> str:
    """First ``digits`` significant decimal digits, truncated, no exponent."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    n, f = a.magnitude, a.frac_bits
    if n == 0:
        return "0" if digits == 1 else "0." + "0" * (digits - 1)
    e = math.floor((n.bit_length() - 1 - f) * math.log10(2))
    lo, hi = 10 ** (digits - 1), 10**digits
    while True:
        k = digits - 1 - e
        m = _scaled_floor(n, f, k)
        if m >= hi:
            e += 1
        elif m < lo:
            e -= 1
        else:
            break
    s = str(m)
    if k <= 0:
        body = s + "0" * (-k)
    elif k < digits:
        body = s[: digits - k] + "." + s[digits - k :]
    else:
        body = "0." + "0" * (k - digits) + s
    return ("-" if a.raw < 0 else "") + body


@dataclass(frozen=True)
class PrecisionPlan:
    target_digits: int
    iterations: int
    frac_bits: int


def frac_bits_for(x: float, iterations: int, digits: int) -> int:
    """Fraction bits so that ``digits`` survive ``iterations`` nestings at ``x``."""
    return math.ceil(iterations * math.log2(2 * x) + digits * LOG2_10 + GUARD_BITS)


def plan_precision(x: float, target_digits: int) -> PrecisionPlan:
    """Minimal iteration count and fraction bits for ``target_digits`` of pi_x.

    The residual shrinks by about 1/(2x) per nesting, and an absolute error of
    2**-F in it is amplified by (2x)**i in the estimate.
    """
    if not x > 1:
        raise DomainError(f"x must exceed 1, got {x}")
    if target_digits < 1:
        raise ValueError("target_digits must be >= 1")
    iterations = math.ceil(target_digits * LOG2_10 / math.log2(2 * x))
    return PrecisionPlan(target_digits, iterations, frac_bits_for(x, iterations, target_digits))
