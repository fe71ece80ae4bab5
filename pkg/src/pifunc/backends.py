"""Arithmetic backends for the nested-radical recurrences.

The recurrence code only uses ``+ - * /`` and comparisons on backend
numbers, plus the handful of methods below.  Two implementations exist:
hardware doubles and :class:`~pifunc.bigfixed.BigFixed`.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .bigfixed import BigFixed, bf_from_value, bf_sqrt
from .errors import DomainError

__all__ = ["DoubleBackend", "BigFixedBackend", "DOUBLE", "backend_from_name"]


class DoubleBackend:
    """IEEE-754 binary64."""

    kind = "double"
    unit_roundoff = 2.0**-53

    def num(self, value) -> float:
        if isinstance(value, BigFixed):
            return float(value)
        v = float(value)
        if math.isnan(v):
            raise DomainError("NaN argument")
        if not math.isfinite(v):
            raise OverflowError(f"{value!r} is not representable as a double")
        return v

    def sqrt(self, a: float) -> float:
        if a < 0:
            raise DomainError(f"square root of negative value {a!r}")
        return math.sqrt(a)

    def power(self, base: float, n: int) -> float:
        # float ** int raises OverflowError on overflow
        return base**n

    def to_float(self, a) -> float:
        return float(a)

    def rounding_error(self, value, residual, steps: int) -> float:
        """Bound on accumulated rounding in ``value`` after ``steps`` nestings."""
        return float(value) * self.unit_roundoff * (4 * steps + 8)

    def describe(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self):
        return "DoubleBackend()"


class BigFixedBackend:
    """Fixed point with ``frac_bits`` fraction bits."""

    kind = "bigfixed"

    def __init__(self, frac_bits: int):
        if frac_bits < 1:
            raise ValueError("frac_bits must be positive")
        self.frac_bits = int(frac_bits)

    def num(self, value) -> BigFixed:
        return bf_from_value(value, self.frac_bits)

    def sqrt(self, a: BigFixed) -> BigFixed:
        return bf_sqrt(a)

    def power(self, base: BigFixed, n: int) -> BigFixed:
        if n < 0:
            raise ValueError("negative exponent")
        result = self.num(1)
        for _ in range(n):
            result = result * base
        return result

    def to_float(self, a) -> float:
        return float(a)

    def rounding_error(self, value, residual, steps: int) -> BigFixed:
        # truncation of 2**-F per step in the residual is relative to the
        # residual itself, then halved by the square root; the running scale
        # picks up another 2**-F per multiply
        ulp = BigFixed(1, self.frac_bits)
        n = steps + 1
        rel = ulp * n / residual if residual > 0 else self.num(0)
        return value * rel + ulp * (2 * n)

    def describe(self) -> dict:
        return {"kind": self.kind, "frac_bits": self.frac_bits}

    def __repr__(self):
        return f"BigFixedBackend(frac_bits={self.frac_bits})"

    def __eq__(self, other):
        return isinstance(other, BigFixedBackend) and other.frac_bits == self.frac_bits

    def __hash__(self):
        return hash((self.kind, self.frac_bits))


DOUBLE = DoubleBackend()


def backend_from_name(name: str, frac_bits: int | None = None):
    if name == "double":
        return DOUBLE
    if name == "bigfixed":
        if frac_bits is None:
            raise ValueError("bigfixed backend needs frac_bits")
        return BigFixedBackend(frac_bits)
    raise ValueError(f"unknown backend {name!r}")


def as_fraction(value) -> Fraction:
    if isinstance(value, BigFixed):
        return value.to_fraction()
    return Fraction(value)
