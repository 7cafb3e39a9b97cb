"""Certified interval arithmetic over exact rationals.

An :class:`Enclosure` is a closed interval [lo, hi] with ``Fraction``
endpoints that is guaranteed to contain the mathematical value it stands
for.  Every operation rounds outward, so containment is never lost; there
is no floating point anywhere in this module.

Endpoints are kept small by ``round_outward``, which pads an interval to
a decimal grid.  Grids are powers of ten, so rounding the same value on a
finer grid always yields a sub-interval of the coarser rounding; derived
quantities computed at a higher precision therefore nest inside their
lower-precision counterparts.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Union[int, Fraction]


class Enclosure:
    """Closed interval [lo, hi] with exact rational endpoints, lo <= hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Rational, hi: Rational):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty enclosure: lo={lo} > hi={hi}")
        self.lo = lo
        self.hi = hi

    @classmethod
    def exact(cls, value: Rational) -> "Enclosure":
        v = Fraction(value)
        return cls(v, v)

    # -- basic queries ----------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Rational) -> bool:
        v = Fraction(value)
        return self.lo <= v <= self.hi

    def contains_enclosure(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"Enclosure({float(self.lo)!r}, {float(self.hi)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Enclosure)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "Enclosure":
        if isinstance(value, Enclosure):
            return value
        return Enclosure.exact(value)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other) -> "Enclosure":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        products = (
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        )
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"enclosure straddles zero: {self!r}")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Enclosure":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int) -> "Enclosure":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer exponents")
        if exponent == 0:
            return Enclosure.exact(1)
        lo_p, hi_p = self.lo**exponent, self.hi**exponent
        if self.lo >= 0:
            return Enclosure(lo_p, hi_p)
        if self.hi <= 0:
            return Enclosure(min(lo_p, hi_p), max(lo_p, hi_p))
        # interval straddles zero
        if exponent % 2 == 0:
            return Enclosure(0, max(lo_p, hi_p))
        return Enclosure(lo_p, hi_p)

    # -- set operations and rounding ----------------------------------------

    def intersect(self, other: "Enclosure") -> "Enclosure":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError(f"disjoint enclosures: {self!r}, {other!r}")
        return Enclosure(lo, hi)

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def round_outward(self, digits: int) -> "Enclosure":
        """Pad outward to the decimal grid of spacing 10**-digits."""
        scale = 10**digits
        lo = Fraction(_floor_frac(self.lo * scale), scale)
        hi = Fraction(_ceil_frac(self.hi * scale), scale)
        return Enclosure(lo, hi)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def sqrt_enclosure(x: Rational, digits: int) -> Enclosure:
    """Enclosure of sqrt(x) for rational x >= 0, width <= 10**-digits.

    Brackets sqrt(x) between consecutive points of the 10**-digits grid
    using integer square roots, so finer grids give nested intervals.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of negative value")
    if x == 0:
        return Enclosure.exact(0)
    scale = 10**digits
    scaled = x * scale * scale
    r = isqrt(scaled.numerator // scaled.denominator)
    lo = Fraction(r, scale)
    # (r+1)^2 > floor(scaled) implies r+1 > sqrt(scaled) unless scaled was
    # a perfect square hiding in the fractional part; +1 is always safe.
    hi = Fraction(r + 1, scale)
    if lo * lo == x:
        return Enclosure.exact(lo)
    return Enclosure(lo, hi)


def sqrt_interval(e: Enclosure, digits: int) -> Enclosure:
    """Enclosure of sqrt over an enclosure with nonnegative lower end."""
    return Enclosure(
        sqrt_enclosure(e.lo, digits).lo, sqrt_enclosure(e.hi, digits).hi
    )


_LN2_CACHE: dict[int, Enclosure] = {}


def _atanh_enclosure(t: Fraction, digits: int) -> Enclosure:
    """Enclosure of atanh(t) = sum t^(2i+1)/(2i+1) for 0 <= t < 1."""
    if not 0 <= t < 1:
        raise ValueError("atanh series needs 0 <= t < 1")
    if t == 0:
        return Enclosure.exact(0)
    tol = Fraction(1, 10 ** (digits + 2))
    total = Fraction(0)
    power = t
    t2 = t * t
    i = 0
    while True:
        term = power / (2 * i + 1)
        total += term
        # geometric tail bound: remaining terms < term * t^2 / (1 - t^2)
        tail = term * t2 / (1 - t2)
        if tail < tol:
            return Enclosure(total, total + tail).round_outward(digits)
        power *= t2
        i += 1


def ln2_enclosure(digits: int) -> Enclosure:
    if digits not in _LN2_CACHE:
        # ln 2 = 2 atanh(1/3)
        _LN2_CACHE[digits] = (2 * _atanh_enclosure(Fraction(1, 3), digits + 2)).round_outward(digits)
    return _LN2_CACHE[digits]


def ln_enclosure(x: Rational, digits: int) -> Enclosure:
    """Enclosure of the natural log of a rational x > 0.

    Reduces x = 2^k * m with m in [1, 2), then ln m = 2 atanh((m-1)/(m+1))
    with t <= 1/3, so the series converges geometrically.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of nonpositive value")
    k = 0
    while x >= 2:
        x /= 2
        k += 1
    while x < 1:
        x *= 2
        k -= 1
    t = (x - 1) / (x + 1)
    result = 2 * _atanh_enclosure(t, digits + 2)
    if k:
        result = result + k * ln2_enclosure(digits + 2)
    return result.round_outward(digits)
