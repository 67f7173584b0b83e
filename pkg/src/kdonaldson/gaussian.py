"""Exact Gaussian rationals a + b*i with arbitrary-precision rational parts."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from gmpy2 import mpq

__all__ = ["GaussianRational", "I", "ONE", "ZERO", "as_gaussian", "parse_rational"]


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def parse_rational(text: str) -> mpq:
    """Parse ``"num/den"`` or an integer string."""
    return mpq(text)


def _format_q(x: mpq) -> str:
    if x.denominator == 1:
        return f"{x.numerator}/1"
    return f"{x.numerator}/{x.denominator}"


def _rational_sqrt(x: mpq):
    """Return the nonnegative rational square root of ``x`` or None."""
    if x < 0:
        return None
    n, d = int(x.numerator), int(x.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


class GaussianRational:
    """Immutable exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other) -> bool:
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __add__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        return (-self) + other

    def __mul__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, b)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, mpq, Fraction)):
            o = _q(other)
            return GaussianRational._raw(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussianRational":
        if isinstance(other, (int, mpq, Fraction)):
            o = _q(other)
            if not o:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._raw(self.re / o, self.im / o)
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        return as_gaussian(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sqrt(self):
        """Return a Gaussian-rational square root, or None if there is none.

        Among the two roots the one with positive real part (or positive
        imaginary part when the real part vanishes) is returned.
        """
        a, b = self.re, self.im
        if not b:
            r = _rational_sqrt(a)
            if r is not None:
                return GaussianRational._raw(r, mpq(0))
            r = _rational_sqrt(-a)
            if r is not None:
                return GaussianRational._raw(mpq(0), r)
            return None
        modulus = _rational_sqrt(a * a + b * b)
        if modulus is None:
            return None
        x = _rational_sqrt((a + modulus) / 2)
        if x is None or not x:
            return None
        return GaussianRational._raw(x, b / (2 * x))

    def to_integer(self) -> int:
        if self.im or self.re.denominator != 1:
            raise ValueError(f"{self} is not a rational integer")
        return int(self.re.numerator)

    def to_json(self) -> dict:
        return {"re": _format_q(self.re), "im": _format_q(self.im)}

    @classmethod
    def from_json(cls, obj: dict) -> "GaussianRational":
        return cls._raw(parse_rational(obj["re"]), parse_rational(obj["im"]))

    def __repr__(self) -> str:
        if not self.im:
            return f"{self.re}"
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, mpq, Fraction)):
        return GaussianRational._raw(_q(x), mpq(0))
    if isinstance(x, complex):
        return NotImplemented
    return NotImplemented


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)
