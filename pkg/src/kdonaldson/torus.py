"""Rational functions in torus characters and the two evaluation modes.

A torus variable ``x_i`` stands for ``e^{w_i / D}`` where ``w_i`` is one of the
basis weights (``eps1``, ``eps2``, then the Cartan parameters).  A *weight* is an
integer vector in units of ``1/D``, so ``x^w`` is a Laurent monomial.

The localization code works over an *algebra* that knows how to build the two
kinds of building block it needs, ``e^{w}`` and ``1 - e^{-w}``:

* :class:`ExactAlgebra` returns :class:`TorusFunction` values, exact reduced
  fractions of integer polynomials (backed by FLINT multivariate polynomials).
* :class:`PointAlgebra` returns exact rationals, the value at a fixed rational
  point.  Agreement at several random points is a Schwartz-Zippel identity test.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

import flint
from gmpy2 import mpq

from .gaussian import GaussianRational
from .series import INF, TruncatedSeries

__all__ = [
    "DEFAULT_D",
    "LatticeError",
    "TorusFunction",
    "ExactAlgebra",
    "PointAlgebra",
    "to_lattice",
    "random_point",
]

DEFAULT_D = 24


class LatticeError(ValueError):
    """A weight is not a multiple of 1/D."""


def to_lattice(form: Sequence, D: int) -> Tuple[int, ...]:
    """Convert a rational linear form into integer D-units."""
    out = []
    for c in form:
        v = Fraction(c) * D
        if v.denominator != 1:
            raise LatticeError(
                f"weight {tuple(str(Fraction(x)) for x in form)} is not in (1/{D})Z; use a larger D")
        out.append(int(v))
    return tuple(out)


def _ctx(nvars: int):
    names = tuple(f"x{i}" for i in range(nvars))
    return flint.fmpz_mpoly_ctx.get(names, "lex")


def _split(w: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    pos = tuple(max(c, 0) for c in w)
    neg = tuple(max(-c, 0) for c in w)
    return pos, neg


class TorusFunction:
    """``x^shift * num / den`` with ``num``, ``den`` coprime integer polynomials.

    ``den`` has positive leading coefficient and neither polynomial has a
    monomial factor (those live in ``shift``).
    """

    __slots__ = ("ctx", "D", "num", "den", "shift")

    def __init__(self, ctx, D: int, num, den, shift: Tuple[int, ...], reduce: bool = True):
        self.ctx = ctx
        self.D = D
        self.num = num
        self.den = den
        self.shift = tuple(int(x) for x in shift)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            self._normalize()

    # -- normalization -------------------------------------------------
    def _normalize(self) -> None:
        num, den, shift = self.num, self.den, list(self.shift)
        if num.is_zero():
            self.num = num
            self.den = self.ctx.from_dict({(0,) * self.ctx.nvars(): 1})
            self.shift = (0,) * self.ctx.nvars()
            return
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        for poly, sign in ((num, 1), (den, -1)):
            tc = poly.term_content()
            exps = tc.monoms()[0]
            if any(exps):
                for i, e in enumerate(exps):
                    shift[i] += sign * e
        num = self._strip_monomial(num)
        den = self._strip_monomial(den)
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.num, self.den, self.shift = num, den, tuple(int(x) for x in shift)

    def _strip_monomial(self, poly):
        tc = poly.term_content()
        exps = tc.monoms()[0]
        if not any(exps):
            return poly
        mono = self.ctx.from_dict({exps: 1})
        return poly / mono

    # -- construction ---------------------------------------------------
    @classmethod
    def constant(cls, ctx, D: int, c) -> "TorusFunction":
        c = Fraction(c)
        n = ctx.nvars()
        zero = (0,) * n
        return cls(ctx, D, ctx.from_dict({zero: c.numerator}) if c else ctx.from_dict({}),
                   ctx.from_dict({zero: c.denominator}), zero)

    # -- arithmetic -----------------------------------------------------
    def _mono(self, exps: Tuple[int, ...]):
        return self.ctx.from_dict({exps: 1})

    def _coerce(self, other) -> "TorusFunction":
        if isinstance(other, TorusFunction):
            return other
        if isinstance(other, (int, Fraction, type(mpq(0)))):
            return TorusFunction.constant(self.ctx, self.D, Fraction(int(mpq(other).numerator), int(mpq(other).denominator)))
        raise TypeError(f"cannot combine TorusFunction with {type(other)}")

    def __add__(self, other) -> "TorusFunction":
        other = self._coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        da = tuple(a - c for a, c in zip(self.shift, s))
        db = tuple(b - c for b, c in zip(other.shift, s))
        if self.den == other.den:
            num = self.num * self._mono(da) + other.num * self._mono(db)
            den = self.den
        else:
            g = self.den.gcd(other.den)
            ad, bd = self.den / g, other.den / g
            num = self.num * self._mono(da) * bd + other.num * self._mono(db) * ad
            den = ad * other.den
        return TorusFunction(self.ctx, self.D, num, den, s)

    __radd__ = __add__

    def __neg__(self) -> "TorusFunction":
        return TorusFunction(self.ctx, self.D, -self.num, self.den, self.shift, reduce=False)

    def __sub__(self, other) -> "TorusFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TorusFunction":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TorusFunction":
        other = self._coerce(other)
        s = tuple(a + b for a, b in zip(self.shift, other.shift))
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        num = (self.num / g1) * (other.num / g2)
        den = (self.den / g2) * (other.den / g1)
        out = TorusFunction(self.ctx, self.D, num, den, s, reduce=False)
        if den.leading_coefficient() < 0:
            out.num, out.den = -num, -den
        if num.is_zero():
            out._normalize()
        return out

    __rmul__ = __mul__

    def inverse(self) -> "TorusFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero TorusFunction")
        return TorusFunction(self.ctx, self.D, self.den, self.num, tuple(-c for c in self.shift))

    def __truediv__(self, other) -> "TorusFunction":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "TorusFunction":
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("TorusFunction is not hashable")

    # -- substitution and evaluation -------------------------------------
    def substitute_weights(self, images: Sequence[Sequence[int]], ctx=None) -> "TorusFunction":
        """Replace ``x_i`` by the Laurent monomial ``y^{images[i]}`` in a new context."""
        ctx = ctx or self.ctx
        n = ctx.nvars()

        def image_poly(poly):
            lo = [0] * n
            terms = []
            for exps, c in poly.to_dict().items():
                img = [sum(e * images[i][j] for i, e in enumerate(exps)) for j in range(n)]
                lo = [min(a, b) for a, b in zip(lo, img)]
                terms.append((img, c))
            d = {}
            for img, c in terms:
                key = tuple(a - b for a, b in zip(img, lo))
                d[key] = d.get(key, 0) + int(c)
            return ctx.from_dict({k: v for k, v in d.items() if v}), lo

        num, lo_n = image_poly(self.num)
        den, lo_d = image_poly(self.den)
        shift = [sum(e * images[i][j] for i, e in enumerate(self.shift)) for j in range(n)]
        shift = [s + a - b for s, a, b in zip(shift, lo_n, lo_d)]
        return TorusFunction(ctx, self.D, num, den, tuple(shift))

    def evaluate(self, point: Sequence) -> mpq:
        """Exact value with ``x_i = point[i]`` (nonzero rationals)."""
        pt = [mpq(p) for p in point]

        def ev(poly):
            total = mpq(0)
            for exps, c in poly.to_dict().items():
                term = mpq(int(c))
                for x, e in zip(pt, exps):
                    if e:
                        term *= x ** int(e)
                total += term
            return total

        value = ev(self.num) / ev(self.den)
        for x, e in zip(pt, self.shift):
            if e:
                value *= x ** e
        return value

    def laurent(self, slopes: Sequence[Fraction], constants: Sequence, order: int) -> Tuple[int, List[Fraction]]:
        """Laurent expansion after ``x_i -> constants[i] * exp(slopes[i] * eps)``.

        Returns ``(v, coeffs)`` meaning ``sum_j coeffs[j] eps^{v+j}`` exact for
        all exponents ``<= order``.
        """
        slopes = [Fraction(s) for s in slopes]
        consts = [Fraction(c) for c in constants]

        def grouped(poly, extra):
            groups: Dict[Fraction, Fraction] = {}
            for exps, c in poly.to_dict().items():
                full = [int(e) + int(x) for e, x in zip(exps, extra)]
                s = sum((e * sl for e, sl in zip(full, slopes)), Fraction(0))
                val = Fraction(int(c))
                for e, k in zip(full, consts):
                    if e:
                        val *= k ** e
                groups[s] = groups.get(s, Fraction(0)) + val
            return groups

        def series(groups, n):
            out = []
            for j in range(n):
                out.append(sum((a * s ** j for s, a in groups.items()), Fraction(0)) / factorial(j))
            return out

        ng = grouped(self.num, self.shift)
        dg = grouped(self.den, [0] * len(self.shift))
        n = max(order + 4, 4)
        while True:
            den = series(dg, n)
            v = next((j for j, c in enumerate(den) if c), None)
            if v is not None:
                break
            n *= 2
            if n > 4096:
                raise ValueError("denominator vanishes identically along the ray")
        length = order + v + 1
        if length <= 0:
            return order + 1, []
        num = series(ng, length)
        den = series(dg, length + v)[v:]
        # den[0] != 0: power-series division
        inv0 = 1 / den[0]
        out: List[Fraction] = []
        for j in range(length):
            acc = num[j] - sum((out[i] * den[j - i] for i in range(max(0, j - len(den) + 1), j)), Fraction(0))
            out.append(acc * inv0)
        return -v, out

    # -- output -----------------------------------------------------------
    def _poly_terms(self, poly, extra):
        terms = []
        for exps, c in sorted(poly.to_dict().items()):
            terms.append([[int(e) + x for e, x in zip(exps, extra)], str(int(c))])
        return terms

    def to_json(self) -> dict:
        zero = [0] * len(self.shift)
        return {
            "D": self.D,
            "numerator": self._poly_terms(self.num, self.shift),
            "denominator": self._poly_terms(self.den, zero),
        }

    def __repr__(self) -> str:
        return f"TorusFunction(x^{self.shift} * ({self.num}) / ({self.den}))"


class ExactAlgebra:
    """Builds exact :class:`TorusFunction` values."""

    mode = "exact"

    def __init__(self, nvars: int, D: int = DEFAULT_D):
        self.nvars = nvars
        self.D = D
        self.ctx = _ctx(nvars)
        self._one = TorusFunction.constant(self.ctx, D, 1)
        self._zero = TorusFunction.constant(self.ctx, D, 0)

    def one(self) -> TorusFunction:
        return self._one

    def zero(self) -> TorusFunction:
        return self._zero

    def const(self, c) -> TorusFunction:
        return TorusFunction.constant(self.ctx, self.D, c)

    def exp(self, w: Sequence[int]) -> TorusFunction:
        """``e^{w}`` for a weight in D-units."""
        n = self.nvars
        return TorusFunction(self.ctx, self.D, self.ctx.from_dict({(0,) * n: 1}),
                             self.ctx.from_dict({(0,) * n: 1}), tuple(w), reduce=False)

    def one_minus_exp_neg(self, w: Sequence[int]) -> TorusFunction:
        """``1 - e^{-w}`` as ``x^{-pos} (x^{pos} - x^{neg})`` where ``w = pos - neg``."""
        pos, neg = _split(w)
        poly = self.ctx.from_dict({pos: 1}) - self.ctx.from_dict({neg: 1}) if pos != neg else self.ctx.from_dict({})
        if poly.is_zero():
            raise ZeroDivisionError(f"factor 1 - e^(-w) vanishes identically for w = {tuple(w)}")
        return TorusFunction(self.ctx, self.D, poly, self.ctx.from_dict({(0,) * self.nvars: 1}),
                             tuple(-c for c in pos))

    def product_of_factors(self, ws: Iterable[Sequence[int]]) -> TorusFunction:
        """``prod (1 - e^{-w})`` built as a single polynomial (no gcds)."""
        poly = self.ctx.from_dict({(0,) * self.nvars: 1})
        shift = [0] * self.nvars
        for w in ws:
            pos, neg = _split(w)
            if pos == neg:
                raise ZeroDivisionError(f"factor 1 - e^(-w) vanishes identically for w = {tuple(w)}")
            poly = poly * (self.ctx.from_dict({pos: 1}) - self.ctx.from_dict({neg: 1}))
            shift = [s - p for s, p in zip(shift, pos)]
        return TorusFunction(self.ctx, self.D, poly, self.ctx.from_dict({(0,) * self.nvars: 1}), tuple(shift))

    def term(self, coeff, mono: Sequence[int], factors: Iterable[Sequence[int]]) -> TorusFunction:
        """``coeff * e^{mono} / prod (1 - e^{-w})``."""
        den = self.product_of_factors(factors)
        c = Fraction(coeff)
        n = self.nvars
        num = self.ctx.from_dict({(0,) * n: c.numerator})
        shift = tuple(m - s for m, s in zip(mono, den.shift))
        return TorusFunction(self.ctx, self.D, num, den.num * c.denominator, shift)

    def total(self, values: List[TorusFunction]) -> TorusFunction:
        """Pairwise (tree) summation keeps intermediate denominators small."""
        vals = list(values)
        if not vals:
            return self.zero()
        while len(vals) > 1:
            nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
            if len(vals) % 2:
                nxt.append(vals[-1])
            vals = nxt
        return vals[0]

    def is_zero(self, x: TorusFunction) -> bool:
        return x.is_zero()


class PointAlgebra:
    """Evaluates every building block at a fixed rational point."""

    mode = "random"

    def __init__(self, point: Sequence, D: int = DEFAULT_D):
        self.point = tuple(mpq(p) for p in point)
        self.nvars = len(self.point)
        self.D = D

    def one(self):
        return mpq(1)

    def zero(self):
        return mpq(0)

    def const(self, c):
        c = Fraction(c)
        return mpq(c.numerator, c.denominator)

    def exp(self, w):
        v = mpq(1)
        for x, e in zip(self.point, w):
            if e:
                v *= x ** e
        return v

    def one_minus_exp_neg(self, w):
        v = 1 - self.exp(tuple(-c for c in w))
        if not v:
            raise ZeroDivisionError(f"random point hits the hyperplane of w = {tuple(w)}; reseed")
        return v

    def term(self, coeff, mono, factors):
        den = mpq(1)
        for w in factors:
            den *= self.one_minus_exp_neg(w)
        return self.const(coeff) * self.exp(mono) / den

    def total(self, values):
        s = mpq(0)
        for v in values:
            s += v
        return s

    def is_zero(self, x) -> bool:
        return not x


def random_point(nvars: int, rng: random.Random, height: int = 97) -> Tuple[mpq, ...]:
    """A random point with coordinates ``p/q`` away from 0 and +-1."""
    pts = []
    while len(pts) < nvars:
        p = rng.randint(2, height)
        q = rng.randint(2, height)
        x = mpq(p, q) if rng.random() < 0.5 else mpq(q, p)
        if x not in (0, 1, -1) and x not in pts:
            pts.append(x)
    return tuple(pts)


def laurent_to_series(pairs: Dict[int, Tuple[int, List[Fraction]]], order: int, lambda_order: int) -> TruncatedSeries:
    """Pack ``{lam_degree: (v, coeffs)}`` Laurent data into a TruncatedSeries (eps in the p slot)."""
    terms = {}
    caps = []
    for d in range(lambda_order + 1):
        if d in pairs:
            v, coeffs = pairs[d]
            for j, c in enumerate(coeffs):
                if c and v + j <= order:
                    terms[(d, v + j)] = GaussianRational(c)
            caps.append(order)
        else:
            caps.append(INF)
    return TruncatedSeries.from_terms(terms, lambda_order, caps)
