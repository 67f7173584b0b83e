"""Euler characteristics of determinant bundles: the projective plane via
wallcrossing on its blowup, and closed forms for K3 and abelian surfaces.

For the plane, ``chi(M(c1, d), mu(H^n))`` is a pure sum of wall terms on the
blowup ``Y`` (the chamber near ``F = H - E`` is empty).  Type E walls
``2mH - (2l+1)E`` give ``c1 = 0`` and type H walls ``(2m-1)H - 2lE`` give
``c1 = H`` (with the line bundle ``H^{2n}``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .gaussian import GaussianRational
from .series import TruncatedSeries, binomial_pow, series_exp
from .theta import SWSeries, theta_constant
from .toric import ToricSurface, blowup_p2, p2
from .wallcross import WallInput, _to_int, degree_window, delta_modular

__all__ = [
    "HilbertSeriesResult",
    "wall_sets_p2",
    "wall_input_p2",
    "chi_series",
    "chi_series_from_walls",
    "hilbert_numerator",
    "admissible_degree",
    "golden_tables",
    "k3_chi",
    "k3_duality_check",
    "hilb_points_chi",
    "abelian_chi",
    "p2",
    "blowup_p2",
]


def _c1_key(c1_type) -> str:
    key = str(c1_type).upper()
    if key in ("0", "E"):
        return "0"
    if key == "H":
        return "H"
    raise ValueError(f"c1 type must be 0/E or H, got {c1_type!r}")


# ---------------------------------------------------------------- walls
def _wall_shift(key: str, l: int, m: int) -> int:
    """``-xi^2`` of the wall."""
    return 4 * (l * l + l - m * m) + 1 if key == "0" else 4 * (l * l - m * m + m) - 1


def _wall_class(key: str, l: int, m: int) -> Tuple[int, int]:
    """``(a, b)`` with ``xi = a H + b E``."""
    return (2 * m, -(2 * l + 1)) if key == "0" else (2 * m - 1, -2 * l)


def wall_input_p2(c1_type, l: int, m: int, n: int) -> WallInput:
    """Wall data on the blowup for ``xi(l, m)`` and ``v = v(H^n)`` (``H^{2n}`` for type H)."""
    key = _c1_key(c1_type)
    Y = blowup_p2()
    H, E = Y.divisor("H"), Y.divisor("E")
    a, b = _wall_class(key, l, m)
    xi = tuple(a * x + b * y for x, y in zip(H, E))
    power = n if key == "0" else 2 * n
    v1 = tuple(-power * x for x in H)
    return WallInput.from_surface(Y, xi, v1)


def wall_sets_p2(c1_type, d: int, n: Optional[int] = None) -> List[Tuple[int, int]]:
    """Walls ``(l, m)``, ``l >= m > 0``, that can contribute to Lambda^d on the blowup.

    ``d`` is the blowup degree (``d + 1`` for the plane's ``c1 = 0``).  Without
    ``n`` only the lower end ``-xi^2 - 3 <= d`` of the window is used; with ``n``
    the full window is applied.
    """
    key = _c1_key(c1_type)
    out = []
    l = 1
    while 4 * l + 1 - 3 <= d + (0 if key == "0" else 2):
        for m in range(1, l + 1):
            lo = _wall_shift(key, l, m) - 3
            if lo > d or (d - lo) % 4:
                continue
            if n is not None:
                lo2, hi2 = degree_window(wall_input_p2(key, l, m, n))
                if not lo2 <= d <= hi2:
                    continue
            out.append((l, m))
        l += 1
    return out


# ---------------------------------------------------------------- chi series
@lru_cache(maxsize=8)
def _p2_context(L: int):
    sw = SWSeries(L, L + 1)
    C = 5 * L + 13
    t00 = theta_constant((0, 0), C, L)
    t10 = theta_constant((1, 0), C, L)
    t01 = theta_constant((0, 1), C, L)
    lam = TruncatedSeries.monomial(1, 1, 0, L)
    disc = TruncatedSeries.one(L) + sw.u + lam ** 4
    base = (t01 ** 8) * ((t00 ** 3) * (t10 ** 3)).inverse() * 8 * binomial_pow(disc, Fraction(-1, 2), leading_root=1)
    return sw, base


def chi_series(c1_type, n: int, d_max: int) -> List[int]:
    """``[chi(M(c1, d), mu(H^n)) for d = 0..d_max]`` on the plane (``H^{2n}`` when c1 = H).

    Evaluates the closed q-series formula: the coefficient of ``q^0`` of a
    sum over walls of ``q^{-xi^2/8} e^{j h/2} exp(T)^N`` times the common
    factor ``8 theta01^8 / (theta00^3 theta10^3) (1 + u + Lambda^4)^{-1/2}``.
    For ``c1 = 0`` the formula carries an extra ``1/Lambda``.
    """
    key = _c1_key(c1_type)
    if n < 0:
        raise ValueError("n must be >= 0")
    shift = 1 if key == "0" else 0
    L = d_max + shift
    sw, base = _p2_context(L)
    N = n * n + 6 * n + 8 if key == "0" else 4 * n * n + 12 * n + 8
    R = series_exp(sw.T * N) * base
    h = sw.h
    acc = [GaussianRational(0)] * (L + 1)
    # R e^{j h/2} has p-valuation >= -3 - k at Lambda^k, so only s <= L + 3 matters
    quiet = 0
    l = 1
    while quiet < 2:
        hit = False
        for m in range(1, l + 1):
            s = _wall_shift(key, l, m)
            if s > L + 3:
                continue
            hit = True
            if key == "0":
                j = 2 * (m * (n + 3) - l) - 1
                sign = (-1) ** (l + m + 1)
            else:
                j = (2 * m - 1) * (2 * n + 3) - 2 * l
                sign = (-1) ** (l + m)
            X = R * series_exp(h * GaussianRational(mpq(j, 2)))
            for k in range(L + 1):
                acc[k] = acc[k] + X.coeff(k, -s) * sign
        quiet = 0 if hit else quiet + 1
        l += 1
    return [_to_int(acc[d + shift], f"chi at d={d}") for d in range(d_max + 1)]


def chi_series_from_walls(c1_type, n: int, d_max: int) -> List[int]:
    """The same numbers assembled wall by wall from :func:`delta_modular`."""
    key = _c1_key(c1_type)
    shift = 1 if key == "0" else 0
    L = d_max + shift
    out = [0] * (d_max + 1)
    l = 1
    while _wall_shift(key, l, l) - 3 <= L:
        for m in range(1, l + 1):
            if _wall_shift(key, l, m) - 3 > L:
                continue
            delta = delta_modular(wall_input_p2(key, l, m, n), L)
            for d, c in delta.items():
                if 0 <= d - shift <= d_max:
                    out[d - shift] += c
        l += 1
    return out


# ---------------------------------------------------------------- Hilbert series
@dataclass(frozen=True)
class HilbertSeriesResult:
    c1_type: str
    d: int
    numerator: Tuple[int, ...]
    denominator_exponent: int
    samples: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def degree(self) -> int:
        return len(self.numerator) - 1

    @property
    def palindromic(self) -> bool:
        return self.numerator == tuple(reversed(self.numerator))

    def to_json(self) -> dict:
        return {"c1": self.c1_type, "d": self.d, "numerator": list(self.numerator),
                "denominator_exponent": self.denominator_exponent}

    def label(self) -> str:
        name = "P" if self.c1_type == "0" else "Q"
        terms = []
        for k, c in enumerate(self.numerator):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            coeff = str(c) if (c != 1 or k == 0) else ""
            terms.append(coeff + mono)
        return f"{name}_{self.d} = " + (" + ".join(terms) if terms else "0")


def admissible_degree(c1_type, d: int) -> bool:
    """``d = 4 c2 - c1^2 - 3``: ``d = 1 mod 4`` for ``c1 = 0`` and ``d = 0 mod 4`` for ``c1 = H``."""
    key = _c1_key(c1_type)
    return d >= 0 and d % 4 == (1 if key == "0" else 0)


def numerator_degree(c1_type, d: int) -> int:
    key = _c1_key(c1_type)
    return max(d - 5, 0) if key == "0" else max(d - 2, 0)


def hilbert_numerator(c1_type, d: int, n_samples: Optional[int] = None) -> HilbertSeriesResult:
    """``(1 - t)^{d+1} sum_n chi(M(c1, d), mu(H^n)) t^n`` as an integer polynomial.

    Samples ``n = 0 .. deg + 2`` and checks two more; any nonzero coefficient
    above the expected degree raises.
    """
    key = _c1_key(c1_type)
    if not admissible_degree(key, d):
        raise ValueError(f"d={d} is not a dimension index for c1 = {key}")
    deg = numerator_degree(key, d)
    count = n_samples if n_samples is not None else deg + 5
    if count <= deg:
        raise ValueError("need more samples than the numerator degree")
    chis = [chi_series(key, n, d)[d] for n in range(count)]
    num = []
    for k in range(count):
        num.append(sum((-1) ** j * comb(d + 1, j) * chis[k - j] for j in range(min(k, d + 1) + 1)))
    if any(num[deg + 1:]):
        raise ArithmeticError(f"numerator for d={d} exceeds degree {deg}: {num}")
    res = HilbertSeriesResult(key, d, tuple(num[: deg + 1]), d + 1, tuple(chis))
    stated = d >= (5 if key == "0" else 4)
    if stated and not res.palindromic:
        raise ArithmeticError(f"numerator for d={d} is not palindromic: {res.numerator}")
    return res


def golden_tables() -> dict:
    """The printed P_d and Q_d numerators shipped as a fixture."""
    text = resources.files("kdonaldson").joinpath("fixtures/v1/p2_hilbert.json").read_text()
    return json.loads(text)


# ---------------------------------------------------------------- K3 and abelian
def _binom(top: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient with integer ``k``."""
    if k < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(top) - i
    return out / factorial(k)


def _as_int(x: Fraction, what: str) -> int:
    if Fraction(x).denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {x}")
    return int(x)


def k3_chi(rk_c: int, Delta_c: int, rk_v: int, Delta_v: int) -> int:
    """``chi(M(c), lambda(v))`` on a K3 surface for the Mukai-type closed form."""
    bottom = Fraction(Delta_c, 2) - rk_c ** 2 + 1
    top = bottom + Fraction(Delta_v, 2) - rk_v ** 2 + 1
    return _as_int(_binom(top, _as_int(bottom, "dimension index")), "K3 Euler characteristic")


def k3_duality_check(rk_c: int, Delta_c: int, rk_v: int, Delta_v: int) -> dict:
    """``chi(M(c), lambda(-v)) = chi(M(v), lambda(-c))``; the discriminant is sign invariant."""
    lhs = k3_chi(rk_c, Delta_c, rk_v, Delta_v)
    rhs = k3_chi(rk_v, Delta_v, rk_c, Delta_c)
    return {"holds": lhs == rhs, "lhs": lhs, "rhs": rhs}


def hilb_points_chi(n: int, q_value: int) -> int:
    """``chi(X^[n], lambda)`` on a K3 with Beauville form value ``q``: binom(q/2 + n + 1, n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _as_int(_binom(Fraction(q_value, 2) + n + 1, n), "Hilbert scheme Euler characteristic")


def abelian_chi(Delta_c: int, rk_v: int, Delta_v: int) -> int:
    """Rank-one sheaves on an abelian surface with fixed determinant."""
    if Delta_c == 0:
        return 1
    if Delta_c % 2:
        raise ValueError("Delta(c) must be even")
    ratio = Fraction(Delta_v + rk_v ** 2 * Delta_c, Delta_v + Delta_c)
    value = ratio * _binom(Fraction(Delta_v + Delta_c, 2), Delta_c // 2)
    return _as_int(value, "abelian Euler characteristic")
