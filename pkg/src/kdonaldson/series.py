"""Truncated bigraded series: power series in Lambda with Laurent coefficients in p.

An element is stored as one *strip* per Lambda-degree ``d``: a sparse map
``k -> GaussianRational`` for the coefficient of ``Lambda^d p^k``.  Every strip
carries a precision cap: coefficients with ``k <= cap`` are exact, the rest is
unknown.  Caps are propagated through every ring operation, so a coefficient
that was lost to truncation can never be read back as a silent zero.

``p`` is the atomic variable (``q = p**8`` in the modular pipeline), but the
same container is used for any auxiliary Laurent variable (``x``, ``y``, ``z``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from gmpy2 import mpq

from .gaussian import ONE, ZERO, GaussianRational, as_gaussian

__all__ = [
    "INF",
    "TruncationError",
    "NonUnitError",
    "TruncatedSeries",
    "UniSeries",
    "series_exp",
    "series_log",
    "binomial_pow",
    "substitute",
    "change_var_residue",
    "coeff_extract",
]

INF = math.inf

Strip = Dict[int, GaussianRational]


class TruncationError(ValueError):
    """A coefficient was requested beyond the known precision."""


class NonUnitError(ValueError):
    """Inversion or a fractional power of a series without unit leading term."""


# ---------------------------------------------------------------- strip level


def _vf(strip: Strip, cap) -> float:
    """Lower bound for the support (first possibly nonzero exponent)."""
    if strip:
        return min(strip)
    return cap + 1


def _strip_add(a: Strip, b: Strip, cap) -> Strip:
    out = {k: c for k, c in a.items() if k <= cap}
    for k, c in b.items():
        if k > cap:
            continue
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _strip_scale(a: Strip, c: GaussianRational) -> Strip:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _strip_mul_into(out: Strip, a: Strip, b: Strip, cap) -> None:
    if not a or not b:
        return
    bk = sorted(b.items())
    for ka, ca in a.items():
        limit = cap - ka
        for kb, cb in bk:
            if kb > limit:
                break
            k = ka + kb
            v = ca * cb
            s = out.get(k)
            out[k] = v if s is None else s + v


def _prune(strip: Strip) -> Strip:
    return {k: c for k, c in strip.items() if c}


def _strip_mul(a: Strip, capa, b: Strip, capb) -> Tuple[Strip, float]:
    cap = min(capa + _vf(b, capb), _vf(a, capa) + capb)
    out: Strip = {}
    _strip_mul_into(out, a, b, cap)
    return _prune(out), cap


def _leading(strip: Strip, cap, what: str) -> Tuple[int, GaussianRational]:
    if not strip:
        raise NonUnitError(f"non-unit leading term: {what} vanishes to known precision p^{cap}")
    v = min(strip)
    return v, strip[v]


def _strip_inv(a: Strip, cap, p_cap=None) -> Tuple[Strip, float]:
    v, c = _leading(a, cap, "Lambda^0 strip")
    rel = cap - v
    if rel == INF:
        if len(a) == 1:
            return {-v: c.inverse()}, INF
        if p_cap is None:
            raise TruncationError("inverse of an exact non-monomial strip needs an explicit p_cap")
        rel = p_cap + v
    rel = int(rel)
    cinv = c.inverse()
    f = [ZERO] * (rel + 1)
    for k, x in a.items():
        i = k - v
        if 0 <= i <= rel:
            f[i] = x * cinv
    g = [ZERO] * (rel + 1)
    g[0] = ONE
    nz = [i for i in range(1, rel + 1) if f[i]]
    for n in range(1, rel + 1):
        s = ZERO
        for i in nz:
            if i > n:
                break
            gi = g[n - i]
            if gi:
                s = s + f[i] * gi
        g[n] = -s
    out = {n - v: g[n] * cinv for n in range(rel + 1) if g[n]}
    return out, rel - v


def _relative(a: Strip, cap, v: int, c: GaussianRational, rel: int) -> List[GaussianRational]:
    cinv = c.inverse()
    f = [ZERO] * (rel + 1)
    for k, x in a.items():
        i = k - v
        if 0 <= i <= rel:
            f[i] = x * cinv
    return f


def _strip_pow(a: Strip, cap, e: Fraction, root: Optional[GaussianRational], p_cap=None) -> Tuple[Strip, float]:
    v, c = _leading(a, cap, "Lambda^0 strip")
    ev = e * v
    if Fraction(ev).denominator != 1:
        raise NonUnitError(f"p-exponent {v} times {e} is not an integer")
    ev = int(ev)
    if root is None:
        if e.denominator == 1:
            root = c ** int(e)
        elif e.denominator == 2:
            r = c.sqrt()
            if r is None:
                raise NonUnitError(f"leading coefficient {c} is not a square; supply the leading root")
            root = r ** int(e.numerator)
        else:
            raise NonUnitError(f"exponent {e} needs an explicit leading root")
    rel = cap - v
    if rel == INF:
        if len(a) == 1:
            return {ev: root}, INF
        if p_cap is None:
            raise TruncationError("fractional power of an exact non-monomial strip needs an explicit p_cap")
        rel = p_cap - ev
    rel = int(rel)
    f = _relative(a, cap, v, c, rel)
    g = [ZERO] * (rel + 1)
    g[0] = ONE
    nz = [i for i in range(1, rel + 1) if f[i]]
    em = mpq(e.numerator, e.denominator)
    for n in range(1, rel + 1):
        s = ZERO
        for j in nz:
            if j > n:
                break
            gj = g[n - j]
            if gj:
                s = s + f[j] * gj * ((em + 1) * j - n)
        g[n] = s / n
    out = {n + ev: g[n] * root for n in range(rel + 1) if g[n]}
    return out, rel + ev


def _strip_exp(a: Strip, cap) -> Tuple[Strip, float]:
    if a and min(a) < 1 or cap < 0:
        bad = {f"p^{k}": repr(a[k]) for k in sorted(a)[:3] if k < 1}
        raise ValueError(f"exp needs zero constant term (Lambda^0 strip of positive p-valuation); "
                         f"offending constant term {bad} (known to p^{cap})")
    if not a:
        return {0: ONE}, cap
    if cap == INF:
        raise TruncationError("exp of an exact nonzero Lambda^0 strip needs a finite p precision")
    n_max = int(cap)
    g = [ZERO] * (n_max + 1)
    g[0] = ONE
    items = sorted(a.items())
    for n in range(1, n_max + 1):
        s = ZERO
        for j, x in items:
            if j > n:
                break
            gj = g[n - j]
            if gj:
                s = s + x * gj * j
        g[n] = s / n
    return {n: g[n] for n in range(n_max + 1) if g[n]}, cap


def _strip_log(a: Strip, cap) -> Tuple[Strip, float]:
    if not a or min(a) != 0 or a[0] != ONE:
        raise ValueError("log needs constant term 1; offending Lambda^0 strip leading term "
                         f"{(min(a), a[min(a)]) if a else 'zero'}")
    if cap == INF and len(a) > 1:
        raise TruncationError("log of an exact non-constant strip needs a finite p precision")
    if cap == INF:
        return {}, INF
    n_max = int(cap)
    f = [ZERO] * (n_max + 1)
    for k, x in a.items():
        if k <= n_max:
            f[k] = x
    g = [ZERO] * (n_max + 1)
    for n in range(1, n_max + 1):
        s = f[n] * n
        for j in range(1, n):
            if g[j] and f[n - j]:
                s = s - g[j] * f[n - j] * j
        g[n] = s / n
    return {n: g[n] for n in range(1, n_max + 1) if g[n]}, cap


# ---------------------------------------------------------------- the series


def _coerce_scalar(x) -> Optional[GaussianRational]:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, mpq, Fraction)):
        return as_gaussian(x)
    return None


class TruncatedSeries:
    """Immutable element of C((p))[[Lambda]] truncated at ``lambda_order``."""

    __slots__ = ("lambda_order", "_strips", "_caps")

    def __init__(self, lambda_order: int, strips: Iterable[Strip], caps: Iterable[float]):
        strips = list(strips)
        caps = list(caps)
        if lambda_order < 0:
            raise ValueError("lambda_order must be >= 0")
        if len(strips) != lambda_order + 1 or len(caps) != lambda_order + 1:
            raise ValueError("need one strip and one cap per Lambda-degree")
        self.lambda_order = lambda_order
        self._strips = tuple({k: c for k, c in s.items() if c and k <= cap} for s, cap in zip(strips, caps))
        self._caps = tuple(caps)

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, lambda_order: int) -> "TruncatedSeries":
        return cls(lambda_order, [{} for _ in range(lambda_order + 1)], [INF] * (lambda_order + 1))

    @classmethod
    def one(cls, lambda_order: int) -> "TruncatedSeries":
        return cls.monomial(ONE, 0, 0, lambda_order)

    @classmethod
    def monomial(cls, coeff, lam: int, p: int, lambda_order: int) -> "TruncatedSeries":
        strips: List[Strip] = [{} for _ in range(lambda_order + 1)]
        if lam <= lambda_order:
            strips[lam] = {p: as_gaussian(coeff)}
        return cls(lambda_order, strips, [INF] * (lambda_order + 1))

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], object], lambda_order: int,
                   caps=None) -> "TruncatedSeries":
        """Build from ``{(d, k): coeff}``; ``caps`` is a number, a list, or None (exact)."""
        if caps is None:
            caps = [INF] * (lambda_order + 1)
        elif not isinstance(caps, (list, tuple)):
            caps = [caps] * (lambda_order + 1)
        strips: List[Strip] = [{} for _ in range(lambda_order + 1)]
        for (d, k), c in terms.items():
            if d <= lambda_order:
                strips[d][k] = strips[d].get(k, ZERO) + as_gaussian(c)
        return cls(lambda_order, strips, caps)

    @classmethod
    def from_p_series(cls, coeffs: Dict[int, object], p_cap, lambda_order: int) -> "TruncatedSeries":
        """A Lambda-free series known up to ``p**p_cap``."""
        strips: List[Strip] = [{} for _ in range(lambda_order + 1)]
        strips[0] = {k: as_gaussian(c) for k, c in coeffs.items()}
        caps = [p_cap] + [INF] * lambda_order
        return cls(lambda_order, strips, caps)

    # inspection -------------------------------------------------------------

    def strip(self, d: int) -> Strip:
        return dict(self._strips[d])

    def cap(self, d: int) -> float:
        return self._caps[d]

    @property
    def caps(self) -> Tuple[float, ...]:
        return self._caps

    def p_valuation_floor(self, d: int) -> float:
        return _vf(self._strips[d], self._caps[d])

    def lambda_valuation(self) -> float:
        for d, s in enumerate(self._strips):
            if s or self._caps[d] != INF:
                return d
        return INF

    def terms(self) -> List[Tuple[int, int, GaussianRational]]:
        """All stored terms in canonical (d, k) order."""
        return [(d, k, s[k]) for d, s in enumerate(self._strips) for k in sorted(s)]

    def coeff(self, lam: int, p: int) -> GaussianRational:
        if lam < 0:
            return ZERO
        if lam > self.lambda_order:
            raise TruncationError(f"Lambda^{lam} is beyond lambda_order {self.lambda_order}")
        if p > self._caps[lam]:
            raise TruncationError(f"coefficient of Lambda^{lam} p^{p} lost to truncation "
                                  f"(known up to p^{self._caps[lam]})")
        return self._strips[lam].get(p, ZERO)

    def p_slice(self, k: int) -> List[GaussianRational]:
        """Coefficients of ``p**k`` for every Lambda-degree."""
        return [self.coeff(d, k) for d in range(self.lambda_order + 1)]

    def is_zero(self) -> bool:
        return not any(self._strips)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = TruncatedSeries.monomial(c, 0, 0, self.lambda_order)
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        parts = [f"{c!r}*L^{d}*p^{k}" for d, k, c in self.terms()[:12]]
        more = " + ..." if len(self.terms()) > 12 else ""
        return f"TruncatedSeries(order={self.lambda_order}: {' + '.join(parts) or '0'}{more})"

    # truncation helpers -----------------------------------------------------

    def truncate(self, lambda_order: Optional[int] = None, caps=None) -> "TruncatedSeries":
        """Lower the Lambda order and/or the per-degree p caps."""
        L = self.lambda_order if lambda_order is None else min(lambda_order, self.lambda_order)
        new_caps = list(self._caps[: L + 1])
        if caps is not None:
            for d in range(L + 1):
                c = caps(d) if callable(caps) else (caps[d] if isinstance(caps, (list, tuple)) else caps)
                new_caps[d] = min(new_caps[d], c)
        return TruncatedSeries(L, self._strips[: L + 1], new_caps)

    def _align(self, other: "TruncatedSeries") -> int:
        return min(self.lambda_order, other.lambda_order)

    # ring operations --------------------------------------------------------

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.lambda_order, [{k: -c for k, c in s.items()} for s in self._strips], self._caps)

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = TruncatedSeries.monomial(c, 0, 0, self.lambda_order)
        L = self._align(other)
        caps = [min(self._caps[d], other._caps[d]) for d in range(L + 1)]
        strips = [_strip_add(self._strips[d], other._strips[d], caps[d]) for d in range(L + 1)]
        return TruncatedSeries(L, strips, caps)

    __radd__ = __add__

    def __sub__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            return self + (-c)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            if not c:
                return TruncatedSeries(self.lambda_order, [{} for _ in self._strips], self._caps)
            return TruncatedSeries(self.lambda_order, [_strip_scale(s, c) for s in self._strips], self._caps)
        L = self._align(other)
        a, b = self._strips, other._strips
        ca, cb = self._caps, other._caps
        va = [_vf(a[d], ca[d]) for d in range(L + 1)]
        vb = [_vf(b[d], cb[d]) for d in range(L + 1)]
        strips, caps = [], []
        for d in range(L + 1):
            cap = INF
            for d1 in range(d + 1):
                d2 = d - d1
                cap = min(cap, ca[d1] + vb[d2], va[d1] + cb[d2])
            out: Strip = {}
            for d1 in range(d + 1):
                _strip_mul_into(out, a[d1], b[d - d1], cap)
            strips.append(_prune(out))
            caps.append(cap)
        return TruncatedSeries(L, strips, caps)

    __rmul__ = __mul__

    def inverse(self, p_cap=None) -> "TruncatedSeries":
        """Multiplicative inverse; the Lambda^0 strip must have a nonzero leading term."""
        L = self.lambda_order
        a, ca = self._strips, self._caps
        if not a[0]:
            raise NonUnitError(f"non-unit leading term: Lambda^0 strip is zero (known to p^{ca[0]})")
        inv0, cinv0 = _strip_inv(a[0], ca[0], p_cap)
        strips, caps = [inv0], [cinv0]
        for d in range(1, L + 1):
            acc: Strip = {}
            acc_cap = INF
            for j in range(1, d + 1):
                prod, cp = _strip_mul(a[j], ca[j], strips[d - j], caps[d - j])
                acc_cap = min(acc_cap, cp)
                acc = _strip_add(acc, prod, acc_cap)
            res, cres = _strip_mul(acc, acc_cap, inv0, cinv0)
            strips.append({k: -c for k, c in res.items()})
            caps.append(cres)
        return TruncatedSeries(L, strips, caps)

    def __truediv__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            return self * c.inverse()
        return self * other.inverse()

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return self.inverse() * other

    def __pow__(self, n: int) -> "TruncatedSeries":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.one(self.lambda_order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structural maps --------------------------------------------------------

    def mul_p_power(self, k: int) -> "TruncatedSeries":
        """Multiply by ``p**k``."""
        return TruncatedSeries(self.lambda_order, [{e + k: c for e, c in s.items()} for s in self._strips],
                               [c + k for c in self._caps])

    def lambda_shift(self, j: int) -> "TruncatedSeries":
        """Multiply by ``Lambda**j``.  Negative ``j`` requires the low strips to vanish exactly."""
        L = self.lambda_order
        if j >= 0:
            strips = [{} for _ in range(j)] + list(self._strips)
            caps = [INF] * j + list(self._caps)
            return TruncatedSeries(L, strips[: L + 1], caps[: L + 1])
        j = -j
        for d in range(min(j, L + 1)):
            if self._strips[d] or self._caps[d] != INF:
                raise NonUnitError(f"cannot divide by Lambda^{j}: Lambda^{d} strip is not exactly zero")
        if j > L:
            raise TruncationError("division by Lambda exhausts the Lambda order")
        return TruncatedSeries(L - j, self._strips[j:], self._caps[j:])

    def lambda_scale(self, c) -> "TruncatedSeries":
        """Substitute ``Lambda -> c * Lambda``."""
        c = as_gaussian(c)
        strips, f = [], ONE
        for s in self._strips:
            strips.append(_strip_scale(s, f))
            f = f * c
        return TruncatedSeries(self.lambda_order, strips, self._caps)

    def p_scale(self, s: int) -> "TruncatedSeries":
        """Substitute ``p -> p**s`` for a positive integer ``s``."""
        if s <= 0:
            raise ValueError("p_scale needs a positive integer")
        strips = [{k * s: c for k, c in st.items()} for st in self._strips]
        caps = [c * s + (s - 1) if c != INF else INF for c in self._caps]
        return TruncatedSeries(self.lambda_order, strips, caps)

    def p_negate(self) -> "TruncatedSeries":
        """Substitute ``p -> -p``."""
        strips = [{k: (c if k % 2 == 0 else -c) for k, c in st.items()} for st in self._strips]
        return TruncatedSeries(self.lambda_order, strips, self._caps)

    def p_derivative(self) -> "TruncatedSeries":
        """Formal derivative in ``p``."""
        strips = [{k - 1: c * k for k, c in st.items() if k} for st in self._strips]
        return TruncatedSeries(self.lambda_order, strips, [c - 1 for c in self._caps])

    def p_euler(self) -> "TruncatedSeries":
        """Apply ``p d/dp``."""
        strips = [{k: c * k for k, c in st.items() if k} for st in self._strips]
        return TruncatedSeries(self.lambda_order, strips, self._caps)

    def map_coefficients(self, fn: Callable[[GaussianRational], GaussianRational]) -> "TruncatedSeries":
        return TruncatedSeries(self.lambda_order, [{k: fn(c) for k, c in s.items()} for s in self._strips],
                               self._caps)

    # serialization ----------------------------------------------------------

    def to_json(self, p_window: Optional[Tuple[int, int]] = None) -> dict:
        terms = []
        for d, k, c in self.terms():
            if p_window is not None and not (p_window[0] <= k <= p_window[1]):
                continue
            terms.append({"lam": d, "p": k, **c.to_json()})
        return {"lambda_order": self.lambda_order, "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedSeries":
        L = int(obj["lambda_order"])
        terms = {}
        for t in obj["terms"]:
            terms[(int(t["lam"]), int(t["p"]))] = GaussianRational.from_json(t)
        return cls.from_terms(terms, L)


# ---------------------------------------------------------------- functions


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp of a series whose Lambda^0 strip has positive p-valuation (typically zero)."""
    L = s.lambda_order
    a, ca = s._strips, s._caps
    e0, c0 = _strip_exp(a[0], ca[0])
    strips, caps = [e0], [c0]
    for d in range(1, L + 1):
        acc: Strip = {}
        acc_cap = INF
        for j in range(1, d + 1):
            prod, cp = _strip_mul(a[j], ca[j], strips[d - j], caps[d - j])
            acc_cap = min(acc_cap, cp)
            acc = _strip_add(acc, _strip_scale(prod, as_gaussian(j)), acc_cap)
        strips.append(_strip_scale(acc, as_gaussian(mpq(1, d))))
        caps.append(acc_cap)
    return TruncatedSeries(L, strips, caps)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term 1."""
    L = s.lambda_order
    a, ca = s._strips, s._caps
    l0, cl0 = _strip_log(a[0], ca[0])
    inv0, cinv0 = _strip_inv(a[0], ca[0])
    strips, caps = [l0], [cl0]
    for d in range(1, L + 1):
        acc = {k: c * d for k, c in a[d].items()}
        acc_cap = ca[d]
        for j in range(1, d):
            prod, cp = _strip_mul(strips[j], caps[j], a[d - j], ca[d - j])
            acc_cap = min(acc_cap, cp)
            acc = _strip_add(acc, _strip_scale(prod, as_gaussian(-j)), acc_cap)
        res, cres = _strip_mul(acc, acc_cap, inv0, cinv0)
        strips.append(_strip_scale(res, as_gaussian(mpq(1, d))))
        caps.append(cres)
    return TruncatedSeries(L, strips, caps)


def binomial_pow(s: TruncatedSeries, exponent, leading_root=None, p_cap=None) -> TruncatedSeries:
    """``s ** exponent`` for a rational exponent.

    For a non-integral exponent the branch is fixed by ``leading_root``, the
    chosen value of ``c ** exponent`` where ``c p^k`` is the leading term of the
    Lambda^0 strip.  Without it, a Gaussian-rational square root is derived and
    an error is raised if none exists.
    """
    e = Fraction(exponent)
    L = s.lambda_order
    a, ca = s._strips, s._caps
    root = None if leading_root is None else as_gaussian(leading_root)
    if e.denominator == 1 and root is None and e >= 0:
        return s ** int(e)
    g0, cg0 = _strip_pow(a[0], ca[0], e, root, p_cap)
    inv0, cinv0 = _strip_inv(a[0], ca[0], p_cap)
    em = mpq(e.numerator, e.denominator)
    strips, caps = [g0], [cg0]
    for d in range(1, L + 1):
        acc: Strip = {}
        acc_cap = INF
        for j in range(1, d + 1):
            w = em * j - d + j
            prod, cp = _strip_mul(a[j], ca[j], strips[d - j], caps[d - j])
            acc_cap = min(acc_cap, cp)
            if w:
                acc = _strip_add(acc, _strip_scale(prod, as_gaussian(w)), acc_cap)
        res, cres = _strip_mul(acc, acc_cap, inv0, cinv0)
        strips.append(_strip_scale(res, as_gaussian(mpq(1, d))))
        caps.append(cres)
    return TruncatedSeries(L, strips, caps)


def coeff_extract(s, variable: str, exponent: int, lam: Optional[int] = None):
    """Extract a coefficient.

    ``variable='p'`` returns the list of Lambda-coefficients of ``p**exponent``
    (or a single coefficient when ``lam`` is given); ``variable='lambda'``
    returns the Lambda^exponent strip as a Lambda-free series.  A UniSeries
    accepts its own variable name or ``'t'``.
    """
    if isinstance(s, UniSeries):
        return s.coeff(exponent)
    if variable == "p":
        if lam is not None:
            return s.coeff(lam, exponent)
        return s.p_slice(exponent)
    if variable in ("lambda", "Lambda", "lam"):
        if exponent > s.lambda_order:
            raise TruncationError(f"Lambda^{exponent} is beyond lambda_order {s.lambda_order}")
        return TruncatedSeries.from_p_series(s.strip(exponent), s.cap(exponent), 0)
    raise ValueError(f"unknown variable {variable!r}")


def _unknown_tail(lambda_order: int, rho: Fraction) -> TruncatedSeries:
    """A series about which nothing is known except valuation >= e*rho at Lambda^e."""
    caps = [math.ceil(e * rho) - 1 for e in range(lambda_order + 1)]
    return TruncatedSeries(lambda_order, [{} for _ in caps], caps)


def substitute(f: TruncatedSeries, g: TruncatedSeries, p_cap=None) -> TruncatedSeries:
    """Formal composition ``f(y = g(x, Lambda), Lambda)``.

    ``f`` uses the p-slot for ``y``; ``g`` uses it for ``x``.  The Lambda^0
    strip of ``g`` must start with ``c x^v`` for ``v >= 1``.
    """
    L = min(f.lambda_order, g.lambda_order)
    g = g.truncate(L)
    a0 = g._strips[0]
    if not a0:
        raise ValueError("substitute: Lambda^0 part of g vanishes")
    v = min(a0)
    if v < 1:
        raise ValueError(f"substitute: g must have positive x-valuation at Lambda^0, got x^{v}")
    rho = Fraction(0)
    for e in range(1, L + 1):
        vf = g.p_valuation_floor(e)
        if vf != INF:
            rho = min(rho, Fraction(int(vf) - v, e) if vf != INF else rho)
    result = TruncatedSeries.zero(L)
    powers: Dict[int, TruncatedSeries] = {0: TruncatedSeries.one(L)}
    ginv = None

    def gpow(j: int) -> TruncatedSeries:
        nonlocal ginv
        if j in powers:
            return powers[j]
        if j > 0:
            powers[j] = gpow(j - 1) * g
        else:
            if ginv is None:
                ginv = g.inverse(p_cap)
            powers[j] = gpow(j + 1) * ginv
        return powers[j]

    for d in range(L + 1):
        strip = f._strips[d]
        acc = TruncatedSeries.zero(L)
        for j in sorted(strip):
            acc = acc + gpow(j) * strip[j]
        cap = f._caps[d]
        if cap != INF:
            acc = acc + gpow(int(cap) + 1) * _unknown_tail(L, rho)
        result = result + acc.lambda_shift(d)
    return result


def change_var_residue(f: TruncatedSeries, y_of_x: TruncatedSeries, p_cap=None) -> List[GaussianRational]:
    """Coefficient of ``x^0`` in ``x f(y(x, Lambda), Lambda) dy/dx``, per Lambda-degree.

    Requires ``y_of_x = x + a_2 x^2 + ...`` at Lambda^0.
    """
    a0 = y_of_x.strip(0)
    if not a0 or min(a0) != 1 or a0[1] != ONE:
        raise ValueError("change_var_residue: y_0(x) must be x + (higher powers of x)")
    caps = [p_cap] if p_cap is not None else [8, 16, 32, 64, 128, 256]
    for k in caps:
        y = y_of_x.truncate(caps=k)
        try:
            comp = substitute(f, y)
            x = TruncatedSeries.monomial(ONE, 0, 1, comp.lambda_order)
            integrand = x * comp * y.p_derivative().truncate(comp.lambda_order)
            return integrand.p_slice(0)
        except TruncationError:
            if k == caps[-1]:
                raise
    raise AssertionError("unreachable")


# ---------------------------------------------------------------- one variable


class UniSeries:
    """One-variable truncated Laurent series with an expansion-point tag.

    ``at='zero'`` stores a series in ``t``; ``at='infinity'`` stores a series
    in ``s = 1/t``.  Exponents are reported in terms of ``t`` either way, so
    ``coeff(0)`` is the constant term of the chosen expansion.
    """

    __slots__ = ("at", "_coeffs", "cap")

    def __init__(self, coeffs: Dict[int, object], cap, at: str = "zero"):
        if at not in ("zero", "infinity"):
            raise ValueError("at must be 'zero' or 'infinity'")
        self.at = at
        self.cap = cap
        self._coeffs = {k: as_gaussian(c) for k, c in coeffs.items() if k <= cap and c}

    @classmethod
    def expand_rational(cls, num: Dict[int, object], den: Dict[int, object], at: str, order: int) -> "UniSeries":
        """Expand ``num(t)/den(t)`` (Laurent polynomials in t) at ``t=0`` or ``t=oo``."""
        if at == "infinity":
            num = {-k: c for k, c in num.items()}
            den = {-k: c for k, c in den.items()}
        n = TruncatedSeries.from_p_series(num, INF, 0)
        dd = {k: as_gaussian(c) for k, c in den.items() if c}
        v = min(dd)
        inv, _ = _strip_inv(dd, INF, order + v + max(0, -min(num) if num else 0) + 1)
        prod, _ = _strip_mul(n._strips[0], INF, inv, order - (min(num) if num else 0))
        return cls(prod, order, at)

    def coeff(self, k: int) -> GaussianRational:
        """Coefficient of ``t**k`` in this expansion."""
        e = k if self.at == "zero" else -k
        if e > self.cap:
            raise TruncationError(f"exponent {k} beyond the known window of this {self.at} expansion")
        return self._coeffs.get(e, ZERO)

    def __repr__(self) -> str:
        return f"UniSeries(at={self.at}, {dict(sorted(self._coeffs.items()))}, cap={self.cap})"
