"""Theta constants, Jacobi theta expansions, Eisenstein series and the rank-2
Seiberg-Witten quantities as exact series in ``Lambda`` and ``p = q^{1/8}``.

Conventions (``q = e^{2 pi i tau}``)::

    theta_00 = sum q^{n^2/2}             = sum p^{4 n^2}
    theta_01 = sum (-1)^n q^{n^2/2}      = sum (-1)^n p^{4 n^2}
    theta_10 = sum q^{(n+1/2)^2/2}       = sum p^{(2n+1)^2}

The elliptic variable is used in the rescaled form ``w = 2 pi i z`` so that
every coefficient stays Gaussian-rational::

    theta_ab(w) = sum_n c_ab(n) p^{(2n+a)^2} exp((n + a/2) w)

with ``c_00 = 1``, ``c_01 = (-1)^n``, ``c_10 = 1`` and ``c_11 = i (-1)^n``.
With this normalisation ``d/dz theta_11(0) = -pi theta_00 theta_01 theta_10``.
Substituting ``w = h`` evaluates a theta function at ``z = h / (2 pi i)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Tuple

from gmpy2 import mpq

from .gaussian import I, ONE, GaussianRational, as_gaussian
from .series import (
    INF,
    TruncatedSeries,
    TruncationError,
    binomial_pow,
    series_exp,
    series_log,
)

__all__ = [
    "THETA_CHARS",
    "bernoulli",
    "theta_constant",
    "theta_at",
    "jacobi_theta",
    "eisenstein",
    "SWSeries",
    "u_series",
    "h_series",
    "d2F_dlogL2",
    "dadq_jacobian",
    "genus1_factors",
    "genus1_factors_cs",
    "check_U1",
    "contact_check",
    "dtau_check",
]

THETA_CHARS = ((0, 0), (0, 1), (1, 0), (1, 1))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    s = Fraction(0)
    for k in range(n):
        s += comb(n + 1, k) * bernoulli(k)
    return -s / (n + 1)


def _check_char(char) -> Tuple[int, int]:
    a, b = char
    if (a, b) not in THETA_CHARS:
        raise ValueError(f"theta characteristic must be in {{0,1}}^2, got {char}")
    return a, b


def _theta_terms(char, p_bound: int):
    """Yield ``(p_exponent, coeff, half_shift)`` with ``half_shift = 2n + a``."""
    a, b = char
    n = 0
    out = []
    while True:
        added = False
        for m in ((n, -n - 1) if a else ((n, -n) if n else (0,))):
            e = (2 * m + a) ** 2
            if e > p_bound:
                continue
            added = True
            c = ONE if not (b and m % 2) else -ONE
            if (a, b) == (1, 1):
                c = c * I
            out.append((e, c, 2 * m + a))
        if not added:
            break
        n += 1
    return out


def _next_exponent(char, p_bound: int) -> int:
    a, _ = char
    n = 0
    while (2 * n + a) ** 2 <= p_bound:
        n += 1
    return (2 * n + a) ** 2


def theta_constant(char, p_cap: int, lambda_order: int = 0) -> TruncatedSeries:
    """theta_ab(0) as a p-series known through ``p**p_cap``."""
    char = _check_char(char)
    if char == (1, 1):
        raise ValueError("theta_11 vanishes at z=0; use jacobi_theta for its z-dependence")
    coeffs: Dict[int, GaussianRational] = {}
    for e, c, _ in _theta_terms(char, p_cap):
        coeffs[e] = coeffs.get(e, as_gaussian(0)) + c
    return TruncatedSeries.from_p_series(coeffs, p_cap, lambda_order)


def _weight_bound(w: TruncatedSeries) -> Fraction:
    """rho <= 0 with p-valuation of every power of exp(w) at Lambda^d >= d*rho."""
    rho = Fraction(0)
    for d in range(1, w.lambda_order + 1):
        vf = w.p_valuation_floor(d)
        if vf != INF:
            rho = min(rho, Fraction(int(vf), d))
    return rho


def theta_at(char, w: TruncatedSeries, p_cap: int) -> TruncatedSeries:
    """theta_ab evaluated at the rescaled elliptic variable ``w`` (a series
    with vanishing Lambda^0 strip), known through ``p**p_cap`` at Lambda^0."""
    char = _check_char(char)
    L = w.lambda_order
    if w.p_valuation_floor(0) < 1:
        raise ValueError("theta_at needs an elliptic argument with vanishing Lambda^0 part")
    rho = _weight_bound(w)
    shift = -(rho * L).__floor__()
    bound = p_cap + shift
    terms = _theta_terms(char, bound)
    nxt = _next_exponent(char, bound)
    half = series_exp(w * GaussianRational(mpq(1, 2)))
    half_inv = series_exp(w * GaussianRational(mpq(-1, 2)))
    powers = {0: TruncatedSeries.one(L)}

    def pw(m: int) -> TruncatedSeries:
        if m not in powers:
            powers[m] = pw(m - 1) * half if m > 0 else pw(m + 1) * half_inv
        return powers[m]

    total = TruncatedSeries.zero(L)
    for e, c, m in terms:
        total = total + pw(m).mul_p_power(e) * c
    return total.truncate(caps=lambda d: nxt + (rho * d).__floor__() - 1)


def jacobi_theta(char, z_order: int, p_cap: int) -> TruncatedSeries:
    """theta_ab(w) as a bivariate series: the Lambda-slot carries ``w = 2 pi i z``."""
    w = TruncatedSeries.monomial(ONE, 1, 0, z_order)
    return theta_at(char, w, p_cap)


def _sigma(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein(weight: int, p_cap: int, lambda_order: int = 0) -> TruncatedSeries:
    """Normalised Eisenstein series E_weight = 1 - (2k/B_2k) sum sigma_{2k-1}(n) q^n, with q = p^8."""
    if weight < 2 or weight % 2:
        raise ValueError("weight must be an even integer >= 2")
    b = bernoulli(weight)
    factor = Fraction(-2 * weight) / b
    coeffs = {0: 1}
    for n in range(1, p_cap // 8 + 1):
        c = factor * _sigma(n, weight - 1)
        coeffs[8 * n] = mpq(c.numerator, c.denominator)
    return TruncatedSeries.from_p_series(coeffs, p_cap, lambda_order)


# ---------------------------------------------------------------- SW side


class SWSeries:
    """The rank-2 quantities u, h, T, dadq at Lambda-order ``L`` and p-precision ``P``.

    Precision is weighted: every public series is exact through ``Lambda^L``
    and, at ``Lambda^d``, through ``p^(P - d)`` (at least through ``p^0``).
    All these quantities have p-valuation ``>= -d`` at ``Lambda^d`` up to a
    bounded shift, so this is the profile that survives multiplication.  ``T`` is ``(1/32) d^2F_0/(d log Lambda)^2``, the
    exponent with ``theta_01(h)/theta_01(0) = exp(T)``.
    """

    def __init__(self, lambda_order: int, p_cap: int):
        self.L = lambda_order
        self.P = p_cap
        self._cache = {}
        self._margin = 2 * lambda_order + 8

    def _ctx(self, margin: int):
        key = margin
        if key in self._cache:
            return self._cache[key]
        L1 = self.L + 1
        C = self.P + margin
        t00 = theta_constant((0, 0), C, L1)
        t10 = theta_constant((1, 0), C, L1)
        t01 = theta_constant((0, 1), C, L1)
        lam = TruncatedSeries.monomial(ONE, 1, 0, L1)
        lam2 = lam * lam
        lam4 = lam2 * lam2
        prod = t00 * t10
        inv_prod = prod.inverse()
        u = -(t00 ** 4 + t10 ** 4) * (prod * prod).inverse() * lam2
        upow = [TruncatedSeries.one(L1)]
        while 2 * len(upow) <= L1:
            upow.append(upow[-1] * u)
        acc = TruncatedSeries.zero(L1)
        n = 0
        while 4 * n - 2 * n + 1 <= L1:
            cn = _binom_half(n)
            for k in range(n + 1):
                deg = 4 * n - 2 * k + 1
                if deg > L1:
                    continue
                coef = cn * comb(n, k) / Fraction(4 * n - 2 * k + 1)
                term = upow[k].lambda_shift(4 * (n - k) + 1)
                acc = acc + term * GaussianRational(mpq(coef.numerator, coef.denominator))
            n += 1
        h = acc * inv_prod * (2 * I)
        arg = (prod * h).lambda_shift(-1) * (2 * I).inverse()
        L = self.L
        T = series_log(arg)
        hL = h.truncate(L)
        h2 = hL * hL
        hp = TruncatedSeries.one(L)
        k = 1
        while 2 * k <= L:
            hp = hp * h2
            b = bernoulli(2 * k) / (2 * k * factorial(2 * k))
            T = T + eisenstein(2 * k, C, L) * hp * GaussianRational(mpq(b.numerator, b.denominator))
            k += 1
        one = TruncatedSeries.one(L1)
        disc = one + u + lam4
        root = binomial_pow(disc, Fraction(-1, 2), leading_root=1)
        t01_8 = t01 ** 8
        dadq = t01_8 * inv_prod * lam * root * I
        ctx = {
            "theta00": t00, "theta10": t10, "theta01": t01,
            "u": u, "h": h, "T": T, "dadq": dadq, "disc": disc,
        }
        self._cache[key] = ctx
        return ctx

    def get(self, name: str) -> TruncatedSeries:
        margin = self._margin
        for _ in range(8):
            s = self._ctx(margin)[name].truncate(self.L)
            if all(s.cap(d) >= self.P - d for d in range(self.L + 1)):
                return s.truncate(caps=lambda d: INF if not s.strip(d) and s.cap(d) == INF
                                  else max(self.P - d, 0))
            margin *= 2
        raise TruncationError(f"could not reach p-precision {self.P} for {name}")

    @property
    def u(self) -> TruncatedSeries:
        return self.get("u")

    @property
    def h(self) -> TruncatedSeries:
        return self.get("h")

    @property
    def T(self) -> TruncatedSeries:
        return self.get("T")

    @property
    def dadq(self) -> TruncatedSeries:
        return self.get("dadq")

    def theta(self, char) -> TruncatedSeries:
        return self.get({(0, 0): "theta00", (1, 0): "theta10", (0, 1): "theta01"}[tuple(char)])

    def d2F(self) -> TruncatedSeries:
        """d^2 F_0 / (d log Lambda)^2 = 32 T."""
        return self.T * 32


def _binom_half(n: int) -> Fraction:
    """binomial(-1/2, n)."""
    c = Fraction(1)
    for j in range(n):
        c *= Fraction(-1, 2) - j
        c /= j + 1
    return c


def u_series(lambda_order: int, p_cap: int) -> TruncatedSeries:
    return SWSeries(lambda_order, p_cap).u


def h_series(lambda_order: int, p_cap: int) -> TruncatedSeries:
    return SWSeries(lambda_order, p_cap).h


def d2F_dlogL2(lambda_order: int, p_cap: int) -> TruncatedSeries:
    """(1/32) d^2F_0/(d log Lambda)^2, i.e. the contact exponent T."""
    return SWSeries(lambda_order, p_cap).T


def dadq_jacobian(lambda_order: int, p_cap: int) -> TruncatedSeries:
    """(a^2/Lambda) p d(Lambda/a)/dp = i theta_01^8 Lambda / (theta_00 theta_10) (1+u+Lambda^4)^{-1/2}."""
    return SWSeries(lambda_order, p_cap).dadq


def genus1_factors(chi: int, sigma: int, cs_level: int, lambda_order: int, p_cap: int) -> TruncatedSeries:
    """exp(chi A + sigma B) for the pure theory, ``(2/(theta_00 theta_10))^{(chi+sigma)/2} theta_01^sigma``."""
    if cs_level != 0:
        raise NotImplementedError(
            "the q-expansion of the prepotential at Chern-Simons level +-1 is not available; "
            "use genus1_factors_cs with explicit prepotential derivatives")
    if (chi + sigma) % 2:
        raise ValueError("exp(chi A + sigma B) is a p-Laurent series only for chi + sigma even")
    margin = 2 * abs(chi + sigma) + 8
    C = p_cap + margin
    t00 = theta_constant((0, 0), C, lambda_order)
    t10 = theta_constant((1, 0), C, lambda_order)
    t01 = theta_constant((0, 1), C, lambda_order)
    base = (t00 * t10).inverse() * 2
    out = (base ** ((chi + sigma) // 2)) * (t01 ** sigma)
    return out.truncate(caps=p_cap)


def genus1_factors_cs(cs_level: int, T: TruncatedSeries, h: TruncatedSeries, p_cap: int):
    """exp F_1 and exp G at Chern-Simons level +-1 from given prepotential data.

    ``T`` is (1/32) d^2F_0/(d log Lambda)^2 and ``h`` is -(1/4) d^2F_0/(da dlog Lambda)
    for that level.  Returns ``(q_exponent, expF1_series, expG_series)`` where
    the common prefactor ``q**q_exponent`` is kept symbolic.
    """
    if cs_level not in (1, -1):
        raise ValueError("genus1_factors_cs is for cs_level = +-1")
    L = min(T.lambda_order, h.lambda_order)
    C = p_cap + 4 * L + 8
    eta_part = TruncatedSeries.one(L)
    for d in range(1, C // 8 + 1):
        eta_part = eta_part * TruncatedSeries.from_terms({(0, 0): 1, (0, 8 * d): -1}, L)
    eta_part = binomial_pow(eta_part.truncate(caps=C), Fraction(-1, 2), leading_root=1)
    # the elliptic argument beta/(16 pi i) d^2F_0/(dlogL da) is h/2 up to sign
    th = theta_at((0, 1), h * GaussianRational(mpq(1, 2)), C)
    e_plus = series_exp(T * GaussianRational(mpq(1, 8)))
    e_minus = series_exp(T * GaussianRational(mpq(-1, 8)))
    f1 = eta_part * e_plus * binomial_pow(th, Fraction(-1, 2), leading_root=1)
    g = eta_part * e_minus * binomial_pow(th, Fraction(1, 2), leading_root=1)
    return Fraction(-1, 48), f1.truncate(caps=p_cap), g.truncate(caps=p_cap)


# ---------------------------------------------------------------- identities


def check_U1(lambda_order: int, p_cap: int) -> TruncatedSeries:
    """Residual of the U_1 relation after the modular transformation.

    ``-Lambda^2 theta_00(tau/2)^4/theta_10(tau/2)^4 + (Lambda^2/2 + 1/2)^2``
    must equal ``(1 + u + Lambda^4)/4``.  In the variable ``s = q^{1/16}`` the
    half-period thetas have the same coefficients as the ordinary ones in p,
    so the right side is evaluated at ``p = s^2``.
    """
    L = lambda_order
    C = 2 * p_cap + 16
    lam = TruncatedSeries.monomial(ONE, 1, 0, L)
    lam2 = lam * lam
    t00 = theta_constant((0, 0), C, L)
    t10 = theta_constant((1, 0), C, L)
    half = GaussianRational(mpq(1, 2))
    lhs = -(lam2 * (t00 ** 4) * (t10 ** 4).inverse()) + (lam2 * half + half) ** 2
    sw = SWSeries(L, p_cap)
    rhs = (TruncatedSeries.one(L) + sw.u + lam2 * lam2).p_scale(2) * GaussianRational(mpq(1, 4))
    return (lhs - rhs).truncate(caps=2 * p_cap)


def contact_check(lambda_order: int, p_cap: int) -> Dict[str, TruncatedSeries]:
    """Residuals of ``theta_11(h)/theta_01(h) + Lambda`` and ``theta_01(h)/theta_01(0) - exp(T)``."""
    L = lambda_order
    sw = SWSeries(L + 1, p_cap + 2 * L + 8)
    h = sw.h
    C = p_cap + 2 * L + 8
    t11 = theta_at((1, 1), h, C)
    t01h = theta_at((0, 1), h, C)
    lam = TruncatedSeries.monomial(ONE, 1, 0, L + 1)
    sn = t11 * t01h.inverse() + lam
    t01 = theta_constant((0, 1), C, L + 1)
    contact = t01h * t01.inverse() - series_exp(sw.T.truncate(L)).truncate(L)
    return {
        "sn": sn.truncate(L, caps=p_cap),
        "contact": contact.truncate(L, caps=p_cap),
    }


def dtau_check(lambda_order: int, p_cap: int) -> Dict[str, TruncatedSeries]:
    """Residuals of the tau-derivative relations.

    ``p du/dp = 2 Lambda^2 theta_01^8/(theta_00 theta_10)^2`` (the closed form
    of du/dtau) and ``dadq^2 = -Lambda^2 theta_01^16/((theta_00 theta_10)^2 (1+u+Lambda^4))``
    (the closed form of (dtau/da)^2).
    """
    L = lambda_order
    C = p_cap + 4 * L + 8
    sw = SWSeries(L, C)
    t00, t10, t01 = sw.theta((0, 0)), sw.theta((1, 0)), sw.theta((0, 1))
    lam = TruncatedSeries.monomial(ONE, 1, 0, L)
    prod2 = (t00 * t10) ** 2
    du = sw.u.p_euler() - lam * lam * (t01 ** 8) * prod2.inverse() * 2
    disc = TruncatedSeries.one(L) + sw.u + lam ** 4
    jac = sw.dadq * sw.dadq + lam * lam * (t01 ** 16) * (prod2 * disc).inverse()
    return {"du_dtau": du.truncate(caps=p_cap), "dtau_da": jac.truncate(caps=p_cap)}
