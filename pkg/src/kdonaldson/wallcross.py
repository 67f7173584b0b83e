"""Wallcrossing terms: modular-form side and toric localization side.

The modular side evaluates, for a class ``v`` of rank 0, the q^0-extraction

    Delta_n = 2 Coeff_{p^0} [ i^{<xi,K>} p^{-xi^2} Lambda^{-chi(O)}
                              exp(-(h/2) <xi, v1+K> + T <(v1+K)^2>)
                              exp(A)^{4 chi(O)} exp(B-A)^sigma  dadq ]

at ``Lambda^{4n - xi^2 - 3}``, with ``p = q^{1/8}``, ``h``, ``T`` and ``dadq``
the Seiberg-Witten series of :mod:`kdonaldson.theta`.

The localization side sums over the torus fixed points of
``X^[n] x X^[m]`` for a toric surface ``X``.  The variable ``t`` carries the
``T = e^{-t}`` dependence, and we use ``a = (t - iota^* xi)/2`` at every
fixed point.  Extraction of ``[.]_{T^0} - [.]_{(T^-1)^0}`` is done exactly on
the rational function after restricting ``(eps1, eps2)`` to a ray, and the
nonequivariant value is the limit at ``eps -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import flint
from gmpy2 import mpq

from .gaussian import I, ONE, GaussianRational
from .instanton import TorusSetup, pair_weights, vadd, vneg, vscale
from .partitions import YoungTuple, iter_tuples
from .series import TruncatedSeries, series_exp
from .theta import SWSeries, genus1_factors
from .toric import Divisor, ToricSurface
from .torus import ExactAlgebra, TorusFunction, _ctx

__all__ = [
    "WallInput",
    "ToricWallData",
    "UnsupportedRank",
    "PoleError",
    "degree_window",
    "delta_modular",
    "delta_localization",
    "LocalizationResult",
    "vanishing_and_degree_check",
    "residue_check",
    "parity_flip_check",
    "equivariant_terms",
]


class UnsupportedRank(NotImplementedError):
    """The explicit modular formula is only available for rk(v) = 0."""


class PoleError(ArithmeticError):
    """An eps-pole survived the nonequivariant limit."""


@dataclass(frozen=True)
class WallInput:
    """Intersection numbers entering the modular formula.

    ``xi_w = <xi, v1 + K>`` and ``w_sq = <(v1 + K)^2>`` where ``v1`` is the
    degree-one part ``c1(v) + rk(v)/2 (c1 - K)``.
    """

    xi_sq: int
    xi_K: int
    xi_w: int
    w_sq: int
    chi_O: int = 1
    sigma: int = 0
    euler: int = 4
    rk_v: int = 0
    parity_class: int = 0

    def __post_init__(self):
        if (self.xi_sq + self.xi_K) % 2:
            raise ValueError("<xi, xi - K> must be even for a wall")

    @classmethod
    def from_surface(cls, X: ToricSurface, xi: Divisor, v1: Divisor) -> "WallInput":
        K = X.canonical
        w = tuple(a + b for a, b in zip(v1, K))
        return cls(xi_sq=X.pairing(xi, xi), xi_K=X.pairing(xi, K), xi_w=X.pairing(xi, w),
                   w_sq=X.pairing(w, w), chi_O=1, sigma=X.signature(), euler=X.euler,
                   rk_v=0, parity_class=X.pairing(xi, v1) % 2)


def degree_window(w: WallInput) -> Tuple[int, int]:
    """``-xi^2 - 3 chi(O) <= d <= xi^2 + |2 <xi, v1+K>| + 1``."""
    return -w.xi_sq - 3 * w.chi_O, w.xi_sq + abs(2 * w.xi_w) + 1


# ---------------------------------------------------------------- modular side
@lru_cache(maxsize=32)
def _sw(L: int, P: int) -> SWSeries:
    return SWSeries(L, P)


def _to_int(c: GaussianRational, what: str) -> int:
    re, im = Fraction(int(c.re.numerator), int(c.re.denominator)), Fraction(int(c.im.numerator), int(c.im.denominator))
    if im != 0 or re.denominator != 1:
        raise ArithmeticError(f"{what}: expected an integer, got {re} + {im} i")
    return int(re)


def delta_modular(w: WallInput, d_max: int) -> Dict[int, int]:
    """``{d: coefficient of Lambda^d}`` of the wallcrossing term, ``d <= d_max``."""
    if w.rk_v != 0:
        raise UnsupportedRank("the explicit q-expansion is only available for rk(v) = 0")
    d_min = -w.xi_sq - 3
    out: Dict[int, int] = {}
    degrees = [d for d in range(d_min, d_max + 1) if (d - d_min) % 4 == 0]
    if not degrees:
        return out
    if w.parity_class % 2:
        return {d: 0 for d in degrees}
    L = d_max + w.chi_O
    # at Lambda^k the needed p-exponent is xi^2; weighted precision gives P - k
    P = L + w.xi_sq + 4
    sw = _sw(L, P)
    expo = sw.h * GaussianRational(mpq(-w.xi_w, 2)) + sw.T * w.w_sq
    g1 = genus1_factors(w.euler, w.sigma, 0, L, P + 8)
    G = series_exp(expo) * g1 * sw.dadq
    phase = I ** (w.xi_K % 4)
    for d in degrees:
        c = G.coeff(d + w.chi_O, w.xi_sq) * phase * 2
        out[d] = _to_int(c, f"Delta at Lambda^{d}")
    return out


def vanishing_and_degree_check(w: WallInput, result: Dict[int, int]) -> dict:
    """Every nonzero coefficient must lie inside the degree window."""
    lo, hi = degree_window(w)
    outside = sorted(d for d, c in result.items() if c and not lo <= d <= hi)
    return {"ok": not outside, "window": (lo, hi), "outside": outside}


# ----------------------------------------------------------- localization side
@dataclass(frozen=True)
class ToricWallData:
    """Equivariant data of a wall ``xi`` and a rank-0 class ``v`` on a toric surface."""

    surface: ToricSurface
    xi: Divisor
    v1: Divisor

    def __post_init__(self):
        K = self.surface.canonical
        for i in range(self.surface.euler):
            wx, wy = self.surface.tangent_weights(i)
            k = self.surface.restrict(K, i)
            if k != (-wx[0] - wy[0], -wx[1] - wy[1]):
                raise ValueError("iota^*K must equal -w(x) - w(y)")

    @property
    def wall_input(self) -> WallInput:
        return WallInput.from_surface(self.surface, self.xi, self.v1)

    def chi_M(self) -> Dict[Tuple[int, int], int]:
        return self.surface.equivariant_chi(self.xi)

    def chi_M_dual(self) -> Dict[Tuple[int, int], int]:
        return self.surface.equivariant_chi(tuple(-x for x in self.xi))


# variables (eps1, eps2, t); D = 2 resolves a = (t - xi)/2
_D = 2
_NV = 3


def _form(f: Tuple[int, int], t: Fraction = Fraction(0)) -> Tuple[int, int, int]:
    """D-lattice vector of ``f1 eps1 + f2 eps2 + t * t``."""
    v = (Fraction(f[0]) * _D, Fraction(f[1]) * _D, Fraction(t) * _D)
    if any(x.denominator != 1 for x in v):
        raise ValueError("weight is not on the lattice")
    return tuple(int(x) for x in v)


def _fixed_point_tuples(chi: int, l: int):
    """chi-tuples of pairs of Young diagrams with total size l."""
    for Y in iter_tuples(2 * chi, l):
        yield tuple(YoungTuple((Y[2 * i], Y[2 * i + 1])) for i in range(chi))


def equivariant_terms(td: ToricWallData, l: int, algebra: Optional[ExactAlgebra] = None) -> TorusFunction:
    """The Lambda^{4l - xi^2 - 3} coefficient of the equivariant wallcrossing term.

    A function of ``(eps1, eps2, t)`` with ``T = e^{-t}``; global eps-monomials
    (the ``v^(3)`` factor and the eps-part of ``exp(tau a^2/eps1 eps2)``) are
    omitted since they tend to 1 in the nonequivariant limit.
    """
    X = td.surface
    alg = algebra or ExactAlgebra(_NV, _D)
    xi_v1 = X.pairing(td.xi, td.v1)
    # exp(sum_i tau_i a_i^2 / (w(x_i) w(y_i))) contributes T^{<xi, v1>/2}
    common_mono = _form((0, 0), Fraction(-xi_v1, 2))
    dens: List[Tuple[int, ...]] = []
    nums: List[Tuple[int, ...]] = []
    # 1/wedge_{-T}(-chi(M^v)^v) = prod (1 - e^{-(t + w)})^{c}
    for wt, c in td.chi_M_dual().items():
        (nums if c > 0 else dens).extend([_form(wt, 1)] * abs(c))
    # 1/wedge_{-T^-1}(-chi(M)^v) = prod (1 - e^{-(w - t)})^{c}
    for wt, c in td.chi_M().items():
        (nums if c > 0 else dens).extend([_form(wt, -1)] * abs(c))
    common = alg.exp(common_mono)
    for wv in nums:
        common = common * alg.one_minus_exp_neg(wv)
    setups = []
    taus = []
    for i in range(X.euler):
        wx, wy = X.tangent_weights(i)
        xi_i = X.restrict(td.xi, i)
        a = vadd(_form((-xi_i[0], -xi_i[1])), (0, 0, _D))
        a = tuple(x // 2 for x in a) if all(x % 2 == 0 for x in a) else None
        if a is None:
            raise ValueError("a = (t - xi)/2 is off the lattice")
        setups.append(TorusSetup(_D, _NV, _form(wx), _form(wy), (vneg(a), a)))
        taus.append(_form(X.restrict(td.v1, i)))
    terms = []
    for Ys in _fixed_point_tuples(X.euler, l):
        mono = (0,) * _NV
        factors: List[Tuple[int, ...]] = list(dens)
        for Yi, setup, tau in zip(Ys, setups, taus):
            mono = vadd(mono, vscale(-Yi.total_size, tau))
            for alpha in range(2):
                for beta in range(2):
                    factors.extend(pair_weights(Yi, alpha, beta, setup))
        terms.append(alg.term(1, mono, factors))
    return common * alg.total(terms)


# --- exact T-extraction on a ray ---------------------------------------------

def _split_z(poly) -> Dict[int, flint.fmpq_poly]:
    """``{z-degree: polynomial in y}`` for a polynomial in (y, z)."""
    out: Dict[int, Dict[int, int]] = {}
    for (ey, ez), c in poly.to_dict().items():
        out.setdefault(int(ez), {})[int(ey)] = int(c)
    res = {}
    for k, coeffs in out.items():
        top = max(coeffs)
        res[k] = flint.fmpq_poly([coeffs.get(j, 0) for j in range(top + 1)])
    return res


def _series_coeff(num: Dict[int, flint.fmpq_poly], den: Dict[int, flint.fmpq_poly], shift: int):
    """Coefficient of z^0 of ``z^shift num(z)/den(z)`` expanded at z = 0, as (N, D) in Q[y]."""
    v = min(den)
    K = v - shift
    if K < 0:
        return flint.fmpq_poly([0]), flint.fmpq_poly([1])
    q0 = den[v]
    zero = flint.fmpq_poly([0])
    # C_k = c_k q0^{k+1} stays polynomial
    C = []
    for k in range(K + 1):
        acc = num.get(k, zero) * q0 ** k
        for j in range(k):
            qk = den.get(v + k - j)
            if qk is not None:
                acc -= C[j] * qk * q0 ** (k - 1 - j)
        C.append(acc)
    return C[K], q0 ** (K + 1)


def _reverse(parts: Dict[int, flint.fmpq_poly]) -> Tuple[Dict[int, flint.fmpq_poly], int]:
    top = max(parts)
    return {top - k: p for k, p in parts.items()}, top


def _rat_reduce(N, Dn):
    g = N.gcd(Dn)
    if g.degree() > 0:
        N, Dn = N / g, Dn / g
        N, Dn = flint.fmpq_poly(N), flint.fmpq_poly(Dn)
    return N, Dn


def _extract_on_ray(F: TorusFunction, ray: Tuple[int, int]) -> Tuple[Fraction, Tuple]:
    """``[F]_{T^0} - [F]_{(T^-1)^0}`` restricted to ``eps1 = c1 eps, eps2 = c2 eps``, at eps = 0."""
    ctx2 = _ctx(2)
    G = F.substitute_weights([(ray[0], 0), (ray[1], 0), (0, 1)], ctx2)
    num, den = _split_z(G.num), _split_z(G.den)
    sy, sz = G.shift
    # T -> 0 is z = e^{t/D} -> infinity
    rn, dn = _reverse(num)
    rd, dd = _reverse(den)
    N_inf, D_inf = _series_coeff(rn, rd, -sz - dn + dd)
    N_0, D_0 = _series_coeff(num, den, sz)
    N, Dn = _rat_reduce(N_inf * D_0 - N_0 * D_inf, D_inf * D_0)
    d1 = Dn(1)
    if d1 == 0:
        raise PoleError(f"eps-pole survives the limit along ray {ray}")
    val = N(1) / d1
    # y^{sy} -> 1
    return Fraction(int(val.p), int(val.q)), (N, Dn, sy)


@dataclass
class LocalizationResult:
    degrees: Dict[int, int]
    equivariant: Dict[int, TorusFunction]
    rays: Tuple[Tuple[int, int], ...]


def delta_localization(td: ToricWallData, l_max: int = 1,
                       rays: Sequence[Tuple[int, int]] = ((1, 3), (2, 5))) -> LocalizationResult:
    """Nonequivariant wallcrossing coefficients ``{d: value}`` for ``l = n + m <= l_max``.

    Each value is computed along every ray; the rays must agree exactly.
    """
    if len(rays) < 2:
        raise ValueError("two rays are required for the limit agreement test")
    X = td.surface
    xi_sq = X.pairing(td.xi, td.xi)
    alg = ExactAlgebra(_NV, _D)
    degs: Dict[int, int] = {}
    eq: Dict[int, TorusFunction] = {}
    for l in range(l_max + 1):
        d = 4 * l - xi_sq - 3
        F = equivariant_terms(td, l, alg)
        eq[d] = F
        vals = [_extract_on_ray(F, ray)[0] for ray in rays]
        if len(set(vals)) != 1:
            raise PoleError(f"rays disagree at Lambda^{d}: {vals}")
        if vals[0].denominator != 1:
            raise ArithmeticError(f"non-integral wallcrossing coefficient {vals[0]}")
        degs[d] = int(vals[0])
    return LocalizationResult(degs, eq, tuple(rays))


def _limit_in_t(F: TorusFunction, ray: Tuple[int, int]) -> Tuple[flint.fmpq_poly, flint.fmpq_poly, int]:
    """``F`` at eps = 0 with T fixed: ``z^shift N(z)/D(z)`` where ``z = e^{t/2}``."""
    G = F.substitute_weights([(ray[0], 0), (ray[1], 0), (0, 1)], _ctx(2))

    def at_y1(poly):
        acc: Dict[int, int] = {}
        for (ey, ez), c in poly.to_dict().items():
            acc[int(ez)] = acc.get(int(ez), 0) + int(c)
        top = max(acc) if acc else 0
        return flint.fmpq_poly([acc.get(k, 0) for k in range(top + 1)])

    N, Dn = at_y1(G.num), at_y1(G.den)
    if Dn == 0:
        raise PoleError("the eps -> 0 limit at fixed T does not exist")
    return N, Dn, G.shift[1]


def _laurent_coeff_at(N, Dn, point, order: int) -> Fraction:
    """Coefficient of ``u^order`` of N/Dn expanded at z = point + u."""
    zpu = flint.fmpq_poly([point, 1])
    Nu, Du = N(zpu), Dn(zpu)
    cd = Du.coeffs()
    v = next(i for i, c in enumerate(cd) if c != 0)
    target = order + v
    if target < 0:
        return Fraction(0)
    cn = Nu.coeffs()
    q0 = cd[v]
    c = []
    for k in range(target + 1):
        acc = cn[k] if k < len(cn) else 0
        for j in range(k):
            idx = v + k - j
            if idx < len(cd):
                acc -= c[j] * cd[idx]
        c.append(acc / q0)
    val = c[target]
    return Fraction(int(val.p), int(val.q))


def residue_check(td: ToricWallData, l: int, ray: Tuple[int, int] = (1, 3)) -> dict:
    """Compare ``[.]_{T^0} - [.]_{(T^-1)^0}`` with ``2 Res_{z=1} F dz/z`` at eps = 0.

    Also reports the poles of the limit in ``z = T^{-1/2}``; they should lie in
    ``{0, infinity, 1, -1}``.
    """
    F = equivariant_terms(td, l)
    N, Dn, sz = _limit_in_t(F, ray)
    # F/z = z^{sz-1} N / Dn
    if sz - 1 >= 0:
        N1, D1 = N * flint.fmpq_poly([0] * (sz - 1) + [1]), Dn
    else:
        N1, D1 = N, Dn * flint.fmpq_poly([0] * (1 - sz) + [1])
    N1, D1 = _rat_reduce(N1, D1)
    res1 = _laurent_coeff_at(N1, D1, 1, -1)
    resm1 = _laurent_coeff_at(N1, D1, -1, -1)
    # strip the factors z, z-1, z+1 and see what is left
    rest = D1
    for f in (flint.fmpq_poly([0, 1]), flint.fmpq_poly([-1, 1]), flint.fmpq_poly([1, 1])):
        while rest.degree() > 0 and (rest % f) == 0:
            rest = flint.fmpq_poly(rest / f)
    d = 4 * l - td.surface.pairing(td.xi, td.xi) - 3
    direct = _extract_on_ray(F, ray)[0]
    return {"d": d, "direct": direct, "two_res_at_1": 2 * res1, "res_at_1": res1, "res_at_minus_1": resm1,
            "other_poles": rest.degree() > 0, "ok": direct == 2 * res1 and rest.degree() <= 0}


def parity_flip_check(td: ToricWallData, l: int, ray: Tuple[int, int] = (1, 3)) -> dict:
    """``z -> -z`` multiplies the eps = 0 limit by ``(-1)^<xi, v1>`` (rank-0 ``v``).

    ``z = e^{t/2}``.  For odd parity this forces the constant-term extraction
    to vanish.
    """
    F = equivariant_terms(td, l)
    N, Dn, sz = _limit_in_t(F, ray)
    flip = flint.fmpq_poly([0, -1])
    parity = td.surface.pairing(td.xi, td.v1) % 2
    lhs = N(flip) * Dn * (-1) ** (sz % 2)
    rhs = N * Dn(flip) * (-1) ** parity
    return {"parity": parity, "ok": lhs == rhs}
