"""K-theoretic Nekrasov partition function with Chern-Simons level m.

Weights are integer vectors in units of 1/D over the basis
``(eps1, eps2, b_1, ..., b_{r-1})``.  For rank 2 the Cartan vector is
``(a_1, a_2) = (-a, a)`` with ``a = b_1``; for higher rank the default is
``a_alpha = b_alpha`` (alpha < r) and ``a_r = -sum b``, and callers may pass any
vector with zero sum.

The partition function is a list ``coeffs`` with ``coeffs[n]`` the coefficient
of ``Lambda^{2 r n}`` (beta = 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .gaussian import GaussianRational
from .partitions import YoungTuple, iter_tuples
from .series import INF, TruncatedSeries, series_log
from .torus import DEFAULT_D, ExactAlgebra, LatticeError, PointAlgebra, TorusFunction, random_point, to_lattice

__all__ = [
    "InstantonParams",
    "TorusSetup",
    "InstantonSeries",
    "pair_weights",
    "pair_factor",
    "fixed_point_data",
    "zinst",
    "zinst_shifted",
    "serre_duality_check",
    "weyl_check",
    "eps_expand",
    "log_expand",
    "regularity_check",
    "pole_free_check",
]

Weight = Tuple[int, ...]


def vadd(*vs: Sequence[int]) -> Weight:
    return tuple(sum(c) for c in zip(*vs))


def vscale(c, v: Sequence[int]) -> Weight:
    c = Fraction(c)
    out = []
    for x in v:
        y = c * x
        if y.denominator != 1:
            raise LatticeError(f"{c} * {tuple(v)} leaves the D-lattice; use a larger D")
        out.append(int(y))
    return tuple(out)


def vneg(v: Sequence[int]) -> Weight:
    return tuple(-x for x in v)


@dataclass(frozen=True)
class InstantonParams:
    rank: int
    cs_level: int
    max_instanton_number: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if abs(self.cs_level) > self.rank:
            raise ValueError(f"|m| <= r required, got m={self.cs_level}, r={self.rank}")
        if self.max_instanton_number < 0:
            raise ValueError("max_instanton_number must be >= 0")


@dataclass(frozen=True)
class TorusSetup:
    """The equivariant parameters as D-lattice weights."""

    D: int
    nvars: int
    eps1: Weight
    eps2: Weight
    avec: Tuple[Weight, ...]

    @classmethod
    def standard(cls, rank: int, D: int = DEFAULT_D) -> "TorusSetup":
        n = 2 + max(rank - 1, 0)

        def unit(i):
            return tuple(D if j == i else 0 for j in range(n))

        if rank == 1:
            avec = ((0,) * n,)
        elif rank == 2:
            avec = (vneg(unit(2)), unit(2))
        else:
            basis = [unit(2 + i) for i in range(rank - 1)]
            avec = tuple(basis) + (vneg(vadd(*basis)),)
        return cls(D, n, unit(0), unit(1), avec)

    @classmethod
    def from_forms(cls, eps1, eps2, avec, D: int = DEFAULT_D) -> "TorusSetup":
        """Build from rational linear forms; enforces sum a_alpha = 0."""
        e1, e2 = to_lattice(eps1, D), to_lattice(eps2, D)
        av = tuple(to_lattice(a, D) for a in avec)
        if any(vadd(*av)):
            raise ValueError("the Cartan vector must satisfy sum a_alpha = 0")
        return cls(D, len(e1), e1, e2, av)

    @property
    def rank(self) -> int:
        return len(self.avec)

    def with_params(self, eps1: Weight, eps2: Weight, avec: Sequence[Weight]) -> "TorusSetup":
        return TorusSetup(self.D, self.nvars, tuple(eps1), tuple(eps2), tuple(tuple(a) for a in avec))

    def negated(self) -> "TorusSetup":
        return self.with_params(vneg(self.eps1), vneg(self.eps2), [vneg(a) for a in self.avec])


def pair_weights(Y: YoungTuple, alpha: int, beta: int, setup: TorusSetup) -> List[Weight]:
    """Weights w with n_{alpha,beta} = prod (1 - e^{-w}); indices are 0-based."""
    e1, e2 = setup.eps1, setup.eps2
    Ya, Yb = Y[alpha], Y[beta]
    da = vadd(setup.avec[beta], vneg(setup.avec[alpha]))
    out = []
    for s in Ya.cells():
        out.append(vadd(vscale(-Yb.leg(s), e1), vscale(Ya.arm(s) + 1, e2), da))
    for s in Yb.cells():
        out.append(vadd(vscale(Ya.leg(s) + 1, e1), vscale(-Yb.arm(s), e2), da))
    return out


def pair_factor(Y: YoungTuple, alpha: int, beta: int, setup: Optional[TorusSetup] = None, algebra=None):
    setup = setup or TorusSetup.standard(Y.rank)
    algebra = algebra or ExactAlgebra(setup.nvars, setup.D)
    return _product(algebra, pair_weights(Y, alpha, beta, setup))


def _product(algebra, ws):
    out = algebra.one()
    for w in ws:
        out = out * algebra.one_minus_exp_neg(w)
    return out


def fixed_point_data(Y: YoungTuple, m: int, setup: TorusSetup) -> Tuple[Weight, List[Weight]]:
    """Numerator exponent and denominator weights of one fixed-point term.

    The term is ``e^{mono} / prod_w (1 - e^{-w})`` times ``Lambda^{2 r |Y|}``.
    """
    r = Y.rank
    e1, e2 = setup.eps1, setup.eps2
    n = Y.total_size
    mono = vscale(Fraction(-(r + m) * n, 2), vadd(e1, e2))
    if m:
        cs = (0,) * setup.nvars
        for alpha in range(r):
            for (i, j) in Y[alpha].cells():
                cs = vadd(cs, setup.avec[alpha], vscale(-(i - 1), e1), vscale(-(j - 1), e2))
        mono = vadd(mono, vscale(m, cs))
    factors: List[Weight] = []
    for alpha in range(r):
        for beta in range(r):
            factors.extend(pair_weights(Y, alpha, beta, setup))
    return mono, factors


@dataclass
class InstantonSeries:
    """``sum_n coeffs[n] Lambda^{2 r n}``."""

    rank: int
    coeffs: list
    setup: TorusSetup
    mode: str = "exact"

    @property
    def lambda_step(self) -> int:
        return 2 * self.rank

    def coefficient(self, lam_degree: int):
        step = self.lambda_step
        if lam_degree % step:
            return 0
        return self.coeffs[lam_degree // step]

    def to_json(self) -> dict:
        out = {"rank": self.rank, "D": self.setup.D, "mode": self.mode, "coefficients": []}
        for n, c in enumerate(self.coeffs):
            entry = {"lambda_power": self.lambda_step * n}
            if isinstance(c, TorusFunction):
                entry.update(c.to_json())
            else:
                entry["value"] = f"{c.numerator}/{c.denominator}"
            out["coefficients"].append(entry)
        return out


def zinst(params: InstantonParams, setup: Optional[TorusSetup] = None, algebra=None) -> InstantonSeries:
    """Fixed-point sum over r-tuples of Young diagrams, one coefficient per n."""
    setup = setup or TorusSetup.standard(params.rank)
    if setup.rank != params.rank:
        raise ValueError("setup rank does not match params")
    algebra = algebra or ExactAlgebra(setup.nvars, setup.D)
    coeffs = [algebra.one()]
    for n in range(1, params.max_instanton_number + 1):
        terms = []
        for Y in iter_tuples(params.rank, n):
            mono, factors = fixed_point_data(Y, params.cs_level, setup)
            terms.append(algebra.term(1, mono, factors))
        coeffs.append(algebra.total(terms))
    return InstantonSeries(params.rank, coeffs, setup, algebra.mode)


def zinst_shifted(params: InstantonParams, sigma: Sequence, tau: Sequence = None,
                  setup: Optional[TorusSetup] = None, algebra=None) -> InstantonSeries:
    """Z_m(...; Lambda e^{-(tau+sigma)/4}): the n-th coefficient times e^{-2rn(tau+sigma)/4}.

    ``sigma`` and ``tau`` are rational linear forms over the torus basis.
    """
    setup = setup or TorusSetup.standard(params.rank)
    algebra = algebra or ExactAlgebra(setup.nvars, setup.D)
    base = zinst(params, setup, algebra)
    tau = tau if tau is not None else [0] * setup.nvars
    total = [Fraction(s) + Fraction(t) for s, t in zip(sigma, tau)]
    out = [base.coeffs[0]]
    for n in range(1, len(base.coeffs)):
        w = to_lattice([-Fraction(2 * params.rank * n, 4) * c for c in total], setup.D)
        out.append(base.coeffs[n] * algebra.exp(w))
    return InstantonSeries(params.rank, out, setup, algebra.mode)


def serre_duality_check(rank: int, m: int, n_max: int, mode: str = "exact", seed: int = 0,
                        points: int = 3) -> Optional[int]:
    """Compare Z_{-m}(-eps, -a) with Z_m(eps, a); return the first failing n or None."""
    setup = TorusSetup.standard(rank)
    for alg in _algebras(setup, mode, seed, points):
        lhs = zinst(InstantonParams(rank, -m, n_max), setup.negated(), alg)
        rhs = zinst(InstantonParams(rank, m, n_max), setup, alg)
        for n in range(n_max + 1):
            if not alg.is_zero(lhs.coeffs[n] - rhs.coeffs[n]):
                return n
    return None


def weyl_check(m: int, n_max: int) -> Optional[int]:
    """Rank-2 exchange a <-> -a; an exact symmetry for m = 0."""
    setup = TorusSetup.standard(2)
    flipped = setup.with_params(setup.eps1, setup.eps2, [setup.avec[1], setup.avec[0]])
    alg = ExactAlgebra(setup.nvars, setup.D)
    a = zinst(InstantonParams(2, m, n_max), setup, alg)
    b = zinst(InstantonParams(2, m, n_max), flipped, alg)
    for n in range(n_max + 1):
        if not (a.coeffs[n] - b.coeffs[n]).is_zero():
            return n
    return None


def _algebras(setup: TorusSetup, mode: str, seed: int, points: int):
    if mode == "exact":
        return [ExactAlgebra(setup.nvars, setup.D)]
    if mode == "random":
        rng = random.Random(seed)
        return [PointAlgebra(random_point(setup.nvars, rng), setup.D) for _ in range(points)]
    raise ValueError(f"unknown mode {mode!r}")


def _ray_setup(setup: TorusSetup, c1, c2) -> TorusSetup:
    """Restrict eps1 = c1 * eps, eps2 = c2 * eps with eps carried by variable 0."""
    e = setup.eps1
    eps1 = vscale(c1, e)
    eps2 = vscale(c2, e)
    return setup.with_params(eps1, eps2, setup.avec)


def eps_expand(series: InstantonSeries, ray: Tuple, order: int, constants: Sequence,
               slopes: Optional[Sequence] = None) -> TruncatedSeries:
    """Laurent expansion in eps of every coefficient, packed with eps in the p slot.

    ``series`` must have been computed on a ray setup (see :func:`zinst_on_ray`),
    so that variable 0 is ``e^{eps/D}``; the remaining variables are
    specialized to ``constants`` (one rational per variable).  Exact through
    ``eps^order``.
    """
    D = series.setup.D
    nv = series.setup.nvars
    if len(constants) != nv - 1:
        raise ValueError(f"expected {nv - 1} specialization constants")
    sl = slopes or [Fraction(1, D)] + [0] * (nv - 1)
    consts = [1] + list(constants)
    step = series.lambda_step
    L = step * (len(series.coeffs) - 1)
    terms = {}
    caps = []
    for d in range(L + 1):
        if d % step:
            caps.append(INF)
            continue
        c = series.coeffs[d // step]
        if isinstance(c, TorusFunction):
            v, co = c.laurent(sl, consts, order)
        else:
            raise TypeError("eps_expand needs exact coefficients")
        for j, x in enumerate(co):
            if x and v + j <= order:
                terms[(d, v + j)] = Fraction(x)
        caps.append(order)
    return TruncatedSeries.from_terms({k: GaussianRational(x) for k, x in terms.items()}, L,
                                      [INF] + caps[1:])


def zinst_on_ray(params: InstantonParams, c1, c2, D: int = DEFAULT_D) -> InstantonSeries:
    """Exact Z_m(c1 eps, c2 eps, a) in the variables (e^{eps/D}, e^{b/D}, ...)."""
    base = TorusSetup.standard(params.rank, D)
    # drop the eps2 variable: variables become (eps, b_1, ...)
    n = base.nvars - 1

    def proj(w):
        return (w[0] + w[1],) + tuple(w[2:])

    e = (D,) + (0,) * (n - 1)
    ray = TorusSetup(D, n, vscale(c1, e), vscale(c2, e), tuple(proj(a) for a in base.avec))
    return zinst(params, ray, ExactAlgebra(n, D))


def log_expand(params: InstantonParams, ray: Tuple, order: int, constants: Sequence) -> TruncatedSeries:
    """eps1 eps2 log Z along the ray, as a Lambda-series of eps-Laurent series."""
    c1, c2 = (Fraction(x) for x in ray)
    z = zinst_on_ray(params, c1, c2)
    # log Z at Lambda^{4n} needs the eps-expansion of z_k a bit beyond `order`;
    # poles of z_k are at most 2k, compensated by the cap bookkeeping.
    extra = 2 * params.max_instanton_number + 2
    ez = eps_expand(z, ray, order + extra, constants)
    lz = series_log(ez)
    return lz.mul_p_power(2) * (c1 * c2)


def pole_free_check(params: InstantonParams, ray: Tuple, order: int = 2, constants=(Fraction(3, 7),)):
    """``(ok, series)``: eps1 eps2 log Z has no negative eps powers through the computed order."""
    s = log_expand(params, ray, order, constants)
    L = s.lambda_order
    for d in range(L + 1):
        if s.cap(d) < 0:
            return False, s
        if any(k < 0 for k in s.strip(d)):
            return False, s
    return True, s


def regularity_check(params: InstantonParams, D: int = DEFAULT_D) -> Optional[int]:
    """Z_m(eps, -2 eps, a) = Z_m(2 eps, -eps, a) per coefficient; return the first failing n."""
    a = zinst_on_ray(params, 1, -2, D)
    b = zinst_on_ray(params, 2, -1, D)
    for n in range(params.max_instanton_number + 1):
        if not (a.coeffs[n] - b.coeffs[n]).is_zero():
            return n
    return None
