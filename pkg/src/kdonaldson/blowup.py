"""Partition function on the blown-up plane and the blowup identities.

The lattice sum runs over normalized vectors ``l`` (fractional part ``-k/r``,
``sum l = 0``).  A lattice point contributes at Lambda-degrees
``r * sum(l^2) + 2 r (n1 + n2)``, so truncating at degree ``L`` needs only the
finitely many ``l`` with ``r * sum(l^2) <= L``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from .instanton import InstantonParams, TorusSetup, vadd, vneg, vscale, zinst
from .torus import ExactAlgebra, PointAlgebra, random_point

__all__ = [
    "BlowupParams",
    "l_weights",
    "l_factor",
    "lattice_vectors",
    "zhat",
    "blowup_identity_check",
    "blowup_duality_check",
]


@dataclass(frozen=True)
class BlowupParams:
    rank: int
    cs_level: int
    c1_class: int
    line_power: int

    def __post_init__(self):
        if not 0 <= self.c1_class < self.rank:
            raise ValueError("need 0 <= k < r")
        if abs(self.cs_level) > self.rank:
            raise ValueError("|m| <= r required")


def l_weights(lvec: Sequence[Fraction], alpha: int, beta: int, setup: TorusSetup) -> List[Tuple[int, ...]]:
    """Weights ``w`` with ``l_{alpha,beta} = prod (1 - e^{-w})`` for the root e_alpha - e_beta.

    With ``n = l_alpha - l_beta`` and ``A = a_alpha - a_beta``:
    ``n < 0``: ``-i eps1 - j eps2 + A`` for ``i + j <= -n - 1``;
    ``n > 1``: ``(i+1) eps1 + (j+1) eps2 + A`` for ``i + j <= n - 2``.
    """
    n = Fraction(lvec[alpha]) - Fraction(lvec[beta])
    if n.denominator != 1:
        raise ValueError("l_alpha - l_beta must be an integer")
    n = int(n)
    A = vadd(setup.avec[alpha], vneg(setup.avec[beta]))
    e1, e2 = setup.eps1, setup.eps2
    out = []
    if n < 0:
        for i in range(-n):
            for j in range(-n - i):
                out.append(vadd(vscale(-i, e1), vscale(-j, e2), A))
    elif n > 1:
        for i in range(n - 1):
            for j in range(n - 1 - i):
                out.append(vadd(vscale(i + 1, e1), vscale(j + 1, e2), A))
    return out


def l_factor(lvec: Sequence, alpha: int, beta: int, setup: Optional[TorusSetup] = None, algebra=None):
    setup = setup or TorusSetup.standard(len(lvec))
    algebra = algebra or ExactAlgebra(setup.nvars, setup.D)
    out = algebra.one()
    for w in l_weights(lvec, alpha, beta, setup):
        out = out * algebra.one_minus_exp_neg(w)
    return out


def _all_l_weights(lvec, setup):
    r = len(lvec)
    ws = []
    for alpha in range(r):
        for beta in range(r):
            if alpha != beta:
                ws.extend(l_weights(lvec, alpha, beta, setup))
    return ws


def lattice_vectors(r: int, k: int, max_degree: int) -> List[Tuple[Fraction, ...]]:
    """All normalized ``l`` with ``r * sum(l^2) <= max_degree``, in a canonical order."""
    shift = Fraction(k, r)
    bound = isqrt(max(max_degree, 0) // r + 1) + 2
    out = []
    for head in product(range(-bound, bound + 1), repeat=r - 1):
        last = k - sum(head)
        kvec = tuple(head) + (last,)
        lvec = tuple(Fraction(x) - shift for x in kvec)
        if r * sum(x * x for x in lvec) <= max_degree:
            out.append(lvec)
    out.sort(key=lambda l: (r * sum(x * x for x in l), l))
    return out


def _lambda_degree(lvec) -> int:
    r = len(lvec)
    v = r * sum(x * x for x in lvec)
    assert v.denominator == 1
    return int(v)


def zhat(params: BlowupParams, order: int, setup: Optional[TorusSetup] = None, algebra=None) -> Dict[int, object]:
    """``{Lambda-degree: coefficient}`` of the blown-up partition function through ``order``."""
    r, m, k, d = params.rank, params.cs_level, params.c1_class, params.line_power
    setup = setup or TorusSetup.standard(r)
    algebra = algebra or ExactAlgebra(setup.nvars, setup.D)
    e1, e2 = setup.eps1, setup.eps2
    s12 = vadd(e1, e2)
    shift_d = Fraction(d) + m * (Fraction(-1, 2) + Fraction(k, r))
    X = shift_d - Fraction(r, 2)
    overall = algebra.exp(vscale(Fraction(k ** 3 * m, 6 * r * r), s12))
    out: Dict[int, object] = {}
    for lvec in lattice_vectors(r, k, order):
        base_deg = _lambda_degree(lvec)
        nmax = (order - base_deg) // (2 * r)
        ll = sum(x * x for x in lvec)
        mono = vscale(X * ll / 2, s12)
        la = (0,) * setup.nvars
        for x, a in zip(lvec, setup.avec):
            la = vadd(la, vscale(x, a))
        mono = vadd(mono, vscale(shift_d, la))
        if m:
            cube = sum(x ** 3 for x in lvec) / 6
            quad = (0,) * setup.nvars
            for x, a in zip(lvec, setup.avec):
                quad = vadd(quad, vscale(x * x / 2, a))
            mono = vadd(mono, vscale(m * cube, s12), vscale(m, quad))
        pref = overall * algebra.term(1, mono, _all_l_weights(lvec, setup))
        s1 = setup.with_params(e1, vadd(e2, vneg(e1)), [vadd(a, vscale(x, e1)) for x, a in zip(lvec, setup.avec)])
        s2 = setup.with_params(vadd(e1, vneg(e2)), e2, [vadd(a, vscale(x, e2)) for x, a in zip(lvec, setup.avec)])
        z1 = zinst(InstantonParams(r, m, nmax), s1, algebra).coeffs
        z2 = zinst(InstantonParams(r, m, nmax), s2, algebra).coeffs
        z1 = [c * algebra.exp(vscale(n * X, e1)) for n, c in enumerate(z1)]
        z2 = [c * algebra.exp(vscale(n * X, e2)) for n, c in enumerate(z2)]
        for n in range(nmax + 1):
            prod_n = algebra.total([z1[i] * z2[n - i] for i in range(n + 1)])
            deg = base_deg + 2 * r * n
            contrib = pref * prod_n
            out[deg] = out[deg] + contrib if deg in out else contrib
    # any lattice point outside the enumeration starts above `order`
    assert all(_lambda_degree(l) > order for l in lattice_vectors(r, k, order + 4 * r)
               if l not in set(lattice_vectors(r, k, order)))
    return out


def _algebras(setup, mode, seed, points):
    if mode == "exact":
        return [ExactAlgebra(setup.nvars, setup.D)]
    rng = random.Random(seed)
    return [PointAlgebra(random_point(setup.nvars, rng), setup.D) for _ in range(points)]


def blowup_identity_check(r: int, m: int, k: int, d: int, order: int, mode: str = "exact",
                          seed: int = 0, points: int = 3) -> dict:
    """Compare the blown-up partition function with Z_m (k = 0) or with 0 (k > 0).

    Returns ``{"holds": bool, "first_failing_order": int | None, "target": ...}``.
    """
    setup = TorusSetup.standard(r)
    target = "Z" if k == 0 else "0"
    first = None
    for alg in _algebras(setup, mode, seed, points):
        zh = zhat(BlowupParams(r, m, k, d), order, setup, alg)
        z = zinst(InstantonParams(r, m, order // (2 * r)), setup, alg).coeffs if k == 0 else None
        for deg in range(order + 1):
            lhs = zh.get(deg, alg.zero())
            if k == 0 and deg % (2 * r) == 0:
                rhs = z[deg // (2 * r)]
            else:
                rhs = alg.zero()
            if not alg.is_zero(lhs - rhs):
                first = deg if first is None else min(first, deg)
                break
    return {"holds": first is None, "first_failing_order": first, "target": target,
            "r": r, "m": m, "k": k, "d": d, "order": order, "mode": mode}


def blowup_duality_check(r: int, m: int, k: int, d: int, order: int) -> Optional[int]:
    """Zhat_{m,k,d}(eps, a) = Zhat_{-m,k,r-d}(-eps, -a); returns the first failing degree."""
    setup = TorusSetup.standard(r)
    alg = ExactAlgebra(setup.nvars, setup.D)
    lhs = zhat(BlowupParams(r, m, k, d), order, setup, alg)
    rhs = zhat(BlowupParams(r, -m, k, r - d), order, setup.negated(), alg)
    for deg in range(order + 1):
        a = lhs.get(deg, alg.zero())
        b = rhs.get(deg, alg.zero())
        if not (a - b).is_zero():
            return deg
    return None
