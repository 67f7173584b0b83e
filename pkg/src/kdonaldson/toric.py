"""Smooth projective toric surfaces from their fans.

Conventions.  A fixed point is a two-dimensional cone ``(u, v)`` of the fan;
its tangent weights ``w(x), w(y)`` are the dual basis ``(u*, v*)`` of the
character lattice, read as linear forms in ``(eps1, eps2)``.  For a divisor
``D = sum a_rho D_rho`` the restriction to the fixed point of ``(u, v)`` is
``a_u u* + a_v v*``, so that ``iota^* K_X = -w(x) - w(y)`` and

    chi~(X, O(D)) = sum_p e^{iota_p^* D} / ((1 - e^{-w(x_p)}) (1 - e^{-w(y_p)}))

expands to ``sum_{m in P_D} e^{-m}`` for nef ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .torus import ExactAlgebra

__all__ = ["ToricSurface", "p2", "blowup_p2", "Divisor"]

Divisor = Tuple[int, ...]
Form = Tuple[int, int]


def _det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class ToricSurface:
    """A smooth complete toric surface given by its rays in counterclockwise order.

    ``named`` maps class names (``"H"``, ``"E"``) to torus-invariant divisors,
    i.e. coefficient vectors over the rays.
    """

    name: str
    rays: Tuple[Tuple[int, int], ...]
    named: Tuple[Tuple[str, Divisor], ...]

    def __post_init__(self):
        n = len(self.rays)
        for i in range(n):
            if _det(self.rays[i], self.rays[(i + 1) % n]) != 1:
                raise ValueError("rays must be counterclockwise and every cone smooth")

    # -- combinatorics ----------------------------------------------------
    @property
    def euler(self) -> int:
        return len(self.rays)

    def cone(self, i: int) -> Tuple[int, int]:
        return i, (i + 1) % len(self.rays)

    def tangent_weights(self, i: int) -> Tuple[Form, Form]:
        """``(u*, v*)`` for the cone spanned by rays i and i+1."""
        a, b = self.cone(i)
        u, v = self.rays[a], self.rays[b]
        # inverse of the matrix with columns u, v (determinant 1), rows are u*, v*
        return (v[1], -v[0]), (-u[1], u[0])

    def restrict(self, D: Divisor, i: int) -> Form:
        a, b = self.cone(i)
        us, vs = self.tangent_weights(i)
        return (D[a] * us[0] + D[b] * vs[0], D[a] * us[1] + D[b] * vs[1])

    def divisor(self, name_or_combo) -> Divisor:
        """A divisor from a name, a ray-coefficient tuple or ``{name: coeff}``."""
        if isinstance(name_or_combo, str):
            return dict(self.named)[name_or_combo]
        if isinstance(name_or_combo, dict):
            out = [0] * len(self.rays)
            table = dict(self.named)
            for k, c in name_or_combo.items():
                out = [x + c * y for x, y in zip(out, table[k])]
            return tuple(out)
        return tuple(name_or_combo)

    @property
    def canonical(self) -> Divisor:
        return tuple(-1 for _ in self.rays)

    # -- intersection theory ----------------------------------------------
    def self_intersections(self) -> List[int]:
        n = len(self.rays)
        out = []
        for i in range(n):
            prev, nxt = self.rays[i - 1], self.rays[(i + 1) % n]
            s = (prev[0] + nxt[0], prev[1] + nxt[1])
            r = self.rays[i]
            b = s[0] // r[0] if r[0] else s[1] // r[1]
            out.append(-b)
        return out

    def pairing(self, D1: Divisor, D2: Divisor) -> int:
        n = len(self.rays)
        sq = self.self_intersections()
        total = 0
        for i in range(n):
            for j in range(n):
                if i == j:
                    m = sq[i]
                elif (j - i) % n in (1, n - 1):
                    m = 1
                else:
                    m = 0
                total += D1[i] * D2[j] * m
        return total

    def signature(self) -> int:
        # b2 = n - 2 and b+ = 1 for a rational surface
        return 2 - (len(self.rays) - 2)

    def localization_pairing(self, D1: Divisor, D2: Divisor, point: Sequence[Fraction]) -> Fraction:
        """``sum_p iota^*D1 iota^*D2 / (w(x) w(y))`` at a rational point (equals the pairing)."""
        e1, e2 = (Fraction(x) for x in point)
        total = Fraction(0)
        for i in range(self.euler):
            (a1, a2), (b1, b2) = self.tangent_weights(i)
            r1, r2 = self.restrict(D1, i), self.restrict(D2, i)
            total += (r1[0] * e1 + r1[1] * e2) * (r2[0] * e1 + r2[1] * e2) / (
                (a1 * e1 + a2 * e2) * (b1 * e1 + b2 * e2))
        return total

    # -- equivariant Euler characteristics ---------------------------------
    def equivariant_chi(self, D: Divisor) -> Dict[Form, int]:
        """``chi~(X, O(D))`` as ``{weight: multiplicity}``, a Laurent polynomial by localization."""
        alg = ExactAlgebra(2, 1)
        total = alg.zero()
        for i in range(self.euler):
            wx, wy = self.tangent_weights(i)
            total = total + alg.term(1, self.restrict(D, i), [wx, wy])
        if total.den.total_degree() != 0:
            raise ArithmeticError("localization sum is not a Laurent polynomial")
        scale = int(total.den.leading_coefficient())
        out = {}
        for exps, c in total.num.to_dict().items():
            w = tuple(int(e) + s for e, s in zip(exps, total.shift))
            q = Fraction(int(c), scale)
            if q.denominator != 1:
                raise ArithmeticError("non-integral multiplicity")
            out[w] = int(q)
        return out


def p2() -> ToricSurface:
    return ToricSurface("P2", ((1, 0), (0, 1), (-1, -1)), (("H", (0, 0, 1)),))


def blowup_p2() -> ToricSurface:
    """P^2 blown up at the fixed point of the cone ((1,0),(0,1)).

    Rays ``(1,0), (1,1), (0,1), (-1,-1)``; ``E`` is the divisor of ``(1,1)``
    and ``H`` (the pullback of a line) the divisor of ``(-1,-1)``.
    """
    return ToricSurface("blowup-P2", ((1, 0), (1, 1), (0, 1), (-1, -1)),
                        (("H", (0, 0, 0, 1)), ("E", (0, 1, 0, 0))))
