from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdonaldson.surfaces import (_wall_class, abelian_chi, admissible_degree, chi_series, chi_series_from_walls,
                                 golden_tables, hilb_points_chi, hilbert_numerator, k3_chi, k3_duality_check,
                                 wall_sets_p2)
from kdonaldson.toric import blowup_p2, p2


# ---------------------------------------------------------------- walls
def test_smallest_walls():
    assert _wall_class("0", 1, 1) == (2, -3)
    assert _wall_class("H", 1, 1) == (1, -2)


def test_wall_sets():
    assert wall_sets_p2("0", 10) == [(1, 1), (2, 2), (3, 3)]
    assert wall_sets_p2("0", 10, n=0) == [(3, 3)]
    assert wall_sets_p2("H", 8, n=1) == [(2, 2), (3, 3)]
    assert wall_sets_p2("0", 9) == []


# ---------------------------------------------------------------- chi series
def test_chi_series_small_values():
    assert chi_series("0", 0, 9) == [0, 1, 0, 0, 0, 1, 0, 0, 0, 1]
    assert [chi_series("H", n, 0)[0] for n in range(4)] == [1, 1, 1, 1]
    assert chi_series("H", 1, 8) == [1, 0, 0, 0, 6, 0, 0, 0, 21]


def test_chi_d5_is_binomial():
    # M(0, 5) is P^5, so chi(mu(H^n)) = C(n+5, 5)
    assert [chi_series("0", n, 5)[5] for n in range(6)] == [comb(n + 5, 5) for n in range(6)]


@pytest.mark.parametrize("c1,n,d", [("0", 0, 9), ("0", 2, 9), ("H", 0, 8), ("H", 1, 8)])
def test_closed_formula_matches_wall_sum(c1, n, d):
    assert chi_series(c1, n, d) == chi_series_from_walls(c1, n, d)


def test_negative_n_is_refused():
    with pytest.raises(ValueError):
        chi_series("0", -1, 5)


# ---------------------------------------------------------------- Hilbert numerators
@pytest.mark.parametrize("c1,d", [("0", 5), ("0", 9), ("0", 13), ("H", 0), ("H", 4), ("H", 8), ("H", 12)])
def test_hilbert_rows_match_fixture(c1, d):
    row = golden_tables()["P" if c1 == "0" else "Q"][str(d)]
    res = hilbert_numerator(c1, d)
    assert list(res.numerator) == row["coefficients"] and res.degree == row["degree"]
    assert res.denominator_exponent == d + 1


def test_hilbert_examples():
    assert hilbert_numerator("0", 5).numerator == (1,)
    assert hilbert_numerator("H", 0).numerator == (1,)
    assert hilbert_numerator("0", 9).label() == "P_9 = 1 + t^2 + t^4"


@pytest.mark.parametrize("c1,d", [("0", 9), ("0", 13), ("H", 4), ("H", 8), ("H", 12)])
def test_palindromic_and_positive(c1, d):
    res = hilbert_numerator(c1, d)
    assert res.palindromic and all(c >= 0 for c in res.numerator)


def test_inadmissible_degree():
    assert admissible_degree("0", 5) and admissible_degree("H", 8)
    assert not admissible_degree("0", 6) and not admissible_degree("H", 5)
    with pytest.raises(ValueError):
        hilbert_numerator("0", 6)


def test_fixture_schema():
    t = golden_tables()
    assert t["schema"] == 1
    for key in ("P", "Q"):
        for d, row in t[key].items():
            assert len(row["coefficients"]) <= row["degree"] + 1 and isinstance(row["partial"], bool)


# ---------------------------------------------------------------- K3 and abelian
def test_k3_examples():
    # a point class (Delta = 0, rank 1) gives a point moduli space
    assert k3_chi(1, 0, 1, 0) == 1
    assert hilb_points_chi(2, 2) == 6
    assert hilb_points_chi(0, 7) == 1
    assert abelian_chi(0, 3, 5) == 1


def test_hilb_points_matches_k3_formula():
    # X^[n] is M(1, 0, 1 - n), Delta = 2n, so the K3 formula with rk(v) = 0 applies
    for n in range(5):
        for q in (0, 2, 4):
            assert hilb_points_chi(n, q) == k3_chi(1, 2 * n, 0, q)


@given(st.integers(0, 3), st.integers(0, 6), st.integers(0, 3), st.integers(0, 6))
@settings(max_examples=100, deadline=None)
def test_k3_duality(rc, bc, rv, bv):
    res = k3_duality_check(rc, 2 * (bc + rc * rc - 1), rv, 2 * (bv + rv * rv - 1))
    assert res["holds"], res


# ---------------------------------------------------------------- toric geometry
def test_toric_intersection_numbers():
    X = blowup_p2()
    H, E, K = X.divisor("H"), X.divisor("E"), X.canonical
    assert (X.pairing(H, H), X.pairing(E, E), X.pairing(H, E)) == (1, -1, 0)
    assert X.pairing(K, K) == 8 and X.euler == 4 and X.signature() == 0
    assert X.pairing(K, X.divisor({"H": -3, "E": 1})) == 8
    P = p2()
    assert P.pairing(P.canonical, P.canonical) == 9 and P.signature() == 1


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=100, deadline=None)
def test_localization_pairing_agrees(a, b, c, d):
    X = blowup_p2()
    D1 = X.divisor({"H": a, "E": b})
    D2 = X.divisor({"H": c, "E": d})
    assert X.localization_pairing(D1, D2, (Fraction(3, 7), Fraction(-5, 11))) == X.pairing(D1, D2)


@given(st.integers(0, 4), st.integers(-3, 0))
@settings(max_examples=100, deadline=None)
def test_equivariant_chi_counts_sections(a, b):
    # the nonequivariant value is Riemann-Roch: 1 + D(D - K)/2
    X = blowup_p2()
    D = X.divisor({"H": a, "E": b})
    chi = sum(X.equivariant_chi(D).values())
    assert chi == 1 + (X.pairing(D, D) - X.pairing(D, X.canonical)) // 2


def test_equivariant_chi_of_hyperplane():
    P = p2()
    chi = P.equivariant_chi(P.divisor("H"))
    assert sum(chi.values()) == 3 and all(c == 1 for c in chi.values())
