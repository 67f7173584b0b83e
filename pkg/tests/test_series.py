import json
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from kdonaldson.gaussian import GaussianRational, I, parse_rational
from kdonaldson.series import (NonUnitError, TruncatedSeries, TruncationError, UniSeries, binomial_pow,
                               change_var_residue, coeff_extract, series_exp, series_log, substitute)

from strategies import gaussian, series

G = GaussianRational


def lam(L, d=1, k=0, c=1):
    return TruncatedSeries.monomial(c, d, k, L)


# --------------------------------------------------------------- Gaussian rationals
def test_gaussian_i_squared():
    assert I * I == G(-1)


def test_gaussian_lowest_terms_and_json():
    x = G(mpq(6, 4), mpq(-2, 8))
    assert x.to_json() == {"re": "3/2", "im": "-1/4"}
    assert G.from_json(x.to_json()) == x
    assert parse_rational("-10/4") == mpq(-5, 2)


@given(gaussian, gaussian.filter(lambda g: not g.is_zero()))
@settings(max_examples=100)
def test_gaussian_field_axioms(a, b):
    assert (a * b) / b == a
    assert a - a == G(0)


# --------------------------------------------------------------- ring ops
def test_product_difference_of_squares():
    L = 3
    one = TruncatedSeries.one(L)
    assert (one + lam(L)) * (one - lam(L)) == one - lam(L, 2)


def test_geometric_series():
    L = 5
    inv = (TruncatedSeries.one(L) - lam(L)).inverse()
    assert inv == sum((lam(L, d) for d in range(1, L + 1)), TruncatedSeries.one(L))


def test_p_monomials_cancel():
    x = TruncatedSeries.monomial(2, 0, 1, 2) * TruncatedSeries.monomial(mpq(1, 2), 0, -1, 2)
    assert x == TruncatedSeries.one(2)


def test_non_unit_inverse_errors():
    with pytest.raises(NonUnitError, match="non-unit leading term"):
        lam(3).inverse()


def test_no_zero_coefficients_stored_and_canonical_order():
    s = TruncatedSeries.from_terms({(1, 2): 1, (0, 5): 0, (0, -1): 3, (1, -4): 2}, 2)
    assert [(d, k) for d, k, _ in s.terms()] == [(0, -1), (1, -4), (1, 2)]


def test_order_truncation_is_min():
    a = TruncatedSeries.one(5) + lam(5, 4)
    b = TruncatedSeries.one(2)
    assert (a * b).lambda_order == 2


# --------------------------------------------------------------- exp / log
def test_exp_log_examples():
    L = 4
    one = TruncatedSeries.one(L)
    assert series_exp(series_log(one + lam(L))) == one + lam(L)
    assert series_exp(TruncatedSeries.zero(L)) == one
    x = TruncatedSeries.monomial(1, 1, -1, L)
    assert series_log(series_exp(x)) == x


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError, match="constant"):
        series_exp(TruncatedSeries.one(2))


def test_log_rejects_non_unit_constant():
    with pytest.raises(ValueError):
        series_log(TruncatedSeries.one(2) * 3)


@given(series(const="zero"))
@settings(max_examples=100, deadline=None)
def test_exp_log_round_trip(s):
    assert series_log(series_exp(s)) == s
    e = series_exp(s)
    assert series_exp(series_log(e)) == e


@given(series(const="any"))
@settings(max_examples=100, deadline=None)
def test_invert_twice(s):
    assert s.inverse().inverse() == s
    assert s * s.inverse() == TruncatedSeries.one(s.lambda_order)


@given(series(const="unit"))
@settings(max_examples=100, deadline=None)
def test_sqrt_squared(s):
    r = binomial_pow(s, Fraction(1, 2), leading_root=1)
    assert r * r == s
    m = binomial_pow(s, Fraction(-1, 2), leading_root=1)
    assert m * m * s == TruncatedSeries.one(s.lambda_order)


# --------------------------------------------------------------- binomial powers
def test_binomial_minus_half_matches_newton():
    # (1 + u)^{-1/2} with u = Lambda^2 (1 + p): coefficients C(-1/2, n)
    L = 8
    u = lam(L, 2) + TruncatedSeries.monomial(1, 2, 1, L)
    got = binomial_pow(TruncatedSeries.one(L) + u, Fraction(-1, 2), leading_root=1)
    expect = TruncatedSeries.zero(L)
    c = Fraction(1)
    upow = TruncatedSeries.one(L)
    for n in range(5):
        expect = expect + upow * G(mpq(c.numerator, c.denominator))
        c = c * (Fraction(-1, 2) - n) / (n + 1)
        upow = upow * u
    assert got == expect


def test_binomial_examples():
    four_p2 = TruncatedSeries.monomial(4, 0, 2, 3)
    assert binomial_pow(four_p2, Fraction(1, 2), leading_root=2) == TruncatedSeries.monomial(2, 0, 1, 3)
    assert binomial_pow(TruncatedSeries.one(3), Fraction(-1, 2)) == TruncatedSeries.one(3)


def test_binomial_derives_gaussian_root():
    # -4 = (2i)^2
    s = TruncatedSeries.monomial(-4, 0, 0, 2)
    assert binomial_pow(s, Fraction(1, 2)) ** 2 == s


def test_binomial_non_square_errors():
    with pytest.raises(ValueError):
        binomial_pow(TruncatedSeries.monomial(2, 0, 0, 2), Fraction(1, 2))


# --------------------------------------------------------------- extraction
def test_coeff_extract_examples():
    s = lam(2) * (TruncatedSeries.monomial(1, 0, 1, 2) + TruncatedSeries.monomial(1, 0, -1, 2) + 1)
    assert coeff_extract(s, "p", 0, lam=1) == G(1)
    at0 = UniSeries.expand_rational({0: 1}, {0: 1, 1: -1}, "zero", 6)
    atinf = UniSeries.expand_rational({0: 1}, {0: 1, 1: -1}, "infinity", 6)
    assert coeff_extract(at0, "t", 0) == G(1)
    assert coeff_extract(atinf, "t", 0) == G(0)
    assert atinf.coeff(-1) == G(-1)


def test_extract_below_floor_is_an_error():
    s = TruncatedSeries.from_terms({(0, 0): 1}, 1, caps=3)
    with pytest.raises(TruncationError):
        s.coeff(0, 4)
    with pytest.raises(TruncationError):
        s.coeff(2, 0)


# --------------------------------------------------------------- substitution
def x_series(terms, L):
    return TruncatedSeries.from_terms(terms, L)


def test_substitute_examples():
    L = 2
    y2 = x_series({(0, 2): 1}, L)
    g = x_series({(0, 1): 1, (0, 2): 1}, L)
    assert substitute(y2, g) == x_series({(0, 2): 1, (0, 3): 2, (0, 4): 1}, L)
    inv = x_series({(0, -1): 1}, L)
    x = x_series({(0, 1): 1}, L)
    assert substitute(inv, x) == inv
    ident = x_series({(0, 1): 1}, L)
    g2 = x_series({(0, 1): 1, (0, 2): 3, (1, 1): 2, (1, 3): 1}, L)
    assert substitute(ident, g2) == g2


def test_change_var_residue_examples():
    L = 1
    f = x_series({(0, -1): 1}, L)
    y = x_series({(0, 1): 1, (0, 2): 1}, L)
    assert change_var_residue(f, y) == [G(1), G(0)]
    # f = y^{m-1} with m != 0 gives 0
    for m in (-2, -1, 1, 2, 3):
        f = x_series({(0, m - 1): 1}, L)
        assert all(c.is_zero() for c in change_var_residue(f, y))
    # f = y^{-1}(1 + Lambda y), y = x + Lambda: residue 1 at Lambda^0 and 0 at Lambda^1
    f = x_series({(0, -1): 1, (1, 0): 1}, L)
    y = x_series({(0, 1): 1, (1, 0): 1}, L)
    assert change_var_residue(f, y) == [G(1), G(0)]


def test_change_var_residue_requires_unit_leading_coefficient():
    with pytest.raises(ValueError):
        change_var_residue(x_series({(0, -1): 1}, 1), x_series({(0, 1): 2}, 1))


@st.composite
def residue_inputs(draw):
    L = 2
    yterms = {(0, 1): G(1)}
    for key in ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        if draw(st.booleans()):
            yterms[key] = draw(gaussian)
    fterms = {}
    for d in range(L + 1):
        for k in draw(st.lists(st.integers(-3, 2), max_size=4, unique=True)):
            fterms[(d, k)] = draw(gaussian)
    return TruncatedSeries.from_terms(fterms, L), TruncatedSeries.from_terms(yterms, L)


@given(residue_inputs())
@settings(max_examples=100, deadline=None)
def test_change_of_variable_residue_invariance(data):
    f, y = data
    assert change_var_residue(f, y) == f.p_slice(-1)


# --------------------------------------------------------------- serialization
def test_json_schema_and_round_trip():
    s = TruncatedSeries.from_terms({(0, 0): G(1, mpq(1, 2)), (1, -1): G(mpq(-3, 4))}, 2)
    obj = s.to_json()
    assert obj == {"lambda_order": 2, "terms": [
        {"lam": 0, "p": 0, "re": "1/1", "im": "1/2"},
        {"lam": 1, "p": -1, "re": "-3/4", "im": "0/1"}]}
    assert TruncatedSeries.from_json(json.loads(json.dumps(obj))) == s


def test_no_floats_anywhere():
    s = series_exp(lam(4) * TruncatedSeries.monomial(1, 0, -1, 4))
    for _, _, c in s.terms():
        assert isinstance(c.re, type(mpq(1))) and isinstance(c.im, type(mpq(1)))
