from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from kdonaldson.gaussian import I, GaussianRational
from kdonaldson.theta import (SWSeries, bernoulli, check_U1, contact_check, dtau_check, eisenstein,
                              genus1_factors, jacobi_theta, theta_constant)

G = GaussianRational


def p_coeffs(s, d=0):
    return {k: c for dd, k, c in s.terms() if dd == d}


def test_theta_constants_examples():
    assert p_coeffs(theta_constant((0, 0), 20)) == {0: G(1), 4: G(2), 16: G(2)}
    assert p_coeffs(theta_constant((1, 0), 30)) == {1: G(2), 9: G(2), 25: G(2)}
    assert p_coeffs(theta_constant((0, 1), 20)) == {0: G(1), 4: G(-2), 16: G(2)}


def test_theta11_constant_is_refused():
    with pytest.raises(ValueError, match="theta_11"):
        theta_constant((1, 1), 10)


def test_jacobi_quartic_identity():
    P = 60
    t00, t01, t10 = (theta_constant(c, P) for c in ((0, 0), (0, 1), (1, 0)))
    assert (t00 ** 4 - t01 ** 4 - t10 ** 4).is_zero()


@given(st.integers(0, 40))
@settings(max_examples=100, deadline=None)
def test_theta00_squared_counts_two_squares(n):
    # the p^{4n} coefficient of theta_00^2 is #{(x, y): x^2 + y^2 = n}, counted by brute force
    brute = sum(1 for x in range(-7, 8) for y in range(-7, 8) if x * x + y * y == n)
    s = theta_constant((0, 0), 4 * 40) ** 2
    assert s.coeff(0, 4 * n) == G(brute)


def test_jacobi_theta_parity_and_slices():
    t11 = jacobi_theta((1, 1), 3, 9)
    t00 = jacobi_theta((0, 0), 3, 9)
    # theta_11 is odd in w and theta_00 is even
    assert all(d % 2 == 1 for d, _, _ in t11.terms())
    assert all(d % 2 == 0 for d, _, _ in t00.terms())
    assert p_coeffs(t00, 0) == p_coeffs(theta_constant((0, 0), 9), 0)
    # d/dw theta_11 at 0 = i (p - 3 p^9 + ...), i.e. -pi theta00 theta01 theta10 after w = 2 pi i z
    prod = theta_constant((0, 0), 9) * theta_constant((0, 1), 9) * theta_constant((1, 0), 9)
    assert p_coeffs(t11, 1) == {k: c * I * G(mpq(1, 2)) for k, c in p_coeffs(prod).items()}


def test_eisenstein_examples():
    e2 = eisenstein(2, 16)
    assert p_coeffs(e2) == {0: G(1), 8: G(-24), 16: G(-72)}
    e4 = eisenstein(4, 16)
    assert p_coeffs(e4) == {0: G(1), 8: G(240), 16: G(2160)}
    with pytest.raises(ValueError):
        eisenstein(3, 8)


@given(st.integers(1, 20))
@settings(max_examples=100, deadline=None)
def test_eisenstein_divisor_sums(n):
    sigma3 = sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
    assert eisenstein(4, 8 * 20).coeff(0, 8 * n) == G(240 * sigma3)


def test_bernoulli():
    assert [bernoulli(k) for k in (0, 1, 2, 4, 6)] == [1, Fraction(-1, 2), Fraction(1, 6), Fraction(-1, 30),
                                                       Fraction(1, 42)]


@pytest.fixture(scope="module")
def sw():
    return SWSeries(3, 8)


def test_u_leading_term(sw):
    assert sw.u.terms()[0] == (2, -2, G(mpq(-1, 4)))
    assert all(d % 2 == 0 for d, _, _ in sw.u.terms())


def test_h_leading_term(sw):
    d, k, c = sw.h.terms()[0]
    assert (d, k, c) == (1, -1, I)
    assert all(d % 2 == 1 for d, _, _ in sw.h.terms())


def test_dadq_leading_term(sw):
    assert sw.dadq.terms()[0] == (1, -1, I * G(mpq(1, 2)))


def test_d2f_is_32_T(sw):
    assert sw.d2F() == sw.T * 32
    assert sw.T.terms()[0] == (2, 2, G(1))


def test_weighted_precision(sw):
    for d in range(sw.L + 1):
        assert sw.u.cap(d) >= sw.P - d or not sw.u.strip(d)


@pytest.mark.parametrize("L,P", [(4, 16), (8, 24)])
def test_contact_identities_vanish(L, P):
    for name, s in contact_check(L, P).items():
        assert s.is_zero(), name
    assert check_U1(L, P).is_zero()


def test_dtau_identities_vanish():
    for name, s in dtau_check(6, 16).items():
        assert s.is_zero(), name


def test_genus1_factors():
    # chi = 4, sigma = 0: (2/(theta_00 theta_10))^2 = p^{-2} (1 - 4 p^4 + ...)
    g = genus1_factors(4, 0, 0, 0, 8)
    assert p_coeffs(g)[-2] == G(1) and p_coeffs(g)[2] == G(-4)
    with pytest.raises(NotImplementedError):
        genus1_factors(4, 0, 1, 0, 8)
    with pytest.raises(ValueError):
        genus1_factors(3, 0, 0, 0, 8)
