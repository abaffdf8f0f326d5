import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffdensity import charsums
from ffdensity.charsums import (chi_D, gauss_sum_closed, gauss_sum_direct, gauss_sum_prime_power,
                                hayes_exponential, monic_block, monic_char_sum, poisson_char_sum,
                                residue_symbol, squarefree_char_sum_decomposition, symbol_matrix)
from ffdensity.ffpoly import MonicPoly, factorize, irreducibles, pgcd, pmod, trim

Q = 5


def monic(q, lo, hi):
    return st.integers(lo, hi).flatmap(
        lambda n: st.integers(0, q ** n - 1).map(lambda c: MonicPoly.from_code(q, n, c)))


residues = st.lists(st.integers(0, Q - 1), min_size=0, max_size=6)


def test_symbol_examples():
    x = MonicPoly.x(Q)
    assert residue_symbol(x, x) == 0
    assert residue_symbol(2, x) == -1
    assert residue_symbol(2, x, method="euler") == -1


def test_symbol_rejects_constant_modulus():
    with pytest.raises(ValueError):
        residue_symbol(MonicPoly.x(Q), MonicPoly.one(Q))


@given(monic(Q, 1, 5), monic(Q, 1, 5))
def test_symbol_zero_iff_common_factor(A, B):
    shared = pgcd(A.coeffs, B.coeffs, Q) != (1,)
    assert (residue_symbol(A, B) == 0) == shared


@given(monic(Q, 0, 6), monic(Q, 1, 6))
def test_descent_matches_euler_criterion(A, B):
    assert residue_symbol(A, B) == residue_symbol(A, B, method="euler")


@given(monic(13, 0, 4), monic(13, 1, 4))
def test_descent_matches_euler_criterion_q13(A, B):
    assert residue_symbol(A, B) == residue_symbol(A, B, method="euler")


def test_reciprocity_exhaustive_degree_4():
    blocks = [monic_block(Q, n) for n in range(1, 5)]
    rows = np.concatenate([np.pad(r, ((0, 0), (0, 5 - r.shape[1]))) for r, _ in blocks])
    deg = np.concatenate([d for _, d in blocks])
    M = symbol_matrix((rows, deg), (rows, deg), Q)
    assert rows.shape[0] == 780
    assert np.array_equal(M, M.T)


@given(monic(Q, 3, 3), monic(Q, 1, 3), monic(Q, 1, 3))
def test_chi_multiplicative(D, f1, f2):
    assert chi_D(D, f1 * f2) == chi_D(D, f1) * chi_D(D, f2)


def test_chi_vanishes_on_divisor():
    P = MonicPoly(Q, (1, 1))
    D = P * MonicPoly(Q, (2, 0, 1))
    assert chi_D(D, P) == 0


# -- Hayes exponential --------------------------------------------------------

def test_hayes_trivial_when_divisible():
    f = MonicPoly(Q, (1, 0, 1))
    assert hayes_exponential(f.coeffs, (3, 1), f) == 1
    assert hayes_exponential((2,), (0,), f) == 1


@pytest.mark.parametrize("c", range(Q))
def test_hayes_on_x(c):
    x = MonicPoly.x(Q)
    assert cmath.isclose(hayes_exponential((c,), (1,), x), cmath.exp(2j * math.pi * c / Q), abs_tol=1e-12)


@given(residues, residues, residues)
def test_hayes_additive(u1, u2, V):
    f = MonicPoly(Q, (2, 1, 0, 3, 1))
    u12 = [((u1[i] if i < len(u1) else 0) + (u2[i] if i < len(u2) else 0)) % Q
           for i in range(max(len(u1), len(u2)))]
    lhs = hayes_exponential(u12, V, f)
    rhs = hayes_exponential(u1, V, f) * hayes_exponential(u2, V, f)
    assert abs(lhs - rhs) < 1e-12


# -- Gauss sums ----------------------------------------------------------------

def test_gauss_zero_at_V_zero_prime():
    for P in irreducibles(Q, 2):
        assert abs(gauss_sum_direct((0,), P)) < 1e-9


@given(st.sampled_from(irreducibles(Q, 1) + irreducibles(Q, 2) + irreducibles(Q, 3)), residues)
def test_gauss_modulus_on_prime(P, V):
    if pmod(trim(V), P.coeffs, Q) == ():
        return  # P | V, including V = 0
    assert abs(abs(gauss_sum_direct(V, P)) - math.sqrt(P.norm)) < 1e-9


def test_gauss_multiplicative_on_coprime_moduli():
    f, h = MonicPoly(Q, (1, 1)), MonicPoly(Q, (2, 0, 1))
    for V in ((1,), (3, 2), (0, 0, 4), (1, 2, 3)):
        assert abs(gauss_sum_direct(V, f * h) - gauss_sum_direct(V, f) * gauss_sum_direct(V, h)) < 1e-9


P1 = MonicPoly(Q, (2, 1))  # x + 2


@pytest.mark.parametrize("V,j,expected", [
    # V = P: alpha = 1, so j = 1 is odd with j <= alpha
    (P1.coeffs, 1, 0),
    # alpha = 1, j = 2 = alpha + 1 even
    (P1.coeffs, 2, -5),
    # alpha = 0, j = 2 >= alpha + 2
    ((1,), 2, 0),
    ((3, 1, 1), 3, 0),
])
def test_gauss_case_table(V, j, expected):
    f = P1 ** j
    assert abs(gauss_sum_prime_power(V, P1, j) - expected) < 1e-9
    assert abs(gauss_sum_direct(V, f) - expected) < 1e-9


def test_gauss_V_zero_convention():
    # infinite valuation: phi(P^j) for even j, 0 for odd j
    assert gauss_sum_prime_power((), P1, 2) == 20
    assert gauss_sum_prime_power((), P1, 3) == 0
    assert abs(gauss_sum_direct((0,), P1 ** 2) - 20) < 1e-9


@given(monic(Q, 1, 4), residues)
def test_gauss_closed_matches_direct(f, V):
    assert abs(gauss_sum_closed(V, f) - gauss_sum_direct(V, f)) < 1e-9


@given(monic(Q, 1, 4))
def test_gauss_transform_matches_direct(f):
    G = charsums.gauss_sums_all(f)
    for code in (0, 1, Q ** f.degree - 1, (7 * Q + 3) % Q ** f.degree):
        V = [(code // Q ** i) % Q for i in range(f.degree)]
        assert abs(G[code] - gauss_sum_direct(V, f)) < 1e-9


# -- character sums --------------------------------------------------------------

def test_monic_char_sum_m0():
    assert monic_char_sum(MonicPoly(Q, (1, 1, 1)), 0) == 1


def test_monic_char_sum_square_counts_coprime():
    P = MonicPoly(Q, (2, 0, 1))
    f = P * P
    for m in range(0, 4):
        coprime = sum(1 for c in range(Q ** m)
                      if pgcd(MonicPoly.from_code(Q, m, c).coeffs, P.coeffs, Q) == (1,))
        assert monic_char_sum(f, m) == coprime


@given(monic(Q, 1, 4), st.integers(0, 5))
def test_poisson_matches_direct(f, m):
    assert abs(poisson_char_sum(f, m) - monic_char_sum(f, m)) <= 1e-9


def test_poisson_single_dual_term():
    # f = P of odd degree, m = d(P) - 1: only V in M_0
    P = irreducibles(Q, 3)[4]
    G = charsums.gauss_sums_all(P)
    expected = Q ** (2 + 0.5) / Q ** 3 * G[1]
    assert abs(poisson_char_sum(P, 2, G) - expected) < 1e-12
    assert abs(expected - monic_char_sum(P, 2)) < 1e-9


def test_squarefree_decomposition_prime_beyond_family_degree():
    # d(P) > 2g + 1 forces C = 1, so rhs = S(3) - q S(1)
    P = irreducibles(Q, 4)[0]
    lhs, rhs = squarefree_char_sum_decomposition(P, 1)
    assert rhs == monic_char_sum(P, 3) - Q * monic_char_sum(P, 1)
    assert lhs == rhs


@given(monic(Q, 1, 5))
def test_squarefree_decomposition_exact(f):
    lhs, rhs = squarefree_char_sum_decomposition(f, 1)
    assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 7))
def test_polya_vinogradov_constant(n):
    for P in irreducibles(Q, n):
        lhs, _ = squarefree_char_sum_decomposition(P, 1)
        assert abs(lhs) <= 4 * math.sqrt(P.norm)


def test_square_average_bound():
    for n in range(1, 5):
        for c in range(Q ** n):
            f = MonicPoly.from_code(Q, n, c)
            mean, pred = charsums.square_average(f, 1)
            assert abs(mean - pred) <= 10 * Q ** -2


def test_weil_bound_and_square_detection():
    for V, n, s in charsums.weil_sums(Q, 3, 5):
        assert not charsums.is_square(V)
        assert abs(s) <= 2 * V.degree * Q ** (n / 2) / n
    assert charsums.is_square(MonicPoly(Q, (1, 2, 1)))


def test_factorization_feeds_closed_form():
    f = MonicPoly(Q, (2, 1)) ** 2 * MonicPoly(Q, (2, 0, 1))
    assert len(factorize(f).factors) == 2
    for V in ((1,), (0, 1), (4, 4, 4)):
        assert abs(gauss_sum_closed(V, f) - gauss_sum_direct(V, f)) < 1e-9
