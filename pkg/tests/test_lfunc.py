import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffdensity.charsums import legendre, squarefree_block
from ffdensity.ffpoly import MonicPoly, squarefree_codes
from ffdensity.lfunc import (LPolynomial, RiemannHypothesisAlarm, complete_by_functional_equation,
                             family_zeros, functional_equation_defect, l_polynomial,
                             lambda_coefficients, lambda_coefficients_newton,
                             lambda_coefficients_primes, newton_coefficients, newton_lambda,
                             rh_defect, zeros)

Q = 5
H3 = [MonicPoly.from_code(Q, 3, int(c)) for c in squarefree_codes(Q, 3)]
H5_codes = squarefree_codes(Q, 5)


def h5():
    return st.sampled_from(H5_codes.tolist()).map(lambda c: MonicPoly.from_code(Q, 5, c))


def test_c1_is_five_legendre_symbols():
    D = MonicPoly(Q, (1, 1, 0, 1))  # x^3 + x + 1
    L = l_polynomial(D)
    # chi_D(x + a) = (D / (x + a)) = legendre(D(-a))
    by_hand = sum(legendre(((-a) ** 3 + (-a) + 1) % Q, Q) for a in range(Q))
    assert L.coeffs[0] == 1
    assert L.coeffs[1] == by_hand


@pytest.mark.parametrize("D", H3, ids=str)
def test_genus_one_structure(D):
    L = l_polynomial(D)
    assert L.coeffs[2] == Q
    assert functional_equation_defect(L) == 0
    z = zeros(L).zeros
    assert abs(np.prod(z) - 1 / Q) < 1e-12  # Vieta: product of roots c_0/c_2
    assert rh_defect(z, Q) <= 1e-9


@given(h5())
def test_genus_two_functional_equation(D):
    L = l_polynomial(D)
    assert L.genus == 2 and L.coeffs[4] == Q ** 2
    assert functional_equation_defect(L) == 0


def test_corrupted_coefficient_detected():
    L = l_polynomial(H3[7])
    bad = LPolynomial(Q, 1, (1, L.coeffs[1], L.coeffs[2] + 1))
    assert functional_equation_defect(bad) > 0


def test_lpolynomial_rejects_malformed():
    with pytest.raises(ValueError):
        LPolynomial(Q, 1, (2, 0, 5))
    with pytest.raises(ValueError):
        LPolynomial(Q, 2, (1, 0, 5))
    with pytest.raises(ValueError):
        l_polynomial(MonicPoly(Q, (0, 0, 1)))  # even degree
    with pytest.raises(ValueError):
        l_polynomial(MonicPoly(Q, (0, 0, 0, 1)))  # not squarefree


def test_zeros_reexpand():
    for D in H3[:20]:
        L = l_polynomial(D)
        re = zeros(L).reexpand()
        assert np.max(np.abs(re - L.as_array())) < 1e-8


@given(h5())
def test_zero_pairs_are_conjugate_and_on_circle(D):
    z = zeros(l_polynomial(D)).zeros
    assert rh_defect(z, Q) <= 1e-9
    # real coefficients: the multiset is closed under conjugation
    assert np.allclose(np.sort_complex(z), np.sort_complex(np.conj(z)), atol=1e-9)


def test_rh_alarm_on_fake_polynomial():
    fake = LPolynomial(Q, 1, (1, 0, 1))  # roots on |u| = 1
    with pytest.raises(RiemannHypothesisAlarm):
        zeros(fake)


def test_repeated_root_refined():
    # (1 - 5u^2)^2 has double roots; the eigenvalue solver alone is only ~1e-8 accurate
    C = np.array([[1, 0, -10, 0, 25]])
    z = family_zeros(C, q=Q)
    assert rh_defect(z[0], Q) < 1e-12


def test_lambda_a1_equals_c1():
    for D in H3:
        assert lambda_coefficients(D, 1)[0] == l_polynomial(D).coeffs[1]


def test_lambda_trivial_character_sanity():
    # chi = 1 everywhere gives zeta = 1/(1 - q u): its coefficients are q^n
    a = -newton_lambda(np.array([[1, -Q]]), 6)[0, 1:]
    assert a.tolist() == [Q ** n for n in range(1, 7)]


@given(h5())
def test_lambda_routes_agree_genus_two(D):
    assert lambda_coefficients_primes(D, 7) == lambda_coefficients_newton(l_polynomial(D), 7)


def test_lambda_routes_agree_genus_one_all():
    for D in H3:
        assert lambda_coefficients_primes(D, 7) == lambda_coefficients_newton(l_polynomial(D), 7)


def test_newton_round_trip_and_completion():
    rows, _ = squarefree_block(Q, 5)
    C = np.array([l_polynomial(MonicPoly(Q, tuple(r))).coeffs for r in rows[:50]], dtype=np.int64)
    A = newton_lambda(C, 4)
    assert np.array_equal(newton_coefficients(A, 4), C)
    assert np.array_equal(complete_by_functional_equation(C[:, :3], 2, Q), C)


def test_newton_coefficients_rejects_inconsistent():
    with pytest.raises(ArithmeticError):
        newton_coefficients(np.array([[0, 1, 0]]), 2)
