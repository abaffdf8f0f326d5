import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffdensity.ratios import primesums as ps
from ffdensity.ratios import recipe as rc
from ffdensity.ratios.series import laurent_from_samples, perron_contour, perron_extract
from ffdensity.ratios.typeone import (J_oe, J_oo_eq, J_oo_gt, diagonal_series, finite_part_defect,
                                     recombination)

Q = 5
A, B = 0.013, 0.029
LAURENT = ("Laurent reading: the one- and two-swap series have negative-power parts, "
           "so the literal support claims fail at small size")


# -- A2 and the scalar pieces ---------------------------------------------------------

@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=0.9), st.floats(0.001, 0.1))
def test_A2_two_printed_forms(u, a):
    c = Q ** (2 * a)
    alt = c / (u * u - c) + Q / (Q - 1)
    assert abs(rc.A2_factor(Q, u, a) - alt) < 1e-11


def test_A2_limits():
    assert abs(rc.A2_factor(Q, 0.7, 40.0) - 1 / (Q - 1)) < 1e-12
    assert rc.A2_factor(Q, 0.0, 0.02) == pytest.approx(1 / (Q - 1), abs=1e-15)
    S = rc.A2_factor(Q, None, 0.02, order=6)
    assert S[0] == pytest.approx(1 / (Q - 1))


def test_A2_pole_signalled():
    with pytest.raises(rc.PoleProximityError):
        rc.A2_factor(Q, Q ** 0.02, 0.02)


def test_tail_variants_differ_by_twice_the_tail():
    g = 2
    t = Q ** (g * (A - B))
    r = Q ** (A - B)
    Tp = rc.T2_series(Q, A, B, g, 8, "negated")
    Tg = rc.T2_series(Q, A, B, g, 8, "geometric")
    diff = Tp - Tg
    assert diff[0] == pytest.approx(2 * t / (r - 1), rel=1e-14)
    assert np.max(np.abs(np.delete(diff.coeffs, -diff.low))) == 0


def test_tail_pole_at_equal_shifts():
    with pytest.raises(rc.PoleProximityError):
        rc.T2_series(Q, 0.02, 0.02, 2, 6)


def test_T2_single_degree_structure():
    """Degree-1 block against an FFT of the rational function with the four-term numerator."""
    g, P = 2, float(Q)

    def block(u):
        w = u * u
        num = P ** (2 - 2 * A) * w - P * P ** (-2 * A) * w - P ** (2 - 3 * A + B) * w + P ** (2 - A + B)
        return Q * num * w / ((P ** (2 - 2 * A) * w - 1) * (P ** (1 + 2 * B) - w))

    S = laurent_from_samples(block, 0.9, -10, 10)
    T = rc.T2_series(Q, A, B, g, 10) - rc._tail_constant(Q, g, A, B, "geometric")
    assert max(abs(T[k] - S[k]) for k in range(-10, 11)) < 1e-13


def test_unknown_tail_variant():
    with pytest.raises(ValueError):
        rc.T2_series(Q, A, B, 2, 6, "other")


# -- Type-0 ------------------------------------------------------------------------------

def test_R1_starts_at_u2_and_is_symmetric():
    R = rc.R1_series(Q, A, B, 12)
    assert R[0] == 0 and R[1] == 0
    assert np.allclose(R.coeffs, rc.R1_series(Q, B, A, 12).coeffs, rtol=0, atol=1e-15)


def test_R1_equals_exact_diagonal_generating_function():
    R = rc.R1_series(Q, 0.01, 0.02, 12)
    J = diagonal_series(Q, 0.01, 0.02, 12)
    assert np.max(np.abs(R.coeffs - J.coeffs)) < 1e-8


def test_R1_series_against_point_formula():
    R = rc.R1_series(Q, A, B, 80)
    for u in (0.3, 0.6j, 0.5 + 0.4j):
        assert abs(R(u) - rc.R1_point(Q, A, B, u)) < 1e-12


def test_D2_literal_derivative_differs():
    pinned = rc.D2_series(Q, A, B, 8)
    literal = rc.D2_series(Q, A, B, 8, literal=True)
    w = Q ** (-(A + B))
    # pinned: n w^n; literal: (n - 1) w^n, both on u^(2n)
    assert pinned[4] == pytest.approx(2 * w ** 2)
    assert literal[4] == pytest.approx(w ** 2)


def test_mathcalC_diagonal_vanishing_piece():
    # with alpha = beta the squared-difference sum drops out; C is then B_alpha^2 + even terms
    C = rc.mathcalC_series(Q, 0.02, 0.02, 10)
    assert C[0] == 0 and all(C[k] == 0 for k in range(1, 11, 2))


# -- Type-I ---------------------------------------------------------------------------------

@pytest.mark.parametrize("g", [1, 2, 3])
def test_R23_swap_symmetric(g):
    R1 = rc.R23_series(Q, A, B, g, 4 * g + 2)
    R2 = rc.R23_series(Q, B, A, g, 4 * g + 2)
    assert np.max(np.abs((R1 - R2).coeffs)) < 1e-13


def test_R23_genus_one_support_exact():
    R = rc.R23_series(Q, A, B, 1, 6)
    assert R.max_abs_below(2) == 0


@pytest.mark.xfail(strict=True, reason=LAURENT)
def test_R23_literal_support_genus_two():
    assert rc.R23_series(Q, A, B, 2, 10).max_abs_below(4) == 0


@pytest.mark.parametrize("g", [2, 3])
def test_R23_below_support_is_within_error_scale(g):
    R = rc.R23_series(Q, A, B, g, 4 * g)
    N = 2 * g - 1
    assert abs(perron_extract(R, N)) <= 10 * (N * N * Q ** (N / 2 - 2 * g) + N * Q ** (-g / 2))


@pytest.mark.parametrize("variant", rc.TAIL_VARIANTS)
def test_R23_series_against_contour(variant):
    g = 2
    R = rc.R23_series(Q, A, B, g, 12, variant)
    for N in (3, 5, 8):
        c = perron_contour(lambda u: rc.R23_point(Q, A, B, g, u, variant), N, 0.9)
        assert abs(perron_extract(R, N) - c) < 1e-9


# -- Type-II ----------------------------------------------------------------------------------

def test_mathcalA_at_one_is_A():
    S = rc.mathcalA_series(Q, A, B, 40)
    assert abs(S(1.0) - ps.A_two(Q, A, B).value) < 1e-10
    assert abs(rc.mathcalA_point(Q, A, B, 1.0) - ps.A_two(Q, A, B).value) < 1e-12


def test_mathcalA_series_against_point():
    S = rc.mathcalA_series(Q, A, B, 40)
    for u in (0.95, 0.9j, -0.8 + 0.3j):
        assert abs(S(u) - rc.mathcalA_point(Q, A, B, u)) < 1e-10


@pytest.mark.parametrize("d", range(2, 12))
def test_mathcalA_euler_increments_decay(d):
    # pi(d) ~ q^d / d local factors each of size q^(-2d) on |u| = 1
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 16, endpoint=False))
    step = rc.mathcalA_point(Q, A, B, z, cutoff=d) / rc.mathcalA_point(Q, A, B, z, cutoff=d - 1)
    assert np.max(np.abs(np.log(step))) <= 3 * Q ** (1 - d)


def test_R4_symmetric():
    g = 1
    R = rc.R4_series(Q, A, B, g, 8)
    S = rc.R4_series(Q, B, A, g, 8)
    assert np.max(np.abs((R - S).coeffs)) < 1e-15


def test_R4_series_against_contour():
    g = 2
    R = rc.R4_series(Q, A, B, g, 12)
    for N in (4, 9, 12):
        c = perron_contour(lambda u: rc.R4_point(Q, A, B, g, u), N, 0.97, points=8192)
        assert abs(perron_extract(R, N) - c) < 1e-12 * max(1, abs(c)) + 1e-14


@pytest.mark.xfail(strict=True, reason=LAURENT)
def test_R4_literal_vanishing_below_4g():
    R = rc.R4_series(Q, A, B, 1, 8)
    assert perron_extract(R, 3) == 0


@pytest.mark.parametrize("g", [1, 2, 3])
def test_R4_below_support_is_small(g):
    R = rc.R4_series(Q, A, B, g, 4 * g)
    for N in range(0, 4 * g):
        assert abs(perron_extract(R, N)) <= 10 * max(N, 1) * Q ** (-2 * g)


# -- predictions --------------------------------------------------------------------------------

@pytest.mark.parametrize("N", range(1, 9))
def test_half_sum_limit_at_zero(N):
    assert rc._half_sum(Q, 1e-9, N // 2) == pytest.approx(N // 2, abs=1e-6)


def test_predict_one_level_structure():
    for g, N in ((2, 3), (2, 4), (3, 11)):
        p = rc.predict_one_level(Q, g, N, 0.01)
        assert p.total == p.type0 + p.type1 + p.type2
        assert (p.type1 == 0) == (N < 2 * g)
        assert "B_alpha" in p.certificates


def test_predict_one_level_rejects_zero():
    with pytest.raises(ValueError):
        rc.predict_one_level(Q, 1, 2, 0)


def test_predict_two_level_genus_one_below_2g():
    p = rc.predict_two_level(Q, 1, 1, A, B)
    assert p.type1 == 0


@pytest.mark.xfail(strict=True, reason=LAURENT)
def test_predict_two_level_type1_literally_zero_below_2g():
    assert rc.predict_two_level(Q, 2, 3, A, B).type1 == 0


@pytest.mark.xfail(strict=True, reason=LAURENT)
def test_predict_two_level_type2_literally_zero_below_4g():
    assert rc.predict_two_level(Q, 2, 6, A, B).type2 == 0


def test_predict_two_level_scales():
    g, N = 2, 6
    p = rc.predict_two_level(Q, g, N, A, B)
    assert p.total == p.type0 + p.type1 + p.type2
    assert abs(p.type2) < 1e-4
    # type1 is built from the q^(-2 g alpha) and q^(-2 g beta) swaps; scaling both checks it
    R = rc.R23_series(Q, A, B, g, N + 2)
    assert p.type1 == perron_extract(R, N)
    assert p.certificates["laurent_tail_estimate"] < 1e-15


def test_predict_two_level_rejects_zero_shift():
    with pytest.raises(ValueError):
        rc.predict_two_level(Q, 1, 2, 0, B)


def test_ratio_recipe_sum_and_poles():
    r = rc.ratio_recipe(13, 2, 0.02, 0.03, 0.025, 0.035)
    parts = r["main"] + r["swap_alpha"] + r["swap_beta"] + r["swap_both"]
    assert r["total"] == parts
    with pytest.raises(rc.PoleProximityError):
        rc.ratio_recipe(13, 2, 0.02, 0.03, -0.02, 0.035)


# -- recombination of the rigorous Type-I blocks ----------------------------------------------

def test_recombination_corrected_reading():
    rec = recombination(Q, A, B, 2, 10, reading="corrected")
    assert rec.max_coeff_defect < 1e-12
    assert max(rec.perron_defects.values()) < 1e-12


def test_recombination_printed_reading_does_not_close():
    # the denominator and weight exactly as typeset leave an O(1) gap
    rec = recombination(Q, A, B, 2, 10, reading="printed")
    assert rec.max_coeff_defect > 0.1


def test_finite_part_alpha_side():
    assert finite_part_defect(Q, A, B, 2, 10) < 1e-12


def test_unknown_reading():
    with pytest.raises(ValueError):
        J_oo_gt(Q, A, B, 2, 8, reading="other")


def test_J_blocks_start_at_2g():
    g = 2
    for S in (J_oe(Q, A, B, g, 10), J_oo_eq(Q, A, B, g, 10)):
        assert abs(S[2 * g - 1]) < 1e-12 or S.low < 2 * g
    assert J_oo_eq(Q, A, B, g, 10).max_abs_below(2 * g) == 0
    assert cmath.isclose(J_oo_eq(Q, A, B, g, 10)[2 * g], Q ** (-g * (A + B)) / (Q - 1))
