import math

import pytest
from hypothesis import given, strategies as st

from ffdensity.ffpoly import irreducible_count
from ffdensity.ratios import primesums as ps
from ffdensity.ratios.recipe import mathcalB_series, swap_identity_defect

Q = 5
small = st.floats(-0.04, 0.04)


def test_B_self_convergence_at_zero():
    b20, b40 = ps.B_alpha(Q, 0, 20), ps.B_alpha(Q, 0, 40)
    assert abs(b20.value - b40.value) < 1e-12
    # the bound is tight to leading order, so compare without double rounding
    e20 = ps.B_alpha(Q, 0, 20, precision="extended")
    e40 = ps.B_alpha(Q, 0, 40, precision="extended")
    assert abs(e20.value - e40.value) <= b20.tail_bound


@pytest.mark.parametrize("cutoff", [5, 10, 15])
def test_B_tail_bound_dominates(cutoff):
    ref = ps.B_alpha(Q, 0.02, 80).value
    b = ps.B_alpha(Q, 0.02, cutoff)
    assert abs(ref - b.value) <= b.tail_bound


def test_B_decreases_to_zero():
    vals = [ps.B_alpha(Q, a).value.real for a in (0, 0.5, 1, 2, 4, 8)]
    assert all(x > y > 0 for x, y in zip(vals, vals[1:]))
    # far out only the degree-1 term survives
    assert vals[-1] == pytest.approx(Q * Q ** -17 / (Q + 1), rel=1e-6)
    assert ps.B_alpha(Q, 200).value.real == pytest.approx(Q * Q ** -401 / (Q + 1), rel=1e-6)


def test_B_leading_term():
    lead = 5 / ((5 ** 1.2 - 1) * 6)
    v = ps.B_alpha(Q, 0.1).value.real
    assert lead < v < 1.2 * lead


def test_B_rejects_divergent_shift():
    with pytest.raises(ValueError):
        ps.B_alpha(Q, -0.5)


def test_B_at_zero_shift_closed_value():
    # sum_P d / ((|P|-1)(|P|+1)) weighted by pi(d) telescopes to 1/(q-1)
    assert abs(ps.B_alpha(Q, 0, 80).value - 1 / (Q - 1)) < 1e-14


def test_B_extended_precision_agrees():
    a = ps.B_alpha(Q, 0.013 + 0.01j, 40)
    b = ps.B_alpha(Q, 0.013 + 0.01j, 40, precision="extended")
    assert abs(a.value - b.value) < 1e-14


def test_B_series_at_one_matches_prime_sum():
    S = mathcalB_series(Q, 0.05, 60)
    assert abs(S(1.0) - ps.B_alpha(Q, 0.05).value) < 1e-10
    assert all(S[k] == 0 for k in range(1, 60, 2))
    assert abs(S[2] - irreducible_count(Q, 1) * Q ** (-1 - 0.1) / (Q + 1)) < 1e-15


def test_B_truncated_is_partial():
    full = ps.B_alpha(Q, 0.01).value
    parts = [ps.B_truncated(Q, 0.01, M) for M in range(1, 12)]
    assert all(abs(x) < abs(y) for x, y in zip(parts, parts[1:]))
    assert abs(parts[-1] - full) < 1e-7


def test_A4_finite_at_degenerate_shifts():
    v = ps.A4_value(Q, 0.02, 0.03, 0.02, 0.03)
    assert math.isfinite(abs(v.value)) and abs(v.value) > 0


def test_A4_self_convergence():
    a, b = ps.A4_value(Q, 0.03, -0.03, 0.03, 0.02, 20), ps.A4_value(Q, 0.03, -0.03, 0.03, 0.02, 40)
    assert abs(a.value - b.value) < 1e-12
    assert abs(a.value - b.value) <= a.tail_bound


@pytest.mark.parametrize("n", range(1, 10))
def test_A4_local_factor_tends_to_one(n):
    t = Q ** -n
    f = math.exp(ps.A4_log_local(t, -0.03, 0.02, 0.03, -0.02).real)
    assert abs(f - 1) <= 3 * t


def test_A4_extended_precision_agrees():
    args = (Q, 0.013, 0.029, 0.02, 0.035)
    assert abs(ps.A4_value(*args).value - ps.A4_value(*args, cutoff=30, precision="extended").value) < 1e-13


@given(small, small)
def test_A4_one_swap_specialization(a, b):
    # A(-a, b, a, b) zeta(1 - 2a) collapses to the one-swap factor A2
    if abs(a) < 1e-4:
        return
    v = ps.A4_value(Q, -a, b, a, b).value * ps.zeta_q(Q, 1 - 2 * a)
    assert abs(v - ps.A2_closed(Q, a)) < 1e-12 * max(1, abs(v))


@given(st.complex_numbers(max_magnitude=0.2), st.complex_numbers(max_magnitude=0.2))
def test_swap_identity(a, b):
    # 1 - q^(a-b) carries relative error eps/|a-b|, and each fraction is of size 1/|a-b|
    if abs(a - b) < 1e-3:
        return
    assert swap_identity_defect(Q, a, b) < 1e-14 + 1e-15 / abs(a - b) ** 2


def test_log1p_accuracy_near_zero():
    z = 1e-17 + 1e-18j
    assert abs(ps._log1p(z) - z) < 1e-33
