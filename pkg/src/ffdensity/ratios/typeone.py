"""The rigorous side of the two-level density, written as generating series.

Three blocks of the two-level sum carry a q^(-2g alpha) or q^(-g(a+b))
scale once N >= 2g:

    J_oe       f1 an odd prime power, f2 an even one
    J_oo_gt    both odd, P != Q, the alpha-side share
    J_oo_eq    both odd, P != Q of equal degree

Adding them with their alpha <-> beta partners should reproduce R2 + R3.
``factno4_reading`` selects between the formula exactly as typeset
("printed") and the reading with the |Q|^(1+2b) - u^(2d) denominator and a
d(Q) weight on the constant sum ("corrected").

``diagonal_series`` is the exact generating function of the square
(f1 f2 = square) part, enumerated prime power by prime power; R1 should
match it coefficientwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..ffpoly import irreducible_count
from .recipe import (A2_factor, DEFAULT_DEPTH, R23_series, _check_pole, _pf_coeffs, _scatter,
                     _tail_constant)
from .series import PowerSeries, perron_extract

READINGS = ("corrected", "printed")


def _one_swap_block(q, g, alpha, T: PowerSeries, order):
    inner = order - 2 * g
    A2 = A2_factor(q, None, alpha, order=inner - T.low)
    return (A2 * T.truncate(inner)).shift(2 * g) * q ** (-2 * g * alpha)


def _consts(q, d, a, b):
    P = float(q) ** d
    return P, P ** (2 - 2 * a), P ** (1 + 2 * b)


def J_oe(q: int, alpha: complex, beta: complex, g: int, order: int,
         depth: int = DEFAULT_DEPTH) -> PowerSeries:
    inner = order - 2 * g
    T = PowerSeries.zero(inner, -depth)
    for d in range(1, g):
        P, C, E = _consts(q, d, alpha, beta)
        jmin, jmax = -(depth // (2 * d)), inner // (2 * d)
        pf = _pf_coeffs(C, E, jmin - 2, jmax)
        w = d * irreducible_count(q, d) * (C - P ** (1 - 2 * alpha))
        T = T + _scatter({j: w * pf[j - 2] for j in range(jmin, jmax + 1)}, 2 * d, inner, -depth)
    return _one_swap_block(q, g, alpha, T, order)


def _extra(q, alpha, beta, g, order):
    """-q^(-g(a+b)) u^(2g) q^(a+b) u^2 / ((u^2 - q^(2a))(u^2 - q^(a+b))), Taylor."""
    ca, cab = q ** (2 * alpha), q ** (alpha + beta)
    inner = order - 2 * g
    # u^2/((u^2 - ca)(u^2 - cab)) = sum_{n>=1} u^(2n) (ca^-n - cab^-n) / (cab - ca) ... via Taylor products
    Ga = PowerSeries.geometric(1 / ca, 2, inner, start=0, scale=-1 / ca)   # 1/(u^2 - ca)
    Gab = PowerSeries.geometric(1 / cab, 2, inner, start=0, scale=-1 / cab)
    core = (Ga * Gab).shift(2).truncate(inner)
    return core.shift(2 * g) * (-q ** (-g * (alpha + beta)) * cab)


def J_oo_gt(q: int, alpha: complex, beta: complex, g: int, order: int,
            reading: str = "corrected", depth: int = DEFAULT_DEPTH) -> PowerSeries:
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}")
    a, b = alpha, beta
    inner = order - 2 * g
    T = PowerSeries.zero(inner, -depth)
    for d in range(1, g):
        P, C, E = _consts(q, d, a, b)
        pi_d = irreducible_count(q, d)
        jmin, jmax = -(depth // (2 * d)), inner // (2 * d)
        terms = {j: 0j for j in range(jmin, jmax + 1)}
        # d w / (P^(1-a+b) (E - w))
        for j in range(max(jmin, 1), jmax + 1):
            terms[j] += d * P ** (-(1 - a + b)) * E ** (-j)
        if reading == "corrected":
            pf = _pf_coeffs(C, E, jmin - 2, jmax)
            for j in terms:
                terms[j] += d * (P ** (a + b) * pf[j] - P ** (2 - 3 * a + b) * pf[j - 2])
            terms[0] += d * P ** (-(1 - a + b))
        else:
            # d (P^(a+b) - P^(2-3a+b) w^2) / ((C w - 1)(E - 1)), 1/(Cw - 1) = sum_{k>=1} C^-k w^-k
            def neg(j):
                return C ** j if j <= -1 else 0
            for j in terms:
                terms[j] += d * (P ** (a + b) * neg(j) - P ** (2 - 3 * a + b) * neg(j - 2)) / (E - 1)
            terms[0] += P ** (-(1 - a + b))
        T = T + _scatter({j: pi_d * v for j, v in terms.items()}, 2 * d, inner, -depth)
    return _one_swap_block(q, g, alpha, T, order) + _extra(q, alpha, beta, g, order)


def J_oo_eq(q: int, alpha: complex, beta: complex, g: int, order: int) -> PowerSeries:
    """q^(-g(a+b)) u^(2g) (u^2/(u^2 - q^(a+b)) + 1/(q-1)), Taylor."""
    cab = q ** (alpha + beta)
    _check_pole(cab - 1, "J_oo_eq at u^2 = q^(a+b) on the unit circle")
    inner = order - 2 * g
    core = PowerSeries.geometric(1 / cab, 2, inner, scale=-1.0) + 1 / (q - 1)
    return core.shift(2 * g) * q ** (-g * (alpha + beta))


@dataclass
class Recombination:
    lhs: PowerSeries
    rhs: PowerSeries
    max_coeff_defect: float
    perron_defects: dict


def recombination(q: int, alpha: complex, beta: complex, g: int, order: int,
                  reading: str = "corrected", tail_variant: str = "geometric",
                  depth: int = DEFAULT_DEPTH) -> Recombination:
    """Compare J_oe + J_oo_gt + (alpha <-> beta) + J_oo_eq with R2 + R3."""
    lhs = (J_oe(q, alpha, beta, g, order, depth) + J_oe(q, beta, alpha, g, order, depth)
           + J_oo_gt(q, alpha, beta, g, order, reading, depth)
           + J_oo_gt(q, beta, alpha, g, order, reading, depth)
           + J_oo_eq(q, alpha, beta, g, order))
    rhs = R23_series(q, alpha, beta, g, order, tail_variant, depth)
    diff = lhs - rhs
    per = {N: abs(perron_extract(diff, N)) for N in range(0, order + 1)}
    return Recombination(lhs, rhs, float(abs(diff.coeffs).max()), per)


def finite_part_defect(q: int, alpha: complex, beta: complex, g: int, order: int,
                       reading: str = "corrected", depth: int = DEFAULT_DEPTH) -> float:
    """Largest coefficient of J_oe + J_oo_gt - (R2 - tail - extra) for the alpha side alone."""
    from .recipe import T2_series

    lhs = J_oe(q, alpha, beta, g, order, depth) + J_oo_gt(q, alpha, beta, g, order, reading, depth)
    T = T2_series(q, alpha, beta, g, order - 2 * g, "geometric", depth)
    T = T - _tail_constant(q, g, alpha, beta, "geometric")
    rhs = _one_swap_block(q, g, alpha, T, order) + _extra(q, alpha, beta, g, order)
    return float(abs((lhs - rhs).coeffs).max())


# ---------------------------------------------------------------------------


def diagonal_series(q: int, alpha: complex, beta: complex, order: int) -> PowerSeries:
    """Exact generating function of the f1 f2 = square part of the two-level sum.

    Each prime P of degree d divides a square-class pair with weight
    |P|/(|P|+1) (the density of D coprime to P).  The terms are

      even-even, P != Q:  d1 d2 u^(2k d1 + 2l d2) |P|^(-2k(1/2+a)) |Q|^(-2l(1/2+b)) w_P w_Q
      even-even, P = Q:   d^2 u^(2(k+l) d) |P|^(-2k(1/2+a) - 2l(1/2+b)) w_P
      odd-odd,   P = Q:   d^2 u^((i+j) d) |P|^(-i(1/2+a) - j(1/2+b)) w_P

    with w_P = |P|/(|P|+1), enumerated over degrees and exponents.
    """
    coef = [0j] * (order + 1)
    pis = {d: irreducible_count(q, d) for d in range(1, order + 1)}

    def wt(d):
        P = float(q) ** d
        return P / (P + 1)

    # even-even pairs over distinct or equal primes
    for d1 in range(1, order // 2 + 1):
        for k in range(1, order // (2 * d1) + 1):
            n1 = 2 * k * d1
            x1 = q ** (-n1 * (0.5 + alpha))
            for d2 in range(1, (order - n1) // 2 + 1):
                for l in range(1, (order - n1) // (2 * d2) + 1):
                    n2 = 2 * l * d2
                    x2 = q ** (-n2 * (0.5 + beta))
                    distinct = pis[d1] * pis[d2] - (pis[d1] if d1 == d2 else 0)
                    coef[n1 + n2] += d1 * d2 * x1 * x2 * distinct * wt(d1) * wt(d2)
                    if d1 == d2:
                        coef[n1 + n2] += d1 * d1 * x1 * x2 * pis[d1] * wt(d1)
    # odd-odd, same prime
    for d in range(1, order // 2 + 1):
        for i in range(1, order // d + 1, 2):
            for j in range(1, order // d - i + 1, 2):
                n = (i + j) * d
                coef[n] += d * d * pis[d] * wt(d) * q ** (-i * d * (0.5 + alpha) - j * d * (0.5 + beta))
    return PowerSeries(coef, order)
