"""Sums and Euler products over monic irreducibles, grouped by degree.

Everything here runs over degrees d with weight pi_q(d), the number of monic
irreducibles of degree d.  Truncating at degree ``cutoff`` leaves a tail
that decays geometrically; each result carries a bound for it.

``precision="extended"`` repeats the sums in mpmath at 40 digits.  It is
slow and only meant for cross-checking the double precision path.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..ffpoly import irreducible_count

DEFAULT_CUTOFF = 60
EXTENDED_DPS = 40


@dataclass(frozen=True)
class PrimeSum:
    value: complex
    cutoff: int
    tail_bound: float

    def __complex__(self):
        return complex(self.value)


def zeta_q(q: int, s: complex) -> complex:
    """Zeta function of F_q[x]: 1 / (1 - q^(1-s))."""
    return 1 / (1 - q ** (1 - s))


def _check_precision(precision: str) -> None:
    if precision not in ("double", "extended"):
        raise ValueError(f"unknown precision {precision!r}")


def _ratio_tail(last: float, ratio: float) -> float:
    """Bound for sum_{k>=1} last * ratio^k, doubled for slack in the ratio estimate."""
    if ratio >= 1:
        return math.inf
    return 2 * last * ratio / (1 - ratio)


def B_alpha(q: int, alpha: complex, cutoff: int = DEFAULT_CUTOFF,
            precision: str = "double") -> PrimeSum:
    """B(alpha) = sum_P d(P) / ((|P|^(1+2 alpha) - 1)(|P| + 1)).

    Since d pi(d) <= q^d, the degree-d term is at most r^d / (1 - r^d) with
    r = q^(-(1 + 2 Re alpha)); the omitted tail is bounded by summing that.
    """
    _check_precision(precision)
    alpha = complex(alpha)
    if alpha.real <= -0.5:
        raise ValueError("B(alpha) diverges for Re(alpha) <= -1/2")
    r = q ** -(1 + 2 * alpha.real)
    if precision == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            a = mpmath.mpc(alpha)
            s = mpmath.mpc(0)
            for d in range(1, cutoff + 1):
                P = mpmath.mpf(q) ** d
                s += d * irreducible_count(q, d) / ((P ** (1 + 2 * a) - 1) * (P + 1))
            val = complex(s)
    else:
        val = 0j
        logq = math.log(q)
        for d in range(1, cutoff + 1):
            P = float(q) ** d
            # |P|^-(1+2 alpha) through exp so large shifts underflow to 0 rather than inf or nan
            x = cmath.exp(-(1 + 2 * alpha) * d * logq)
            val += d * irreducible_count(q, d) * x / ((1 - x) * (P + 1))
    rc = r ** (cutoff + 1)
    tail = rc / ((1 - r) * (1 - rc)) if r < 1 else math.inf
    return PrimeSum(complex(val), cutoff, tail)


def B_truncated(q: int, alpha: complex, M: int) -> complex:
    """Terms of B(alpha) with k d(P) <= M, i.e. the even powers P^(2k) of degree <= 2M."""
    s = 0j
    for d in range(1, M + 1):
        P = float(q) ** d
        w = d * irreducible_count(q, d) / (P + 1)
        for k in range(1, M // d + 1):
            s += w * P ** (-k * (1 + 2 * alpha))
    return s


def A2_closed(q: int, alpha: complex) -> complex:
    return 1 / (1 - q ** (2 * alpha)) + 1 / (q - 1)


def _log1p(z: complex) -> complex:
    # numpy's complex log1p is not accurate near 0; go through log(1+z) * z / ((1+z) - 1)
    z = complex(z)
    w = 1 + z
    if w == 1:
        return z
    return complex(np.log(w) * z / (w - 1))


def A4_log_local(t, a, b, c, d, log1p=_log1p):
    """log of the local factor of A(a, b, c, d) at a prime with t = 1/|P|.

    The factor is

        (1+t)^-1 (1 - t^(1+a+b)) (1 - t^(1+c+d))
        / ((1 - t^(1+a+c)) (1 - t^(1+a+d)) (1 - t^(1+b+c)) (1 - t^(1+b+d)))
        * (1 + t + t^(1+a+b) + t^(1+c+d) - t^(1+a+c) - t^(1+a+d) - t^(1+b+c)
           - t^(1+b+d) - t^(2+2a) - t^(2+2b) + t^(2+a+b+c+d) + t^(3+2a+2b))

    and every piece is taken through log1p.
    """
    ab, cd = t ** (1 + a + b), t ** (1 + c + d)
    ac, ad, bc, bd = t ** (1 + a + c), t ** (1 + a + d), t ** (1 + b + c), t ** (1 + b + d)
    bracket = (t + ab + cd - ac - ad - bc - bd - t ** (2 + 2 * a) - t ** (2 + 2 * b)
               + t ** (2 + a + b + c + d) + t ** (3 + 2 * a + 2 * b))
    return (-log1p(t) + log1p(-ab) + log1p(-cd) - log1p(-ac) - log1p(-ad)
            - log1p(-bc) - log1p(-bd) + log1p(bracket))


def A4_value(q: int, alpha: complex, beta: complex, gamma: complex, delta: complex,
             cutoff: int = DEFAULT_CUTOFF, precision: str = "double") -> PrimeSum:
    """Degree-grouped Euler product for A(alpha, beta, gamma, delta), summed in log space."""
    _check_precision(precision)
    shifts = [complex(z) for z in (alpha, beta, gamma, delta)]
    smax = max(abs(z.real) for z in shifts)
    if 1 - 4 * smax <= 0:
        raise ValueError("shifts too large for the Euler product to converge")
    last = 0.0
    if precision == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            sh = [mpmath.mpc(z) for z in shifts]
            L = mpmath.mpc(0)
            for d in range(1, cutoff + 1):
                term = irreducible_count(q, d) * A4_log_local(mpmath.mpf(q) ** -d, *sh, log1p=mpmath.log1p)
                L += term
                last = abs(complex(term))
            val = complex(mpmath.exp(L))
    else:
        L = 0j
        for d in range(1, cutoff + 1):
            term = irreducible_count(q, d) * A4_log_local(float(q) ** -d, *shifts)
            L += term
            last = abs(term)
        val = complex(np.exp(L))
    # the log of a local factor is O(t^(2 - 4 smax)) and pi(d) ~ q^d / d
    T = _ratio_tail(last, q ** -(1 - 4 * smax))
    return PrimeSum(val, cutoff, abs(val) * math.expm1(T))


def A_two(q: int, alpha: complex, beta: complex, cutoff: int = DEFAULT_CUTOFF,
          precision: str = "double") -> PrimeSum:
    """A(alpha, beta) = A(-alpha, -beta, alpha, beta)."""
    return A4_value(q, -alpha, -beta, alpha, beta, cutoff, precision)
