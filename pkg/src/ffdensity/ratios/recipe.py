"""Ratios-recipe predictions for one- and two-level densities.

The two-level prediction is a sum of Perron extractions of four generating
functions in u:

    R1   no swap, a Taylor series in u^2
    R23  one swap (alpha or beta), carries u^(2g)
    R4   both swaps, carries u^(4g)

R23 and R4 contain factors like 1/(|P|^(2-2a) u^(2d) - 1) whose poles sit
well inside the unit circle.  The Perron contour runs just inside |u| = 1,
so these factors are expanded in negative powers of u (Laurent series on
the annulus) and the extraction sums every coefficient with exponent <= N,
negative exponents included.  ``depth`` is how far below u^0 the Laurent
tails are kept.

Degrees d with pi_q(d) primes are always handled as one group.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ffpoly import irreducible_count
from .primesums import A4_value, B_alpha, B_truncated, zeta_q
from .series import PowerSeries, perron_extract

POLE_TOL = 1e-9
DEFAULT_DEPTH = 120
# closed form of the leftover geometric sum in T2: as summed, or with the opposite sign
TAIL_VARIANTS = ("negated", "geometric")


class PoleProximityError(ArithmeticError):
    """A closed form was evaluated too close to one of its poles."""


def default_cutoff(g: int) -> int:
    return max(30, 4 * g + 10)


def _pi(q: int, d: int) -> int:
    return irreducible_count(q, d)


def _check_pole(x: complex, what: str) -> None:
    if abs(x) < POLE_TOL:
        raise PoleProximityError(f"{what}: distance to pole {abs(x):.3g}")


def _scatter(terms: dict, step: int, order: int, low: int = 0) -> PowerSeries:
    """Series with coefficient terms[j] at u^(step j)."""
    out = PowerSeries.zero(order, low)
    for j, v in terms.items():
        e = step * j
        if low <= e <= order:
            out.coeffs[e - low] += v
    return out


# ---------------------------------------------------------------------------
# Type-0 pieces (all Taylor in u^2)


def X_series(q: int, alpha: complex, order: int) -> PowerSeries:
    """u^2 q^(-1-2a) Z'/Z(u^2/q^(1+2a)) with Z'/Z(x) = q/(1-qx): sum_n q^(-2na) u^(2n)."""
    return PowerSeries.geometric(q ** (-2 * alpha), 2, order)


def D2_series(q: int, alpha: complex, beta: complex, order: int, literal: bool = False) -> PowerSeries:
    """The (Z'/Z)' piece of R1.

    The default is sum_n n q^(-n(a+b)) u^(2n), which is what the diagonal
    P = Q, odd-odd terms add up to.  ``literal=True`` instead differentiates
    q/(1-qx) and substitutes x = u^2/q^(1+a+b), giving sum_n (n-1) w^n.
    """
    w = q ** (-(alpha + beta))
    out = PowerSeries.zero(order)
    for n in range(1, order // 2 + 1):
        out.coeffs[2 * n] = (n - 1 if literal else n) * w ** n
    return out


def mathcalB_series(q: int, alpha: complex, order: int) -> PowerSeries:
    """B(u, alpha) = sum_P d(P) X^d / ((1 - X^d)(|P| + 1)),  X = u^2/q^(1+2 alpha)."""
    out = PowerSeries.zero(order)
    for d in range(1, order // 2 + 1):
        P = float(q) ** d
        w = d * _pi(q, d) / (P + 1)
        r = P ** (-(1 + 2 * alpha))
        for k in range(1, order // (2 * d) + 1):
            out.coeffs[2 * d * k] += w * r ** k
    return out


def _inv_linear(A: complex, K: int) -> np.ndarray:
    """Taylor coefficients of 1/(A - w) up to w^K."""
    return A ** -(np.arange(K + 1) + 1.0)


def mathcalC_series(q: int, alpha: complex, beta: complex, order: int) -> PowerSeries:
    a, b = alpha, beta
    out = mathcalB_series(q, a, order) * mathcalB_series(q, b, order)
    for d in range(1, order // 2 + 1):
        K = order // (2 * d)
        P = float(q) ** d
        ga = _inv_linear(P ** (1 + 2 * a), K)
        gb = _inv_linear(P ** (1 + 2 * b), K)
        gab = _inv_linear(P ** (1 + a + b), K)
        base = np.convolve(ga, gb)[:K + 1]
        sq = np.convolve(base, np.convolve(gab, gab)[:K + 1])[:K + 1]
        w = np.zeros(K + 1, dtype=complex)
        # d^2 P^(2+a+b) (P^a - P^b)^2 w^2 / ((.)(.)(P^(1+a+b) - w)^2)
        w[2:] += P ** (2 + a + b) * (P ** a - P ** b) ** 2 * sq[:K - 1]
        # - d^2 P^(1+a+b) w / ((.)(.)(P + 1))
        w[1:] -= P ** (1 + a + b) / (P + 1) * base[:K]
        # + d^2 P w^2 / ((.)(.)(P + 1)^2)
        w[2:] += P / (P + 1) ** 2 * base[:K - 1]
        w *= d * d * _pi(q, d)
        out = out + _scatter(dict(enumerate(w)), 2 * d, order)
    return out


def R1_series(q: int, alpha: complex, beta: complex, order: int) -> PowerSeries:
    Xa, Xb = X_series(q, alpha, order), X_series(q, beta, order)
    Ba, Bb = mathcalB_series(q, alpha, order), mathcalB_series(q, beta, order)
    return Xa * Xb + D2_series(q, alpha, beta, order) - Ba * Xb - Bb * Xa \
        + mathcalC_series(q, alpha, beta, order)


# ---------------------------------------------------------------------------
# one swap


def A2_factor(q: int, u, alpha: complex, order: int | None = None):
    """A2(u, alpha) = u^2/(u^2 - q^(2 alpha)) + 1/(q - 1).

    ``u`` may be a number or array (closed form), a PowerSeries in u
    (composed), or None together with ``order`` for the plain Taylor
    expansion in u.
    """
    c = q ** (2 * alpha)
    if u is None:
        if order is None:
            raise ValueError("order needed for the series form")
        return PowerSeries.geometric(1 / c, 2, order, scale=-1.0) + 1 / (q - 1)
    if isinstance(u, PowerSeries):
        u2 = u * u
        den = u2 - c
        return u2 * den.reciprocal() + 1 / (q - 1)
    u = np.asarray(u, dtype=complex)
    den = u * u - c
    _check_pole(np.min(np.abs(den)), "A2 at u^2 = q^(2 alpha)")
    val = u * u / den + 1 / (q - 1)
    return complex(val) if val.ndim == 0 else val


def _tail_constant(q: int, g: int, alpha: complex, beta: complex, variant: str) -> complex:
    if variant not in TAIL_VARIANTS:
        raise ValueError(f"tail_variant must be one of {TAIL_VARIANTS}")
    r = q ** (alpha - beta)
    _check_pole(r - 1, "T2 tail at alpha = beta")
    t = q ** (g * (alpha - beta))
    return t / (1 - r) if variant == "geometric" else t / (r - 1)


def _pf_coeffs(C: complex, E: complex, jmin: int, jmax: int) -> dict:
    """Laurent coefficients of 1/((C w - 1)(E - w)) on C^-1 < |w| < E.

    Partial fractions: (1/(CE - 1)) (C/(Cw - 1) + 1/(E - w)).
    """
    s = 1 / (C * E - 1)
    out = {}
    for j in range(jmin, jmax + 1):
        out[j] = s * (C ** (1 + j) if j < 0 else E ** (-j - 1))
    return out


def _T2_degree_terms(q, d, a, b, jmin, jmax):
    P = float(q) ** d
    C, E = P ** (2 - 2 * a), P ** (1 + 2 * b)
    K = C - P ** (1 - 2 * a) - P ** (2 - 3 * a + b)
    L = P ** (2 - a + b)
    pf = _pf_coeffs(C, E, jmin - 2, jmax)
    return {j: d * _pi(q, d) * (K * pf[j - 2] + L * pf[j - 1]) for j in range(jmin, jmax + 1)}


def T2_series(q: int, alpha: complex, beta: complex, g: int, order: int,
              tail_variant: str = "geometric", depth: int = DEFAULT_DEPTH) -> PowerSeries:
    """T2(u, alpha, beta): primes of degree < g plus the scalar tail term.

    Per degree d (P = q^d, w = u^(2d)) the summand is

        d pi(d) w (K w + L) / ((C w - 1)(E - w))

    with C = P^(2-2a), E = P^(1+2b), K = C - P^(1-2a) - P^(2-3a+b) and
    L = P^(2-a+b).  The d(P) weight is required for the one-swap terms to
    recombine with the odd-odd diagonal.
    """
    out = PowerSeries.zero(order, -depth) + _tail_constant(q, g, alpha, beta, tail_variant)
    for d in range(1, g):
        terms = _T2_degree_terms(q, d, alpha, beta, -(depth // (2 * d)), order // (2 * d))
        out = out + _scatter(terms, 2 * d, order, -depth)
    return out


def _one_swap(q, g, alpha, T: PowerSeries, order: int) -> PowerSeries:
    """q^(-2 g alpha) u^(2g) A2(u, alpha) T, as a series to ``order``."""
    inner = order - 2 * g
    A2 = A2_factor(q, None, alpha, order=inner - T.low)
    return (A2 * T.truncate(inner)).shift(2 * g) * q ** (-2 * g * alpha)


def R23_series(q: int, alpha: complex, beta: complex, g: int, order: int,
               tail_variant: str = "geometric", depth: int = DEFAULT_DEPTH) -> PowerSeries:
    inner = order - 2 * g
    Ta = T2_series(q, alpha, beta, g, inner, tail_variant, depth)
    Tb = T2_series(q, beta, alpha, g, inner, tail_variant, depth)
    return _one_swap(q, g, alpha, Ta, order) + _one_swap(q, g, beta, Tb, order)


# ---------------------------------------------------------------------------
# two swaps


def _A_local_parts(q: int, d: int, a: complex, b: complex):
    """Pieces of the local factor of A(u/q^(1/2+a), u/q^(1/2+b)) at degree d.

    With t = q^-d, z = u^(2d), W = c z (c = q^(-d(1+a+b))), e = q^(d(a-b)):

        local = (1 - x^2)(1 + y),   x = t^2 / W,
        y = (-W^2 + t s1 W + k0 + t x) / den,
        den = (1+t)(1-t)^2(1-te)(1-t/e),  s1 = 1 + e + 1/e,
        k0 = -t^2 (e + 1/e) - t^3 s1 + t^4 s1 - t^5.

    Returns (x2, ycoef) where x2 is the coefficient of z^-2 in x^2 and ycoef
    maps powers of z to the Laurent coefficients of y.
    """
    t = float(q) ** -d
    c = q ** (-d * (1 + a + b))
    e = q ** (d * (a - b))
    s1 = 1 + e + 1 / e
    den = (1 + t) * (1 - t) ** 2 * (1 - t * e) * (1 - t / e)
    k0 = -t * t * (e + 1 / e) - t ** 3 * s1 + t ** 4 * s1 - t ** 5
    ycoef = {-1: t ** 3 / c / den, 0: k0 / den, 1: t * s1 * c / den, 2: -c * c / den}
    x2 = (t * t / c) ** 2
    return x2, ycoef


def _log_local_laurent(q, d, a, b, jmin, jmax, tol=1e-20):
    """Laurent coefficients (powers of z = u^(2d)) of log of the local factor."""
    x2, yc = _A_local_parts(q, d, a, b)
    rho = sum(abs(v) for v in yc.values())
    if rho >= 0.95:
        raise PoleProximityError(f"local factor at degree {d} leaves the annulus (|y| up to {rho:.3f})")
    out = {j: 0j for j in range(jmin, jmax + 1)}
    # log(1 - x^2) = -sum_k x2^k z^(-2k) / k
    k = 1
    while -2 * k >= jmin:
        out[-2 * k] -= x2 ** k / k
        k += 1
    # log(1 + y) = sum_k (-1)^(k+1) y^k / k, y^k stored from z^-k
    base = np.array([yc[-1], yc[0], yc[1], yc[2]], dtype=complex)
    power = np.array([1.0 + 0j])
    k = 0
    while True:
        k += 1
        power = np.convolve(power, base)
        lo = -k
        for idx in range(max(jmin - lo, 0), min(jmax - lo, power.size - 1) + 1):
            out[lo + idx] += (-1) ** (k + 1) * power[idx] / k
        if rho ** (k + 1) / (k + 1) < tol:
            break
    return out


def mathcalA_series(q: int, alpha: complex, beta: complex, order: int,
                    cutoff: int = 30, depth: int = DEFAULT_DEPTH) -> PowerSeries:
    """Laurent expansion of A(u/q^(1/2+alpha), u/q^(1/2+beta)) on the annulus.

    Computed as exp of the degree-grouped sum of log local factors; the
    positive and negative halves are exponentiated separately and
    multiplied.  Exponents run from -depth to ``order``.
    """
    top = order + depth
    L = np.zeros(top + depth + 1, dtype=complex)  # index = exponent + depth
    for d in range(1, cutoff + 1):
        jmin, jmax = -(depth // (2 * d)), max(top // (2 * d), 0)
        coeffs = _log_local_laurent(q, d, alpha, beta, jmin, jmax)
        w = _pi(q, d)
        for j, v in coeffs.items():
            L[2 * d * j + depth] += w * v
    L0 = L[depth]
    pos = PowerSeries(np.concatenate([[0], L[depth + 1:]]), top, 0).exp()
    neg = PowerSeries(np.concatenate([[0], L[depth - 1::-1]]), depth, 0).exp().reflect().extend(top)
    return (pos * neg) * np.exp(L0)


def mathcalA_point(q: int, alpha: complex, beta: complex, u, cutoff: int = 30):
    """Direct evaluation of the Euler product at points u of the annulus."""
    u = np.asarray(u, dtype=complex)
    logs = np.zeros_like(u)
    for d in range(1, cutoff + 1):
        x2, yc = _A_local_parts(q, d, alpha, beta)
        z = u ** (2 * d)
        y = sum(v * z ** j for j, v in yc.items())
        logs = logs + _pi(q, d) * (_log1p_arr(-x2 * z ** -2) + _log1p_arr(y))
    return np.exp(logs)


def _log1p_arr(z):
    z = np.asarray(z, dtype=complex)
    w = 1 + z
    small = w == 1
    safe = np.where(small, 2.0, w)
    return np.where(small, z, np.log(safe) * z / (safe - 1))


def _Z_factors(q: int, alpha: complex, beta: complex, order: int) -> PowerSeries:
    """The four u-dependent Z factors of R4, as Taylor series on |u| < |q^alpha|.

    Z(q^(2a-1)/u^2) = 1/(1 - q^(2a) u^-2) = -sum_{k>=1} (u^2 q^(-2a))^k, and
    likewise for 2b and a+b; Z(u^2/q^(1+a+b)) = sum_{k>=0} (u^2 q^(-a-b))^k.
    """
    Za = PowerSeries.geometric(q ** (-2 * alpha), 2, order, scale=-1.0)
    Zb = PowerSeries.geometric(q ** (-2 * beta), 2, order, scale=-1.0)
    Zab = PowerSeries.geometric(q ** (-(alpha + beta)), 2, order, scale=-1.0)
    Zuv = PowerSeries.geometric(q ** (-(alpha + beta)), 2, order, start=0)
    return Za * Zb * Zab * Zuv


def R4_series(q: int, alpha: complex, beta: complex, g: int, order: int,
              cutoff: int | None = None, depth: int = DEFAULT_DEPTH) -> PowerSeries:
    cutoff = default_cutoff(g) if cutoff is None else cutoff
    inner = order - 4 * g
    if inner < -depth:
        raise ValueError("order too small for the Laurent depth")
    A = mathcalA_series(q, alpha, beta, inner, cutoff, depth)
    Z = _Z_factors(q, alpha, beta, inner + depth)
    # the u-independent pair Z(q^(a-b-1)) Z(q^(b-a-1)) sits in the denominator
    scal = (1 - q ** (alpha - beta)) * (1 - q ** (beta - alpha))
    return (A * Z).shift(4 * g) * (q ** (-2 * g * (alpha + beta)) * scal)


# ---------------------------------------------------------------------------
# pointwise versions, used as a contour-integral cross-check


def R1_point(q, alpha, beta, u, cutoff=40):
    u = np.asarray(u, dtype=complex)

    def X(a):
        x = u * u * q ** (-2 * a)
        return x / (1 - x)

    def B(a):
        s = 0
        for d in range(1, cutoff + 1):
            Xd = (u * u / q ** (1 + 2 * a)) ** d
            s = s + _pi(q, d) * d * Xd / ((1 - Xd) * (q ** d + 1))
        return s

    y = u * u * q ** (-(alpha + beta))
    D2 = y / (1 - y) ** 2
    C = B(alpha) * B(beta)
    a, b = alpha, beta
    for d in range(1, cutoff + 1):
        P = float(q) ** d
        w = u ** (2 * d)
        den = (P ** (1 + 2 * a) - w) * (P ** (1 + 2 * b) - w)
        C = C + _pi(q, d) * d * d * (
            P ** (2 + a + b) * w * w * (P ** a - P ** b) ** 2 / (den * (P ** (1 + a + b) - w) ** 2)
            - P ** (1 + a + b) * w / (den * (P + 1)) + P * w * w / (den * (P + 1) ** 2))
    return X(alpha) * X(beta) + D2 - B(alpha) * X(beta) - B(beta) * X(alpha) + C


def R23_point(q, alpha, beta, g, u, tail_variant="geometric"):
    u = np.asarray(u, dtype=complex)

    def T2(a, b):
        s = _tail_constant(q, g, a, b, tail_variant)
        for d in range(1, g):
            P = float(q) ** d
            w = u ** (2 * d)
            C, E = P ** (2 - 2 * a), P ** (1 + 2 * b)
            K = C - P ** (1 - 2 * a) - P ** (2 - 3 * a + b)
            L = P ** (2 - a + b)
            s = s + _pi(q, d) * d * w * (K * w + L) / ((C * w - 1) * (E - w))
        return s

    out = 0
    for a, b in ((alpha, beta), (beta, alpha)):
        out = out + q ** (-2 * g * a) * u ** (2 * g) * A2_factor(q, u, a) * T2(a, b)
    return out


def R4_point(q, alpha, beta, g, u, cutoff=30):
    u = np.asarray(u, dtype=complex)
    a, b = alpha, beta

    def Z(x):
        return 1 / (1 - q * x)

    num = Z(q ** (2 * a - 1) / u ** 2) * Z(q ** (2 * b - 1) / u ** 2) \
        * Z(q ** (a + b - 1) / u ** 2) * Z(u ** 2 / q ** (1 + a + b))
    den = Z(q ** (a - b - 1)) * Z(q ** (b - a - 1))
    return q ** (-2 * g * (a + b)) * u ** (4 * g) * mathcalA_point(q, a, b, u, cutoff) * num / den


# ---------------------------------------------------------------------------
# predictions


@dataclass
class PredictionBreakdown:
    type0: complex
    type1: complex
    type2: complex
    total: complex
    tail_variant: str | None = None
    certificates: dict = field(default_factory=dict)


def _half_sum(q: int, alpha: complex, M: int) -> complex:
    """sum_{n=1}^{M} q^(-2 n alpha) in its closed form."""
    _check_pole(1 - q ** (2 * alpha), "closed form at q^(2 alpha) = 1")
    return (q ** (-2 * M * alpha) - 1) / (1 - q ** (2 * alpha))


def predict_one_level(q: int, g: int, N: int, alpha: complex,
                      cutoff: int | None = None, precision: str = "double") -> PredictionBreakdown:
    if alpha == 0:
        raise ValueError("alpha = 0 is a removable singularity; take the limit explicitly")
    cutoff = default_cutoff(g) if cutoff is None else cutoff
    B = B_alpha(q, alpha, cutoff, precision)
    t0 = _half_sum(q, alpha, N // 2) - B.value
    t1 = 0j
    if N >= 2 * g:
        t1 = (q ** (-2 * g * alpha) - q ** (-2 * (N // 2) * alpha)) / (1 - q ** (2 * alpha)) \
            + q ** (-2 * g * alpha) / (q - 1)
    return PredictionBreakdown(complex(t0), complex(t1), 0j, complex(t0 + t1), None,
                               {"B_alpha": {"cutoff": B.cutoff, "tail_bound": B.tail_bound}})


def one_level_diagonal_prediction(q: int, alpha: complex, N: int) -> complex:
    """Diagonal (even prime power) part restricted to degrees <= N."""
    return _half_sum(q, alpha, N // 2) - B_truncated(q, alpha, N // 2)


def predict_two_level(q: int, g: int, N: int, alpha: complex, beta: complex,
                      tail_variant: str = "geometric", order: int | None = None,
                      cutoff: int | None = None, depth: int = DEFAULT_DEPTH) -> PredictionBreakdown:
    if alpha == 0 or beta == 0:
        raise ValueError("shifts must be nonzero")
    order = N + 2 if order is None else order
    if order < N:
        raise ValueError("series order below N")
    cutoff = default_cutoff(g) if cutoff is None else cutoff
    t0 = perron_extract(R1_series(q, alpha, beta, order), N)
    t1 = perron_extract(R23_series(q, alpha, beta, g, order, tail_variant, depth), N)
    t2 = perron_extract(R4_series(q, alpha, beta, g, order, cutoff, depth), N)
    cert = {"prime_degree_cutoff": cutoff, "laurent_depth": depth, "series_order": order,
            "laurent_tail_estimate": laurent_tail_estimate(q, alpha, beta, depth)}
    return PredictionBreakdown(t0, t1, t2, t0 + t1 + t2, tail_variant, cert)


def laurent_tail_estimate(q: int, alpha: complex, beta: complex, depth: int) -> float:
    """Size of the first dropped negative-power term of the two-swap series.

    The slowest decaying negative part comes from x^2 at degree 1, with
    ratio |u|^-4 q^-(1 - 2 Re(a+b)) at |u| = 1.
    """
    r = q ** -(1 - 2 * (complex(alpha).real + complex(beta).real))
    return float(r ** (depth // 4 + 1) / (1 - r))


# ---------------------------------------------------------------------------
# four-shift ratio


def _four_term(q, a, b, c, d, cutoff, precision):
    for s_ in (2 * a, 2 * b, a + b, c + d, a + c, a + d, b + c, b + d):
        _check_pole(1 - q ** (-s_), "zeta_q(1 + s) at q^s = 1")
    A = A4_value(q, a, b, c, d, cutoff, precision)
    z = zeta_q
    val = A.value * z(q, 1 + 2 * a) * z(q, 1 + 2 * b) * z(q, 1 + a + b) * z(q, 1 + c + d) / (
        z(q, 1 + a + c) * z(q, 1 + a + d) * z(q, 1 + b + c) * z(q, 1 + b + d))
    return complex(val), A


def ratio_recipe(q: int, g: int, alpha: complex, beta: complex, gamma: complex, delta: complex,
                 cutoff: int | None = None, precision: str = "double") -> dict:
    """The four terms (no swap, alpha swap, beta swap, both) of the ratio prediction."""
    cutoff = default_cutoff(g) if cutoff is None else cutoff
    rows = {}
    tails = {}
    for name, a, b, scale in (
        ("main", alpha, beta, 1),
        ("swap_alpha", -alpha, beta, q ** (-2 * g * alpha)),
        ("swap_beta", alpha, -beta, q ** (-2 * g * beta)),
        ("swap_both", -alpha, -beta, q ** (-2 * g * (alpha + beta))),
    ):
        v, A = _four_term(q, a, b, gamma, delta, cutoff, precision)
        rows[name] = complex(scale * v)
        tails[name] = A.tail_bound
    rows["total"] = sum(rows[k] for k in ("main", "swap_alpha", "swap_beta", "swap_both"))
    rows["tail_bounds"] = tails
    return rows


def swap_identity_defect(q: int, alpha: complex, beta: complex) -> float:
    """|1/(1 - q^(a-b)) + 1/(1 - q^(b-a)) - 1|."""
    return abs(1 / (1 - q ** (alpha - beta)) + 1 / (1 - q ** (beta - alpha)) - 1)


