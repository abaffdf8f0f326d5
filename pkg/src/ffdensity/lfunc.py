"""L-polynomials of quadratic characters chi_D for D squarefree of odd degree.

For D in H_{2g+1}, L(u, chi_D) = sum_n c_n u^n with c_n = sum_{f in M_n}
chi_D(f) is a polynomial of degree 2g, and

    u L'/L (u) = sum_{n>=1} a_n u^n,   a_n = sum_{f in M_n} Lambda(f) chi_D(f).

The array helpers at the bottom work on whole families at once (one row
per discriminant) and are what ``densities`` builds on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .charsums import monic_block, prime_block, stack_rows
from .ffpoly import MonicPoly, is_squarefree

RH_ALARM = 1e-6


class RiemannHypothesisAlarm(ArithmeticError):
    """A computed zero is off the critical circle, which means a bug upstream."""


@dataclass(frozen=True)
class LPolynomial:
    q: int
    genus: int
    coeffs: tuple  # exact integers c_0 .. c_2g

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.genus + 1:
            raise ValueError("need 2g+1 coefficients")
        if self.coeffs[0] != 1:
            raise ValueError("c_0 must be 1")

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, u):
        return np.polyval(np.array(self.coeffs[::-1], dtype=complex), u)


@dataclass(frozen=True)
class ZeroSet:
    zeros: np.ndarray

    def reexpand(self) -> np.ndarray:
        """Coefficients (lowest first, c_0 = 1) of prod_j (1 - u/z_j)."""
        poly = np.poly(self.zeros)[::-1]  # monic in u, lowest first
        return poly / poly[0]


def _check_discriminant(D: MonicPoly) -> int:
    if D.degree % 2 == 0:
        raise ValueError("D must have odd degree")
    if not is_squarefree(D):
        raise ValueError("D must be squarefree")
    return (D.degree - 1) // 2


def l_polynomial(D: MonicPoly) -> LPolynomial:
    """Direct character sums over M_n for n = 0 .. 2g."""
    g = _check_discriminant(D)
    q = D.q
    rd, dd = stack_rows([D], q)
    c = [1]
    for n in range(1, 2 * g + 1):
        blk = monic_block(q, n)
        col = kernels.chi_matrix(rd, dd, *blk, q)[0]
        c.append(int(col.astype(np.int64).sum()))
    return LPolynomial(q, g, tuple(c))


def lambda_coefficients_primes(D: MonicPoly, N: int) -> list[int]:
    """a_1..a_N from chi_D on prime powers: a_n = sum_{d | n} d sum_{P in P_d} chi_D(P)^(n/d)."""
    q = D.q
    rd, dd = stack_rows([D], q)
    chis = {}
    for d in range(1, N + 1):
        chis[d] = kernels.chi_matrix(rd, dd, *prime_block(q, d), q)[0].astype(np.int64)
    out = []
    for n in range(1, N + 1):
        tot = 0
        for d in range(1, n + 1):
            if n % d == 0:
                tot += d * int((chis[d] ** (n // d)).sum())
        out.append(tot)
    return out


def lambda_coefficients_newton(L: LPolynomial, N: int) -> list[int]:
    a = newton_lambda(np.array([L.coeffs], dtype=np.int64), N)[0]
    return [int(v) for v in a[1:]]


def lambda_coefficients(D: MonicPoly, N: int, L: LPolynomial | None = None) -> list[int]:
    """a_1..a_N by both routes; they must agree exactly."""
    _check_discriminant(D)
    if L is None:
        L = l_polynomial(D)
    direct = lambda_coefficients_primes(D, N)
    newton = lambda_coefficients_newton(L, N)
    if direct != newton:
        raise ArithmeticError(f"lambda routes disagree for {D}: {direct} vs {newton}")
    return direct


def zeros(L: LPolynomial) -> ZeroSet:
    z = family_zeros(np.array([L.coeffs], dtype=np.int64), q=L.q)[0]
    rh_defect(z, L.q, raise_alarm=True)
    return ZeroSet(z)


def rh_defect(z: np.ndarray, q: int, raise_alarm: bool = False) -> float:
    dev = float(np.max(np.abs(np.abs(z) - q ** -0.5))) if z.size else 0.0
    if raise_alarm and dev > RH_ALARM:
        raise RiemannHypothesisAlarm(f"zero off the critical circle by {dev:.3g}")
    return dev


def functional_equation_defect(L: LPolynomial) -> float:
    g, q, c = L.genus, L.q, L.coeffs
    return float(max(abs(c[2 * g - n] - q ** (g - n) * c[n]) for n in range(0, 2 * g + 1)))


# ---------------------------------------------------------------------------
# family arrays: rows indexed by discriminant, columns by degree


def newton_lambda(C: np.ndarray, N: int) -> np.ndarray:
    """a_0..a_N (column 0 unused) from L coefficients c_0..c_K, rowwise.

    a_n = n c_n - sum_{i=1}^{n-1} a_i c_{n-i}, with c_n = 0 beyond the
    polynomial degree.
    """
    C = np.asarray(C, dtype=np.int64)
    K = C.shape[1] - 1
    A = np.zeros((C.shape[0], N + 1), dtype=np.int64)
    for n in range(1, N + 1):
        acc = n * C[:, n] if n <= K else np.zeros(C.shape[0], dtype=np.int64)
        for i in range(1, n):
            if n - i <= K:
                acc = acc - A[:, i] * C[:, n - i]
        A[:, n] = acc
    return A


def newton_coefficients(A: np.ndarray, K: int) -> np.ndarray:
    """Inverse of newton_lambda: c_0..c_K from a_1..a_K (exact division by n)."""
    A = np.asarray(A, dtype=np.int64)
    C = np.zeros((A.shape[0], K + 1), dtype=np.int64)
    C[:, 0] = 1
    for n in range(1, K + 1):
        acc = A[:, n].copy()
        for i in range(1, n):
            acc += A[:, i] * C[:, n - i]
        if np.any(acc % n):
            raise ArithmeticError("non-integral L coefficient: inconsistent input")
        C[:, n] = acc // n
    return C


def complete_by_functional_equation(C_low: np.ndarray, g: int, q: int) -> np.ndarray:
    """Fill c_{g+1}..c_{2g} from c_0..c_g using c_{2g-n} = q^{g-n} c_n."""
    C_low = np.asarray(C_low, dtype=np.int64)
    if C_low.shape[1] < g + 1:
        raise ValueError("need c_0..c_g")
    C = np.zeros((C_low.shape[0], 2 * g + 1), dtype=np.int64)
    C[:, :g + 1] = C_low[:, :g + 1]
    for n in range(g + 1, 2 * g + 1):
        C[:, n] = q ** (n - g) * C[:, 2 * g - n]
    return C


def family_zeros(C: np.ndarray, q: int | None = None, refine_above: float = 1e-11) -> np.ndarray:
    """Roots of every row polynomial sum_n C[i, n] u^n via companion matrices.

    Repeated roots (for instance L = (1 - q u^2)^2) only come out of the
    eigenvalue solver to about 1e-8.  When ``q`` is given, any row whose
    roots stray from |u| = q^(-1/2) by more than ``refine_above`` is solved
    again with mpmath at 60 digits.
    """
    Z = _companion_roots(np.asarray(C, dtype=float))
    if q is None or Z.shape[1] == 0:
        return Z
    dev = np.abs(np.abs(Z) - q ** -0.5).max(axis=1)
    for i in np.flatnonzero(dev > refine_above):
        Z[i] = _mp_roots(C[i])
    return Z


def _mp_roots(row) -> np.ndarray:
    import mpmath

    with mpmath.workdps(60):
        r = mpmath.polyroots([int(v) for v in row[::-1]], maxsteps=400, extraprec=200)
    return np.array([complex(v) for v in r])


def _companion_roots(C: np.ndarray) -> np.ndarray:
    m = C.shape[1] - 1
    if m == 0:
        return np.zeros((C.shape[0], 0), dtype=complex)
    comp = np.zeros((C.shape[0], m, m), dtype=float)
    lead = C[:, m]
    comp[:, 0, :] = -C[:, m - 1::-1] / lead[:, None]
    if m > 1:
        idx = np.arange(m - 1)
        comp[:, idx + 1, idx] = 1.0
    return np.linalg.eigvals(comp)
