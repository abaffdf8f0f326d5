"""Quadratic residue symbols, the characters chi_D, Hayes exponentials and
generalized Gauss sums, plus the structural identities relating sums over
squarefree polynomials, monic character sums and Gauss sums.

Moduli of degree zero are rejected throughout: G(V, 1) is never needed and
has no agreed value.
"""
from __future__ import annotations

import cmath
import itertools
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .ffpoly import (
    MonicPoly,
    factorize,
    irreducible_codes,
    codes_to_rows,
    monic_rows,
    pdivmod,
    pmod,
    pmul,
    ppowmod,
    squarefree_codes,
    trim,
)


def _coeffs(a, q) -> tuple:
    if isinstance(a, MonicPoly):
        return a.coeffs
    if isinstance(a, (int, np.integer)):
        return trim((int(a) % q,))
    return trim(int(v) % q for v in a)


def stack_rows(polys: Sequence, q: int, width: int | None = None):
    """Zero-padded int64 coefficient rows and degree vector for the kernels."""
    cs = [_coeffs(p, q) for p in polys]
    deg = np.array([len(c) - 1 for c in cs], dtype=np.int64)
    w = width if width is not None else max(1, int(deg.max(initial=0)) + 1)
    rows = np.zeros((len(cs), w), dtype=np.int64)
    for i, c in enumerate(cs):
        rows[i, :len(c)] = c
    return rows, deg


def symbol_matrix(A, B, q: int, threads: int = 1) -> np.ndarray:
    """Matrix of (A_i / B_j) for sequences of polynomials (or row arrays)."""
    if isinstance(A, tuple) and len(A) == 2 and isinstance(A[0], np.ndarray):
        ra, da = A
    else:
        ra, da = stack_rows(A, q)
    if isinstance(B, tuple) and len(B) == 2 and isinstance(B[0], np.ndarray):
        rb, db = B
    else:
        rb, db = stack_rows(B, q)
    return kernels.chi_matrix(ra, da, rb, db, q, threads=threads)


def monic_block(q: int, n: int):
    rows = monic_rows(q, n)
    return rows, np.full(rows.shape[0], n, dtype=np.int64)


def squarefree_block(q: int, n: int):
    rows = codes_to_rows(q, n, squarefree_codes(q, n))
    return rows, np.full(rows.shape[0], n, dtype=np.int64)


def prime_block(q: int, n: int):
    rows = codes_to_rows(q, n, irreducible_codes(q, n))
    return rows, np.full(rows.shape[0], n, dtype=np.int64)


# ---------------------------------------------------------------------------
# residue symbols


def legendre(c: int, q: int) -> int:
    c %= q
    if c == 0:
        return 0
    return 1 if pow(c, (q - 1) // 2, q) == 1 else -1


def _euler_prime(a: tuple, P: MonicPoly) -> int:
    q = P.q
    r = pmod(a, P.coeffs, q)
    if not r:
        return 0
    v = ppowmod(r, (P.norm - 1) // 2, P.coeffs, q)
    if v == (1,):
        return 1
    if v == (q - 1,):
        return -1
    raise ArithmeticError(f"Euler criterion gave {v} modulo {P}")


def residue_symbol(A, B: MonicPoly, method: str = "descent") -> int:
    """(A / B) for a polynomial or residue A and monic B of degree >= 1.

    ``method="descent"`` runs the reciprocity-based Euclidean algorithm in
    the kernel layer; ``method="euler"`` factors B and applies Euler's
    criterion prime by prime.  The two are kept independent on purpose.
    """
    q = B.q
    if B.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    a = _coeffs(A, q)
    if method == "euler":
        out = 1
        for P, e in factorize(B).factors:
            s = _euler_prime(a, P)
            if s == 0:
                return 0
            out *= s ** e
        return out
    if method != "descent":
        raise ValueError(f"unknown method {method!r}")
    ra, da = stack_rows([a], q)
    rb, db = stack_rows([B], q)
    return int(kernels.chi_matrix(ra, da, rb, db, q)[0, 0])


def chi_D(D: MonicPoly, f: MonicPoly, method: str = "descent") -> int:
    return residue_symbol(D, f, method=method)


# ---------------------------------------------------------------------------
# Hayes exponential and Gauss sums


def _top_coeff(r: tuple, n: int) -> int:
    return r[n - 1] if len(r) == n else 0


def hayes_exponential(u, V, f: MonicPoly) -> complex:
    """e(uV/f): the root of unity attached to the 1/t coefficient of uV/f."""
    q = f.q
    if f.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    r = pmod(pmul(_coeffs(u, q), _coeffs(V, q), q), f.coeffs, q)
    return cmath.exp(2j * cmath.pi * _top_coeff(r, f.degree) / q)


def _trace_vector(V: tuple, f: MonicPoly) -> np.ndarray:
    # m_i = top coefficient of x^i V mod f, so a_1(uV/f) = sum_i u_i m_i
    q, n = f.q, f.degree
    out = np.zeros(n, dtype=np.int64)
    cur = pmod(V, f.coeffs, q)
    for i in range(n):
        out[i] = _top_coeff(cur, n)
        cur = pmod(pmul(cur, (0, 1), q), f.coeffs, q)
    return out


def character_table(f: MonicPoly) -> np.ndarray:
    """chi_f(u) = (u / f) for every residue u mod f, indexed by base-q code."""
    q, n = f.q, f.degree
    codes = np.arange(q ** n, dtype=np.int64)
    rows = np.zeros((codes.size, n), dtype=np.int64)
    r = codes.copy()
    for i in range(n):
        rows[:, i] = r % q
        r //= q
    deg = np.full(codes.size, n - 1, dtype=np.int64)
    # true degrees are not needed: the kernels trim leading zeros
    rb, db = stack_rows([f], q)
    return kernels.chi_matrix(rows, deg, rb, db, q)[:, 0]


def _digits(q: int, n: int) -> np.ndarray:
    codes = np.arange(q ** n, dtype=np.int64)
    return np.stack([(codes // q ** i) % q for i in range(n)], axis=1)


def gauss_sum_direct(V, f: MonicPoly, chi: np.ndarray | None = None) -> complex:
    """G(V, f) summed literally over all |f| residues u mod f."""
    q, n = f.q, f.degree
    if n < 1:
        raise ValueError("modulus must have degree >= 1")
    if chi is None:
        chi = character_table(f)
    m = _trace_vector(_coeffs(V, q), f)
    a1 = (_digits(q, n) @ m) % q
    terms = chi * np.exp(2j * np.pi * a1 / q)
    return complex(np.sum(terms))


def gauss_sums_all(f: MonicPoly, chi: np.ndarray | None = None) -> np.ndarray:
    """G(V, f) for every V mod f at once, indexed by the base-q code of V.

    G(V) = sum_w h[w] e(w.V / q) where h collects chi(u) over u with
    M^T u = w and M[i, j] is the top coefficient of x^(i+j) mod f, so an
    n-dimensional inverse FFT of h gives every value.
    """
    q, n = f.q, f.degree
    if chi is None:
        chi = character_table(f)
    M = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        M[i] = _trace_vector(pmul((0,) * i + (1,), (1,), q), f)
    w = (_digits(q, n) @ M) % q  # row u -> M^T u (M is symmetric)
    wcode = w @ (q ** np.arange(n, dtype=np.int64))
    h = np.bincount(wcode, weights=chi.astype(float), minlength=q ** n)
    grid = h.reshape((q,) * n, order="F")
    G = np.fft.ifftn(grid) * q ** n
    return G.reshape(-1, order="F")


def _valuation(V: tuple, P: MonicPoly, cap: int) -> tuple[int, tuple]:
    q = P.q
    if not V:
        return cap, V
    a = 0
    while a < cap:
        quo, rem = pdivmod(V, P.coeffs, q)
        if rem:
            break
        V = quo
        a += 1
    return a, V


def gauss_sum_prime_power(V, P: MonicPoly, j: int) -> complex:
    """Closed-form G(V, P^j) from the valuation of V at P.

    V = 0 (or V divisible by P^j) is treated as infinite valuation.
    """
    q = P.q
    v = _coeffs(V, q)
    big = j + 2
    alpha, V1 = _valuation(v, P, big)
    norm = P.norm
    if j <= alpha:
        return complex(norm ** j - norm ** (j - 1)) if j % 2 == 0 else 0j
    if j == alpha + 1:
        if j % 2 == 0:
            return complex(-(norm ** (j - 1)))
        return _euler_prime(V1, P) * norm ** (j - 1) * np.sqrt(norm) + 0j
    return 0j


def gauss_sum_closed(V, f: MonicPoly) -> complex:
    """G(V, f) via factorization, the prime-power table and multiplicativity."""
    if f.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    out = 1 + 0j
    for P, j in factorize(f).factors:
        out *= gauss_sum_prime_power(V, P, j)
        if out == 0:
            return 0j
    return out


def _multiple_codes(P: MonicPoly, k: int, width: int) -> np.ndarray:
    """Codes (as degree-< width residues) of c * P^k for every c of degree < width - k d(P)."""
    q = P.q
    Pk = (1,)
    for _ in range(k):
        Pk = pmul(Pk, P.coeffs, q)
    span = width - (len(Pk) - 1)
    digits = _digits(q, span) if span > 0 else np.zeros((1, 0), dtype=np.int64)
    rows = np.zeros((digits.shape[0], width), dtype=np.int64)
    for i, c in enumerate(Pk):
        if c:
            rows[:, i:i + span] += c * digits
    rows %= q
    return rows @ (q ** np.arange(width, dtype=np.int64))


def gauss_closed_all(P: MonicPoly, j: int, chiP: np.ndarray | None = None) -> np.ndarray:
    """Case-table values G(V, P^j) for every V mod P^j, indexed by code."""
    q, d = P.q, P.degree
    width = j * d
    if chiP is None:
        chiP = character_table(P)
    alpha = np.zeros(q ** width, dtype=np.int64)
    for k in range(1, j + 1):
        alpha[_multiple_codes(P, k, width)] = k
    alpha[0] = j + 2  # V = 0: infinite valuation
    norm = float(P.norm)
    out = np.zeros(q ** width, dtype=complex)
    if j % 2 == 0:
        out[alpha >= j] = norm ** j - norm ** (j - 1)
        out[alpha == j - 1] = -norm ** (j - 1)
    else:
        # V = c P^(j-1) with c a unit mod P, enumerated in code order of c
        codes = _multiple_codes(P, j - 1, width)
        out[codes] = chiP * norm ** (j - 1) * np.sqrt(norm)
    return out


# ---------------------------------------------------------------------------
# character sums


def monic_char_sum(f: MonicPoly, m: int) -> int:
    """Sum of chi_f(h) over monic h of degree m, by enumeration."""
    if m < 0:
        return 0
    if f.degree == 0:
        return f.q ** m
    if m == 0:
        return 1
    col = symbol_matrix(monic_block(f.q, m), [f], f.q)[:, 0]
    return int(col.astype(np.int64).sum())


def _gauss_by_monic_degree(f: MonicPoly, G: np.ndarray, k: int) -> complex:
    # sum of G(V, f) over monic V of degree k (V reduced mod f first)
    q, n = f.q, f.degree
    if k < 0:
        return 0j
    rows = monic_rows(q, k)
    if k >= n:
        red = np.array([_pad(pmod(tuple(r), f.coeffs, q), n) for r in rows.tolist()],
                       dtype=np.int64).reshape(len(rows), n)
    else:
        red = np.zeros((rows.shape[0], n), dtype=np.int64)
        red[:, :k + 1] = rows
    codes = red @ (q ** np.arange(n, dtype=np.int64))
    return complex(G[codes].sum())


def _pad(c: tuple, n: int) -> list:
    return list(c) + [0] * (n - len(c))


def poisson_char_sum(f: MonicPoly, m: int, G: np.ndarray | None = None) -> complex:
    """Dual-side evaluation of sum_{h in M_m} chi_f(h) through Gauss sums."""
    q, n = f.q, f.degree
    if n < 1:
        raise ValueError("modulus must have degree >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    if G is None:
        G = gauss_sums_all(f)
    norm = q ** n
    if n % 2 == 0:
        s2 = sum(_gauss_by_monic_degree(f, G, k) for k in range(0, n - m - 1))
        s1 = sum(_gauss_by_monic_degree(f, G, k) for k in range(0, n - m))
        return q ** m / norm * (G[0] + q * s2 - s1)
    return q ** (m + 0.5) / norm * _gauss_by_monic_degree(f, G, n - m - 1)


def _c_degrees(primes_deg: Sequence[int], dmax: int) -> dict:
    """Count monic C with support among the given primes, by degree <= dmax."""
    counts = {0: 1}
    for d in primes_deg:
        new = dict(counts)
        for deg, c in counts.items():
            k = 1
            while deg + k * d <= dmax:
                new[deg + k * d] = new.get(deg + k * d, 0) + c
                k += 1
        counts = new
    return counts


def squarefree_char_sum_decomposition(f: MonicPoly, g: int) -> tuple[int, int]:
    """(lhs, rhs) of the squarefree-to-monic decomposition for chi over H_{2g+1}.

    lhs sums chi_D(f) over D in H_{2g+1}; rhs runs over C | f^infinity,
    grouped by d(C), using monic character sums of chi_f.
    """
    q = f.q
    if f.degree < 1:
        raise ValueError("f must have degree >= 1")
    n = 2 * g + 1
    lhs = int(symbol_matrix(squarefree_block(q, n), [f], q)[:, 0].astype(np.int64).sum())
    primes = [P.degree for P, _ in factorize(f).factors]
    counts = _c_degrees(primes, g)
    sums: dict = {}

    def S(k):
        if k not in sums:
            sums[k] = monic_char_sum(f, k) if k >= 0 else 0
        return sums[k]

    rhs = 0
    for dc, c in counts.items():
        rhs += c * (S(n - 2 * dc) - q * S(n - 2 - 2 * dc))
    return lhs, rhs


def square_average(f: MonicPoly, g: int) -> tuple[float, float]:
    """Family mean of chi_D(f^2) over H_{2g+1} and its Euler-factor prediction."""
    q = f.q
    blk = squarefree_block(q, 2 * g + 1)
    f2 = f * f
    col = symbol_matrix(blk, [f2], q)[:, 0]
    mean = float(col.astype(np.int64).sum()) / blk[0].shape[0]
    pred = 1.0
    for P, _ in factorize(f).factors:
        pred *= 1 - 1 / (P.norm + 1)
    return mean, pred


# ---------------------------------------------------------------------------
# bound suites


def polya_vinogradov_sums(q: int, g: int, dmax: int, threads: int = 1) -> list[tuple[MonicPoly, int]]:
    """(P, sum_{D in H_{2g+1}} chi_D(P)) for every prime P with d(P) <= dmax."""
    blk = squarefree_block(q, 2 * g + 1)
    out = []
    for n in range(1, dmax + 1):
        pb = prime_block(q, n)
        # chi_D(P) = (D/P); reciprocity lets the kernel reduce the larger side first
        mat = kernels.chi_matrix(blk[0], blk[1], pb[0], pb[1], q, threads=threads)
        tot = mat.astype(np.int64).sum(axis=0)
        for code, s in zip(irreducible_codes(q, n), tot):
            out.append((MonicPoly.from_code(q, n, int(code)), int(s)))
    return out


def is_square(V: MonicPoly) -> bool:
    if V.degree == 0:
        return True
    return all(e % 2 == 0 for _, e in factorize(V).factors)


def weil_sums(q: int, vmax: int, nmax: int, threads: int = 1) -> list[tuple[MonicPoly, int, int]]:
    """(V, n, sum_{P in P_n} chi_V(P)) for non-square monic V with 1 <= d(V) <= vmax."""
    Vs = [V for k in range(1, vmax + 1) for V in _monics(q, k) if not is_square(V)]
    vb = stack_rows(Vs, q)
    out = []
    for n in range(1, nmax + 1):
        pb = prime_block(q, n)
        mat = kernels.chi_matrix(vb[0], vb[1], pb[0], pb[1], q, threads=threads)
        tot = mat.astype(np.int64).sum(axis=1)
        out.extend((V, n, int(s)) for V, s in zip(Vs, tot))
    return out


def _monics(q: int, k: int) -> Iterable[MonicPoly]:
    for code in range(q ** k):
        yield MonicPoly.from_code(q, k, code)


def exponent_vectors(degrees: Sequence[int], dmax: int):
    """Exponent tuples e with sum e_i * degrees[i] <= dmax (used for C | f^inf)."""
    ranges = [range(dmax // d + 1) for d in degrees]
    for e in itertools.product(*ranges):
        if sum(a * d for a, d in zip(e, degrees)) <= dmax:
            yield e
