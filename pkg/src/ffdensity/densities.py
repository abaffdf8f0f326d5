"""Brute-force one- and two-level density sums over the whole family H_{2g+1}.

Everything is reduced to exact integers per degree layer before any
floating point enters.  For each discriminant D the table keeps

    s_d(D) = sum_{P in P_d} chi_D(P)      (odd prime powers see this)
    e_d(D) = #{P in P_d : P does not divide D}   (even prime powers see this)

for every prime degree d that the requested sums can reach.  Low degrees
come straight from residue symbols; higher ones from the L-polynomial via
Newton's identities, since a_n = sum_{d | n} d * (s_d or e_d) and the only
unknown in layer n is s_n.

Family averages always divide by the enumerated |H_{2g+1}|.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .charsums import prime_block, squarefree_block
from .ffpoly import FieldSpec, irreducible_count
from .lfunc import complete_by_functional_equation, newton_coefficients, newton_lambda

CLASS_LABELS = ("ee", "oo_equal_prime", "oe", "eo", "oo_distinct_gt", "oo_distinct_lt", "oo_distinct_eq")
ONE_LEVEL_LABELS = ("even_power", "odd_power")

# symbol evaluations allowed for the direct prime route of one_level
PRIME_ROUTE_BUDGET = 60_000_000


@dataclass(frozen=True)
class ShiftParams:
    alpha: complex
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j

    def check(self, g: int) -> None:
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if abs(v) * g > 1:
                warnings.warn(f"|{name}| g = {abs(v) * g:.3g} exceeds 1", stacklevel=2)


@dataclass
class ClassBreakdown:
    total: complex
    classes: dict
    integer_layers: dict = field(default_factory=dict)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class FamilyTable:
    """Exact per-discriminant prime statistics for H_{2g+1} over F_q.

    ``K`` is the largest prime degree evaluated from residue symbols.  It
    must be at least g so that the functional equation recovers the whole
    L-polynomial; when K >= g+1 the overlap is used as a consistency check.
    """

    def __init__(self, q: int, g: int, nmax: int, K: int | None = None, threads: int = 1):
        FieldSpec(q)
        if g < 1:
            raise ValueError("g must be >= 1")
        self.q, self.g, self.nmax = q, g, max(nmax, 2 * g)
        if K is None:
            K = default_symbol_degree(q, g)
        if K < g:
            raise ValueError("need K >= g")
        self.K = K
        self.threads = threads
        rows, deg = squarefree_block(q, 2 * g + 1)
        self.size = rows.shape[0]
        n_all = self.nmax
        S = np.zeros((self.size, n_all + 1), dtype=np.int64)
        E = np.zeros((self.size, n_all + 1), dtype=np.int64)
        for d in range(1, min(K, n_all) + 1):
            X = kernels.chi_matrix(rows, deg, *prime_block(q, d), q, threads=threads)
            S[:, d] = X.sum(axis=1, dtype=np.int64)
            E[:, d] = np.count_nonzero(X, axis=1)
        A = np.zeros((self.size, n_all + 1), dtype=np.int64)
        for n in range(1, min(K, n_all) + 1):
            A[:, n] = self._layer(S, E, n)
        C_low = newton_coefficients(A, min(K, 2 * g))
        C = complete_by_functional_equation(C_low, g, q)
        if K > g:
            overlap = min(K, 2 * g)
            bad = np.flatnonzero((C[:, g + 1:overlap + 1] != C_low[:, g + 1:overlap + 1]).any(axis=1))
            if bad.size:
                raise ArithmeticError(f"functional equation fails for {bad.size} discriminants")
        self.C = C
        A_full = newton_lambda(C, n_all)
        if not np.array_equal(A_full[:, 1:min(K, n_all) + 1], A[:, 1:min(K, n_all) + 1]):
            raise ArithmeticError("Newton route disagrees with prime symbols")
        self.A = A_full
        # leftover degree after removing small prime factors of D
        left = (2 * g + 1) - sum(d * (irreducible_count(q, d) - E[:, d]) for d in range(1, min(K, n_all) + 1))
        for n in range(K + 1, n_all + 1):
            rest = self.A[:, n] - self._layer(S, E, n, skip_top=True)
            if np.any(rest % n):
                raise ArithmeticError(f"layer {n} not divisible by {n}")
            S[:, n] = rest // n
            E[:, n] = irreducible_count(q, n) - (left == n).astype(np.int64)
        self.S, self.E = S, E

    @staticmethod
    def _layer(S, E, n, skip_top=False):
        out = np.zeros(S.shape[0], dtype=np.int64)
        for d in _divisors(n):
            if skip_top and d == n:
                continue
            out += d * (S[:, d] if (n // d) % 2 else E[:, d])
        return out

    def even_part(self, n: int) -> np.ndarray:
        """Contribution of even prime powers to a_n, per discriminant."""
        out = np.zeros(self.size, dtype=np.int64)
        for d in _divisors(n):
            if (n // d) % 2 == 0:
                out += d * self.E[:, d]
        return out

    def odd_part(self, n: int) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for d in _divisors(n):
            if (n // d) % 2 == 1:
                out += d * self.S[:, d]
        return out

    def l_values(self, u) -> np.ndarray:
        """L(u, chi_D) for every D at a scalar u."""
        powers = np.asarray(u, dtype=complex) ** np.arange(2 * self.g + 1)
        return self.C.astype(float) @ powers


def default_symbol_degree(q: int, g: int) -> int:
    """Largest prime degree worth evaluating directly (2g when cheap, else g)."""
    size = q ** (2 * g + 1) - q ** (2 * g)
    cols = sum(irreducible_count(q, d) for d in range(1, 2 * g + 1))
    return 2 * g if size * cols <= 2_000_000 else g


_TABLES: dict = {}


def family_table(q: int, g: int, nmax: int, threads: int = 1) -> FamilyTable:
    """Cached FamilyTable per (q, g), rebuilt only when a deeper one is needed.

    The thread count does not enter the key: the table is exact.
    """
    have = _TABLES.get((q, g))
    if have is None or have.nmax < nmax:
        _TABLES[(q, g)] = FamilyTable(q, g, nmax, threads=threads)
    return _TABLES[(q, g)]


def clear_cache() -> None:
    _TABLES.clear()
    prime_column_sums.cache_clear()


def _weights(q: int, N: int, s: complex) -> np.ndarray:
    n = np.arange(N + 1)
    return np.exp(-n * (0.5 + s) * math.log(q))


# ---------------------------------------------------------------------------
# one-level


@lru_cache(maxsize=64)
def prime_column_sums(q: int, g: int, d: int, threads: int = 1) -> tuple[int, int]:
    """(sum over P in P_d and D of chi_D(P), same for chi_D(P)^2) by direct symbols."""
    rows, deg = squarefree_block(q, 2 * g + 1)
    X = kernels.chi_matrix(rows, deg, *prime_block(q, d), q, threads=threads)
    return int(X.sum(dtype=np.int64)), int(np.count_nonzero(X))


def prime_route_limit(q: int, g: int, budget: int = PRIME_ROUTE_BUDGET) -> int:
    size = q ** (2 * g + 1) - q ** (2 * g)
    spent, d = 0, 0
    while True:
        spent += size * irreducible_count(q, d + 1)
        if spent > budget:
            return d
        d += 1


def layers_prime_route(q: int, g: int, N: int, threads: int = 1) -> dict:
    """sum_D a_n(D) for n <= N straight from prime-power symbols."""
    sums = {d: prime_column_sums(q, g, d, threads) for d in range(1, N + 1)}
    out = {}
    for n in range(1, N + 1):
        out[n] = sum(d * (sums[d][0] if (n // d) % 2 else sums[d][1]) for d in _divisors(n))
    return out


def layers_lambda_route(table: FamilyTable, N: int) -> dict:
    return {n: int(table.A[:, n].sum()) for n in range(1, N + 1)}


@dataclass
class OneLevelResult:
    value: complex
    layers: dict
    checked_layers: int  # prime route agreed on layers 1..checked_layers


def one_level_detail(q: int, g: int, N: int, alpha: complex, route: str = "both",
                     threads: int = 1, check_limit: int | None = None) -> OneLevelResult:
    if N < 1:
        raise ValueError("N must be >= 1")
    table = family_table(q, g, max(N, 2 * g), threads)
    lam = layers_lambda_route(table, N)
    checked = 0
    if route in ("both", "primes"):
        lim = prime_route_limit(q, g) if check_limit is None else check_limit
        upto = N if route == "primes" else min(N, lim)
        pr = layers_prime_route(q, g, upto, threads)
        for n in range(1, upto + 1):
            if pr[n] != lam[n]:
                raise ArithmeticError(f"layer {n}: prime route {pr[n]} vs lambda route {lam[n]}")
        checked = upto
    w = _weights(q, N, alpha)
    value = sum(lam[n] * w[n] for n in range(1, N + 1)) / table.size
    return OneLevelResult(complex(value), lam, checked)


def one_level(q: int, g: int, N: int, shifts, route: str = "both", threads: int = 1) -> complex:
    alpha = shifts.alpha if isinstance(shifts, ShiftParams) else shifts
    return one_level_detail(q, g, N, alpha, route=route, threads=threads).value


def one_level_classes(q: int, g: int, N: int, shifts, threads: int = 1) -> ClassBreakdown:
    """Split by even prime powers (diagonal) and odd prime powers (Type-I)."""
    alpha = shifts.alpha if isinstance(shifts, ShiftParams) else shifts
    table = family_table(q, g, max(N, 2 * g), threads)
    w = _weights(q, N, alpha)
    ints = {lab: {} for lab in ONE_LEVEL_LABELS}
    for n in range(1, N + 1):
        ints["even_power"][n] = int(table.even_part(n).sum())
        ints["odd_power"][n] = int(table.odd_part(n).sum())
    classes = {lab: complex(sum(ints[lab][n] * w[n] for n in range(1, N + 1)) / table.size)
               for lab in ONE_LEVEL_LABELS}
    total = classes["even_power"] + classes["odd_power"]
    return ClassBreakdown(total, classes, ints)


def odd_layer_low_degree(q: int, g: int, N: int, alpha: complex, dmax: int, threads: int = 1) -> complex:
    """Odd prime-power terms with d(P) <= dmax (the part expected to be small)."""
    table = family_table(q, g, max(N, 2 * g), threads)
    w = _weights(q, N, alpha)
    tot = 0.0
    for n in range(1, N + 1):
        for d in _divisors(n):
            if d <= dmax and (n // d) % 2 == 1:
                tot += d * int(table.S[:, d].sum()) * w[n]
    return complex(tot / table.size)


# ---------------------------------------------------------------------------
# two-level


def _pairs(N: int):
    for n1 in range(1, N):
        for n2 in range(1, N - n1 + 1):
            yield n1, n2


def two_level_layers(table: FamilyTable, N: int) -> dict:
    """sum_D a_{n1}(D) a_{n2}(D) for n1 + n2 <= N (exact integers)."""
    return {(n1, n2): int((table.A[:, n1] * table.A[:, n2]).sum()) for n1, n2 in _pairs(N)}


def _pair_weights(q, N, alpha, beta):
    wa, wb = _weights(q, N, alpha), _weights(q, N, beta)
    return {(n1, n2): wa[n1] * wb[n2] for n1, n2 in _pairs(N)}


def two_level(q: int, g: int, N: int, shifts, threads: int = 1) -> complex:
    if N < 2:
        raise ValueError("N must be >= 2")
    table = family_table(q, g, max(N, 2 * g), threads)
    lay = two_level_layers(table, N)
    w = _pair_weights(q, N, shifts.alpha, shifts.beta)
    return complex(sum(lay[k] * w[k] for k in lay) / table.size)


def two_level_class_integers(table: FamilyTable, n1: int, n2: int) -> dict:
    S, E = table.S, table.E
    E1, E2 = table.even_part(n1), table.even_part(n2)
    O1, O2 = table.odd_part(n1), table.odd_part(n2)
    out = {
        "ee": int((E1 * E2).sum()),
        "oe": int((O1 * E2).sum()),
        "eo": int((E1 * O2).sum()),
        "oo_equal_prime": 0,
        "oo_distinct_eq": 0,
        "oo_distinct_gt": 0,
        "oo_distinct_lt": 0,
    }
    for d1 in _divisors(n1):
        if (n1 // d1) % 2 == 0:
            continue
        for d2 in _divisors(n2):
            if (n2 // d2) % 2 == 0:
                continue
            if d1 == d2:
                same = int(E[:, d1].sum())
                out["oo_equal_prime"] += d1 * d1 * same
                out["oo_distinct_eq"] += d1 * d1 * (int((S[:, d1] * S[:, d1]).sum()) - same)
            else:
                key = "oo_distinct_gt" if d1 > d2 else "oo_distinct_lt"
                out[key] += d1 * d2 * int((S[:, d1] * S[:, d2]).sum())
    return out


def two_level_classes(q: int, g: int, N: int, shifts, threads: int = 1) -> ClassBreakdown:
    """Partition of the two-level sum by exponent parity, prime equality and degree order.

    ``classes[label]`` are weighted family averages; ``total`` is their sum
    in CLASS_LABELS order.  The integer layers satisfy the partition
    identity exactly and are kept in ``integer_layers``.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    table = family_table(q, g, max(N, 2 * g), threads)
    w = _pair_weights(q, N, shifts.alpha, shifts.beta)
    ints = {}
    for key in w:
        ints[key] = two_level_class_integers(table, *key)
        if sum(ints[key].values()) != int((table.A[:, key[0]] * table.A[:, key[1]]).sum()):
            raise ArithmeticError(f"class partition fails at layer {key}")
    classes = {}
    for lab in CLASS_LABELS:
        classes[lab] = complex(sum(ints[k][lab] * w[k] for k in w) / table.size)
    total = 0j
    for lab in CLASS_LABELS:
        total += classes[lab]
    return ClassBreakdown(total, classes, ints)


def two_level_f_first(q: int, g: int, N: int, shifts) -> complex:
    """Independent two-level oracle: iterate over prime-power pairs, then over D.

    For each pair of prime degrees (d1, d2) and exponents (k1, k2) it forms
    the Gram matrix of symbol columns, so every (f1, f2) term is summed over
    the family before any pair is combined.  Only sensible at desk scale.
    """
    rows, deg = squarefree_block(q, 2 * g + 1)
    size = rows.shape[0]
    X = {d: kernels.chi_matrix(rows, deg, *prime_block(q, d), q).astype(float)
         for d in range(1, N)}
    wa, wb = _weights(q, N, shifts.alpha), _weights(q, N, shifts.beta)
    total = 0j
    for d1 in range(1, N):
        for d2 in range(1, N - d1 + 1):
            for k1 in range(1, (N - d2) // d1 + 1):
                for k2 in range(1, (N - k1 * d1) // d2 + 1):
                    gram = (X[d1] ** k1).T @ (X[d2] ** k2)
                    total += d1 * d2 * gram.sum() * wa[k1 * d1] * wb[k2 * d2]
    return complex(total / size)


# ---------------------------------------------------------------------------
# ratio average


class SmallDenominator(ArithmeticError):
    pass


def ratio_average(q: int, g: int, shifts: ShiftParams, threads: int = 1) -> complex:
    """Family mean of L(1/2+a)L(1/2+b) / (L(1/2+c)L(1/2+d))."""
    table = family_table(q, g, 2 * g, threads)
    u = lambda s: q ** (-0.5 - s)
    la, lb = table.l_values(u(shifts.alpha)), table.l_values(u(shifts.beta))
    lc, ld = table.l_values(u(shifts.gamma)), table.l_values(u(shifts.delta))
    den = lc * ld
    if np.min(np.abs(lc)) < 1e-12 or np.min(np.abs(ld)) < 1e-12:
        raise SmallDenominator("a denominator L-value is below 1e-12")
    return complex(np.sum(la * lb / den) / table.size)
