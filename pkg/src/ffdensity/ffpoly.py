"""Monic polynomials over F_q: arithmetic, enumeration, factorization.

Coefficient tuples are stored lowest degree first.  The integer ``code``
of a monic polynomial of degree n is the base-q number formed by its
lower coefficients with the constant term as the least significant
digit, so enumeration order equals code order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import kernels

# ---------------------------------------------------------------------------
# raw coefficient-tuple arithmetic (not necessarily monic)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def trim(a) -> tuple:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a, b, q) -> tuple:
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n))


def psub(a, b, q) -> tuple:
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n))


def pscale(a, c, q) -> tuple:
    return trim((x * c) % q for x in a)


def pmul(a, b, q) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(v % q for v in out)


def pdivmod(a, b, q) -> tuple[tuple, tuple]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(trim(a))
    db = len(b) - 1
    inv = pow(b[-1], q - 2, q)
    if len(a) <= db:
        return (), tuple(a)
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = (a[k] * inv) % q
        if c:
            quot[k - db] = c
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % q
    return trim(quot), trim(a[:db])


def pmod(a, b, q) -> tuple:
    return pdivmod(a, b, q)[1]


def make_monic(a, q) -> tuple:
    a = trim(a)
    if not a:
        return a
    return pscale(a, pow(a[-1], q - 2, q), q)


def pgcd(a, b, q) -> tuple:
    """Monic gcd (the empty tuple when both inputs vanish)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pmod(a, b, q)
    return make_monic(a, q)


def ppowmod(a, e: int, m, q) -> tuple:
    result = (1,)
    base = pmod(a, m, q)
    while e > 0:
        if e & 1:
            result = pmod(pmul(result, base, q), m, q)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, q), m, q)
    return pmod(result, m, q)


def pderiv(a, q) -> tuple:
    return trim((i * a[i]) % q for i in range(1, len(a)))


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class FieldSpec:
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"q={self.q} is not prime")
        if self.q % 4 != 1:
            raise ValueError(f"q={self.q} is not 1 mod 4")
        if self.q >= 1 << 16:
            raise ValueError("q must be below 2^16")


@dataclass(frozen=True, order=True)
class MonicPoly:
    """Monic polynomial; ``coeffs`` includes the leading 1."""

    q: int
    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) % self.q for v in self.coeffs)
        if not c or c[-1] != 1:
            raise ValueError(f"not monic: {self.coeffs}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_code(cls, q: int, n: int, code: int) -> "MonicPoly":
        digits = []
        for _ in range(n):
            digits.append(code % q)
            code //= q
        return cls(q, tuple(digits) + (1,))

    @classmethod
    def x(cls, q: int) -> "MonicPoly":
        return cls(q, (0, 1))

    @classmethod
    def one(cls, q: int) -> "MonicPoly":
        return cls(q, (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm(self) -> int:
        return self.q ** self.degree

    @property
    def code(self) -> int:
        c = 0
        for v in reversed(self.coeffs[:-1]):
            c = c * self.q + v
        return c

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        return MonicPoly(self.q, pmul(self.coeffs, other.coeffs, self.q))

    def __pow__(self, k: int) -> "MonicPoly":
        out = MonicPoly.one(self.q)
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and i:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}")
        return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class Factorization:
    factors: tuple  # ((MonicPoly, multiplicity), ...)
    unit: int = 1

    def rebuild(self, q: int) -> tuple:
        out = (self.unit % q,)
        for p, e in self.factors:
            for _ in range(e):
                out = pmul(out, p.coeffs, q)
        return out


@dataclass(frozen=True)
class DegreeCountTable:
    q: int
    pi: dict

    def check(self) -> bool:
        for n in self.pi:
            if all(d in self.pi for d in range(1, n + 1) if n % d == 0):
                if sum(d * self.pi[d] for d in range(1, n + 1) if n % d == 0) != self.q ** n:
                    return False
        return True


# ---------------------------------------------------------------------------
# enumeration


def enumerate_monic(spec: FieldSpec, n: int) -> Iterator[MonicPoly]:
    if n < 0:
        raise ValueError("degree must be >= 0")
    for code in range(spec.q ** n):
        yield MonicPoly.from_code(spec.q, n, code)


def codes_to_rows(q: int, n: int, codes) -> np.ndarray:
    """Coefficient rows (with leading 1) for monic degree-n codes."""
    codes = np.asarray(codes, dtype=np.int64)
    rows = np.empty((codes.size, n + 1), dtype=np.int64)
    r = codes.copy()
    for i in range(n):
        rows[:, i] = r % q
        r //= q
    rows[:, n] = 1
    return rows


def monic_rows(q: int, n: int) -> np.ndarray:
    return codes_to_rows(q, n, np.arange(q ** n, dtype=np.int64))


@lru_cache(maxsize=None)
def squarefree_codes(q: int, n: int) -> np.ndarray:
    codes = np.flatnonzero(kernels.squarefree_mask(q, n)).astype(np.int64)
    codes.setflags(write=False)
    return codes


def enumerate_squarefree(spec: FieldSpec, n: int) -> Iterator[MonicPoly]:
    if n < 1:
        raise ValueError("degree must be >= 1")
    for code in squarefree_codes(spec.q, n):
        yield MonicPoly.from_code(spec.q, n, int(code))


@lru_cache(maxsize=None)
def irreducible_codes(q: int, n: int) -> np.ndarray:
    """Codes of the monic irreducibles of degree n, found exhaustively."""
    codes = np.flatnonzero(kernels.irreducible_mask(q, n)).astype(np.int64)
    codes.setflags(write=False)
    return codes


def irreducibles(q: int, n: int) -> list[MonicPoly]:
    return [MonicPoly.from_code(q, n, int(c)) for c in irreducible_codes(q, n)]


def is_squarefree(f: MonicPoly) -> bool:
    if f.degree == 0:
        return True
    return len(pgcd(f.coeffs, pderiv(f.coeffs, f.q), f.q)) == 1


def is_irreducible(f: MonicPoly) -> bool:
    q, n = f.q, f.degree
    if n < 1:
        return False
    h = (0, 1)
    for _ in range(n // 2):
        h = ppowmod(h, q, f.coeffs, q)
        if len(pgcd(psub(h, (0, 1), q), f.coeffs, q)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# factorization: squarefree split, distinct degree, equal degree


def _pth_root(a, q) -> tuple:
    # a(x) = b(x^q) and b^q = b over F_q
    return trim(a[i] for i in range(0, len(a), q))


def _squarefree_parts(a, q) -> list[tuple[tuple, int]]:
    a = make_monic(a, q)
    if len(a) <= 1:
        return []
    da = pderiv(a, q)
    if not da:
        return [(g, e * q) for g, e in _squarefree_parts(_pth_root(a, q), q)]
    out = []
    c = pgcd(a, da, q)
    w = pdivmod(a, c, q)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(w, c, q)
        z = pdivmod(w, y, q)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = pdivmod(c, y, q)[0]
    if len(c) > 1:
        out.extend((g, e * q) for g, e in _squarefree_parts(_pth_root(c, q), q))
    return out


def _distinct_degree(a, q) -> list[tuple[tuple, int]]:
    out = []
    h = (0, 1)
    i = 0
    while len(a) - 1 >= 2 * (i + 1):
        i += 1
        h = ppowmod(h, q, a, q)
        g = pgcd(psub(h, (0, 1), q), a, q)
        if len(g) > 1:
            out.append((g, i))
            a = pdivmod(a, g, q)[0]
            h = pmod(h, a, q)
    if len(a) > 1:
        out.append((a, len(a) - 1))
    return out


def _equal_degree(a, d, q, rng) -> list[tuple]:
    n = len(a) - 1
    if n == d:
        return [a]
    e = (q ** d - 1) // 2
    while True:
        r = trim(rng.randrange(q) for _ in range(n))
        if len(r) < 2:
            continue
        g = pgcd(r, a, q)
        if 1 < len(g) < len(a):
            break
        b = psub(ppowmod(r, e, a, q), (1,), q)
        g = pgcd(b, a, q)
        if 1 < len(g) < len(a):
            break
    return _equal_degree(g, d, q, rng) + _equal_degree(pdivmod(a, g, q)[0], d, q, rng)


def factorize(f: MonicPoly, seed: int = 0) -> Factorization:
    """Irreducible factorization, factors sorted by (degree, code)."""
    if f.degree < 1:
        raise ValueError("cannot factor a constant polynomial")
    q = f.q
    rng = random.Random(seed)
    acc: dict = {}
    for part, mult in _squarefree_parts(f.coeffs, q):
        for block, d in _distinct_degree(part, q):
            for p in _equal_degree(block, d, q, rng):
                key = MonicPoly(q, p)
                acc[key] = acc.get(key, 0) + mult
    factors = tuple(sorted(acc.items(), key=lambda kv: (kv[0].degree, kv[0].code)))
    return Factorization(factors=factors, unit=1)


# ---------------------------------------------------------------------------
# arithmetic functions


def von_mangoldt(f: MonicPoly) -> int:
    fac = factorize(f)
    if len(fac.factors) == 1:
        return fac.factors[0][0].degree
    return 0


def mobius(f: MonicPoly) -> int:
    if f.degree == 0:
        return 1
    fac = factorize(f)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def euler_phi_primepower(P: MonicPoly, j: int) -> int:
    if j < 1:
        raise ValueError("j must be positive")
    if not is_irreducible(P):
        raise ValueError(f"{P} is not irreducible")
    return P.norm ** j - P.norm ** (j - 1)


def _mobius_int(n: int) -> int:
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    return -res if n > 1 else res


@lru_cache(maxsize=None)
def irreducible_count(q: int, n: int) -> int:
    """pi_q(n) by the Moebius-inverted counting formula."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(_mobius_int(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def degree_count_table(q: int, nmax: int) -> DegreeCountTable:
    return DegreeCountTable(q, {n: irreducible_count(q, n) for n in range(1, nmax + 1)})


def irreducible_count_by_factorization(q: int, n: int, lower: dict) -> int:
    """pi_q(n) from unique factorization: q^n minus the number of monic
    degree-n polynomials with at least two prime factors, the latter built
    from the counts ``lower[d]`` for d < n (Euler product coefficients)."""
    # coefficients of prod_{d<n} (1 - x^d)^(-pi(d)) up to x^n
    series = [1] + [0] * n
    for d in range(1, n):
        m = lower[d]
        # multiply by (1 - x^d)^(-m) = sum_k C(m+k-1, k) x^{dk}
        new = [0] * (n + 1)
        for i, c in enumerate(series):
            if not c:
                continue
            k, binom = 0, 1
            while i + d * k <= n:
                new[i + d * k] += c * binom
                k += 1
                binom = binom * (m + k - 1) // k
        series = new
    return q ** n - series[n]


def lambda_sum_exhaustive(q: int, n: int) -> int:
    """Sum of Lambda(f) over M_n, counting prime powers found by sieving."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += d * int(irreducible_codes(q, d).size)
    return total
