# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: quadratic residue symbols and polynomial sieves over F_q.

Polynomials are int64 rows of coefficients, lowest degree first.  Degrees
are bounded by MAXD; callers in ffdensity.kernels validate this.
"""
import numpy as np
cimport numpy as cnp
from libc.string cimport memcpy

cnp.import_array()

DEF MAXD = 64

ctypedef long long i64


cdef inline int _trim(i64* x, int d) noexcept nogil:
    while d >= 0 and x[d] == 0:
        d -= 1
    return d


cdef int _reduce(i64* x, int dx, const i64* y, int dy, int q) noexcept nogil:
    # x <- x mod y, y monic of degree dy; returns the new degree (-1 for zero)
    cdef int k, i
    cdef i64 c
    k = dx
    while k >= dy:
        c = x[k]
        if c != 0:
            c = q - c
            for i in range(dy + 1):
                x[k - dy + i] = (x[k - dy + i] + c * y[i]) % q
        k -= 1
    if dx >= dy:
        dx = dy - 1
    return _trim(x, dx)


cdef int _jacobi(const i64* a, int da, const i64* b, int db, int q,
                 const signed char* leg, const i64* inv) noexcept nogil:
    """(a/b) for any a and monic b of degree >= 1, by Euclidean descent.

    Uses (c/B) = leg(c)^deg B for constants and (A/B) = (B/A) for coprime
    monic A, B (valid because q = 1 mod 4).
    """
    cdef i64 bufx[MAXD]
    cdef i64 bufy[MAXD]
    cdef i64* x = bufx
    cdef i64* y = bufy
    cdef i64* t
    cdef int dx = da, dy = db, i, dt, res = 1
    cdef i64 c, ci
    if da >= 0:
        memcpy(x, a, (da + 1) * sizeof(i64))
    memcpy(y, b, (db + 1) * sizeof(i64))
    dx = _trim(x, dx)
    while True:
        dx = _reduce(x, dx, y, dy, q)
        if dx < 0:
            return 0
        if dx == 0:
            if dy & 1:
                return res * leg[x[0]]
            return res
        c = x[dx]
        if dy & 1:
            res *= leg[c]
        if c != 1:
            ci = inv[c]
            for i in range(dx + 1):
                x[i] = (x[i] * ci) % q
        t = x
        x = y
        y = t
        dt = dx
        dx = dy
        dy = dt


cdef int _gcd_degree(i64* x, int dx, i64* y, int dy, int q, const i64* inv) noexcept nogil:
    # degree of gcd(x, y); destroys both buffers; -1 if both vanish
    cdef i64* t
    cdef int dt, i
    cdef i64 ci
    dx = _trim(x, dx)
    dy = _trim(y, dy)
    if dx < dy:
        t = x; x = y; y = t
        dt = dx; dx = dy; dy = dt
    while dy >= 0:
        ci = inv[y[dy]]
        if ci != 1:
            for i in range(dy + 1):
                y[i] = (y[i] * ci) % q
        dx = _reduce(x, dx, y, dy, q)
        t = x; x = y; y = t
        dt = dx; dx = dy; dy = dt
    return dx


cdef void _mulmod(const i64* a, const i64* b, const i64* f, int n, int q,
                  i64* out, i64* work) noexcept nogil:
    # out = a*b mod f, where a, b have degree < n and f is monic of degree n
    cdef int i, j, d
    for i in range(2 * n):
        work[i] = 0
    for i in range(n):
        if a[i] == 0:
            continue
        for j in range(n):
            work[i + j] = (work[i + j] + a[i] * b[j]) % q
    d = _reduce(work, 2 * n - 2, f, n, q)
    for i in range(n):
        out[i] = work[i] if i <= d else 0


cdef void _frobenius(i64* h, const i64* f, int n, int q, i64* tmp, i64* acc,
                     i64* work) noexcept nogil:
    # h <- h^q mod f by square-and-multiply
    cdef int e = q, i
    for i in range(n):
        acc[i] = 0
    acc[0] = 1
    while e > 0:
        if e & 1:
            _mulmod(acc, h, f, n, q, tmp, work)
            memcpy(acc, tmp, n * sizeof(i64))
        e >>= 1
        if e:
            _mulmod(h, h, f, n, q, tmp, work)
            memcpy(h, tmp, n * sizeof(i64))
    memcpy(h, acc, n * sizeof(i64))


cdef tuple _field_tables(int q):
    leg = np.zeros(q, dtype=np.int8)
    inv = np.zeros(q, dtype=np.int64)
    for c in range(1, q):
        leg[c] = 1 if pow(c, (q - 1) // 2, q) == 1 else -1
        inv[c] = pow(c, q - 2, q)
    return leg, inv


def chi_matrix(const i64[:, ::1] A, const i64[::1] adeg,
               const i64[:, ::1] B, const i64[::1] bdeg, int q):
    """Matrix of residue symbols (A_i / B_j); each B_j monic of degree >= 1."""
    cdef Py_ssize_t nA = A.shape[0], nB = B.shape[0], i, j
    if A.shape[1] > MAXD or B.shape[1] > MAXD:
        raise ValueError("polynomial degree exceeds kernel limit")
    leg_a, inv_a = _field_tables(q)
    cdef const signed char[::1] leg = leg_a
    cdef const i64[::1] inv = inv_a
    out_a = np.empty((nA, nB), dtype=np.int8)
    cdef signed char[:, ::1] out = out_a
    with nogil:
        for i in range(nA):
            for j in range(nB):
                out[i, j] = <signed char>_jacobi(&A[i, 0], <int>adeg[i], &B[j, 0],
                                                 <int>bdeg[j], q, &leg[0], &inv[0])
    return out_a


def squarefree_mask(int q, int n):
    """uint8 mask over base-q codes of monic degree-n polynomials: 1 iff squarefree."""
    cdef i64 total = 1, code, r
    cdef int i, k
    cdef i64 f[MAXD]
    cdef i64 df[MAXD]
    if n + 1 > MAXD:
        raise ValueError("degree exceeds kernel limit")
    for k in range(n):
        total *= q
    _, inv_a = _field_tables(q)
    cdef const i64[::1] inv = inv_a
    out_a = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] out = out_a
    with nogil:
        for code in range(total):
            r = code
            for i in range(n):
                f[i] = r % q
                r //= q
            f[n] = 1
            for i in range(n):
                df[i] = ((i + 1) * f[i + 1]) % q
            out[code] = 1 if _gcd_degree(f, n, df, n - 1, q, &inv[0]) == 0 else 0
    return out_a


def irreducible_mask(int q, int n):
    """uint8 mask over codes of monic degree-n polynomials: 1 iff irreducible.

    f is irreducible iff gcd(x^(q^i) - x, f) = 1 for every 1 <= i <= n/2.
    """
    cdef i64 total = 1, code, r
    cdef int i, k, ok
    cdef i64 f[MAXD]
    cdef i64 h[MAXD]
    cdef i64 tmp[MAXD]
    cdef i64 acc[MAXD]
    cdef i64 work[2 * MAXD]
    cdef i64 g1[MAXD]
    cdef i64 g2[MAXD]
    if 2 * n > MAXD:
        raise ValueError("degree exceeds kernel limit")
    for k in range(n):
        total *= q
    _, inv_a = _field_tables(q)
    cdef const i64[::1] inv = inv_a
    out_a = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] out = out_a
    with nogil:
        for code in range(total):
            r = code
            for i in range(n):
                f[i] = r % q
                r //= q
            f[n] = 1
            if n == 1:
                out[code] = 1
                continue
            for i in range(n):
                h[i] = 0
            h[1] = 1
            ok = 1
            for k in range(1, n // 2 + 1):
                _frobenius(h, f, n, q, tmp, acc, work)
                memcpy(g1, h, n * sizeof(i64))
                g1[1] = (g1[1] + q - 1) % q
                memcpy(g2, f, (n + 1) * sizeof(i64))
                if _gcd_degree(g1, n - 1, g2, n, q, &inv[0]) != 0:
                    ok = 0
                    break
            out[code] = ok
    return out_a
