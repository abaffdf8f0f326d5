"""Pure-Python/numpy versions of the compiled kernels.

Same signatures and results as ffdensity._kernels.  The residue-symbol
matrix uses a per-modulus lookup table when the modulus is small, which
keeps the fallback usable for the desk-scale families.
"""
import numpy as np

_TABLE_LIMIT = 1 << 15


def _field_tables(q):
    leg = [0] * q
    inv = [0] * q
    for c in range(1, q):
        leg[c] = 1 if pow(c, (q - 1) // 2, q) == 1 else -1
        inv[c] = pow(c, q - 2, q)
    return leg, inv


def _trim(x):
    while x and x[-1] == 0:
        x.pop()
    return x


def _reduce(x, y, q):
    # x mod y for monic y; lists, lowest degree first
    dy = len(y) - 1
    x = list(x)
    for k in range(len(x) - 1, dy - 1, -1):
        c = x[k]
        if c:
            off = k - dy
            for i in range(dy + 1):
                x[off + i] = (x[off + i] - c * y[i]) % q
    return _trim(x[:dy] if len(x) > dy else x)


def jacobi(a, b, q, leg, inv):
    """(a/b) for coefficient lists a (any) and b (monic, degree >= 1)."""
    x = _trim([int(v) % q for v in a])
    y = [int(v) % q for v in b]
    res = 1
    while True:
        x = _reduce(x, y, q)
        if not x:
            return 0
        dy = len(y) - 1
        if len(x) == 1:
            return res * leg[x[0]] if dy & 1 else res
        c = x[-1]
        if dy & 1:
            res *= leg[c]
        if c != 1:
            ci = inv[c]
            x = [(v * ci) % q for v in x]
        x, y = y, x


def _residue_table(b, q, leg, inv):
    n = len(b) - 1
    size = q ** n
    codes = np.arange(size, dtype=np.int64)
    digits = np.stack([(codes // q ** i) % q for i in range(n)], axis=1).tolist()
    table = np.empty(size, dtype=np.int8)
    for code in range(size):
        table[code] = jacobi(list(digits[code]), b, q, leg, inv)
    return table


def _rows_mod(A, adeg, b, q):
    """Reduce every row of A modulo the monic b, vectorized over rows."""
    n = len(b) - 1
    R = np.array(A, dtype=np.int64, copy=True)
    width = R.shape[1]
    bb = np.asarray(b, dtype=np.int64)
    for k in range(width - 1, n - 1, -1):
        c = R[:, k].copy()
        if not c.any():
            continue
        R[:, k - n:k + 1] = (R[:, k - n:k + 1] - c[:, None] * bb[None, :]) % q
    if width < n:
        R = np.hstack([R, np.zeros((R.shape[0], n - width), dtype=np.int64)])
    return R[:, :n]


def chi_matrix(A, adeg, B, bdeg, q):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    adeg = np.asarray(adeg, dtype=np.int64)
    bdeg = np.asarray(bdeg, dtype=np.int64)
    leg, inv = _field_tables(q)
    out = np.empty((A.shape[0], B.shape[0]), dtype=np.int8)
    # rows beyond their own degree are zero padded, so reduction is safe
    for j in range(B.shape[0]):
        b = [int(v) for v in B[j, :bdeg[j] + 1]]
        n = len(b) - 1
        if q ** n <= _TABLE_LIMIT and A.shape[0] > q ** n // 4:
            table = _residue_table(b, q, leg, inv)
            R = _rows_mod(A, adeg, b, q)
            codes = R @ (q ** np.arange(n, dtype=np.int64)) if n else np.zeros(A.shape[0], np.int64)
            out[:, j] = table[codes]
        else:
            for i in range(A.shape[0]):
                out[i, j] = jacobi(list(A[i, :adeg[i] + 1]) if adeg[i] >= 0 else [], b, q, leg, inv)
    return out


def _monic_rows(q, n):
    codes = np.arange(q ** n, dtype=np.int64)
    rows = np.empty((codes.size, n + 1), dtype=np.int64)
    r = codes.copy()
    for i in range(n):
        rows[:, i] = r % q
        r //= q
    rows[:, n] = 1
    return rows


def _products_codes(q, left, right, n):
    # codes of all products l*r (monic, total degree n) for rows l, r
    out = []
    for lrow in left:
        prod = np.zeros((right.shape[0], n + 1), dtype=np.int64)
        for i, c in enumerate(lrow):
            if c:
                prod[:, i:i + right.shape[1]] += c * right
        prod %= q
        out.append(prod[:, :n] @ (q ** np.arange(n, dtype=np.int64)))
    return np.concatenate(out) if out else np.zeros(0, np.int64)


def squarefree_mask(q, n):
    mask = np.ones(q ** n, dtype=np.uint8)
    for k in range(1, n // 2 + 1):
        g = _monic_rows(q, k)
        sq = np.zeros((g.shape[0], 2 * k + 1), dtype=np.int64)
        for i in range(k + 1):
            sq[:, i:i + k + 1] += g[:, i:i + 1] * g
        sq %= q
        mask[_products_codes(q, sq, _monic_rows(q, n - 2 * k), n)] = 0
    return mask


def irreducible_mask(q, n):
    mask = np.ones(q ** n, dtype=np.uint8)
    for k in range(1, n // 2 + 1):
        mask[_products_codes(q, _monic_rows(q, k), _monic_rows(q, n - k), n)] = 0
    return mask
