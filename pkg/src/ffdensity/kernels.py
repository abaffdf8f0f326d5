"""Backend selection for the hot loops.

The compiled module is preferred; FFDENSITY_BACKEND=python forces the
numpy fallback (used by the benchmark and the backend-parity tests).
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"
if os.environ.get("FFDENSITY_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"
else:
    _compiled = None

MAX_DEGREE = 31
CHUNK_ROWS = 4096


def backends():
    """Available implementations by name."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _impl_for(backend):
    if backend is None:
        return _impl
    return backends()[backend]


def chi_matrix(A, adeg, B, bdeg, q, threads=1, backend=None):
    """Residue symbols (A_i / B_j) as an int8 matrix.

    Rows are split into fixed chunks, independent of ``threads``, so the
    result never depends on scheduling.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    adeg = np.ascontiguousarray(adeg, dtype=np.int64)
    bdeg = np.ascontiguousarray(bdeg, dtype=np.int64)
    if A.shape[1] > MAX_DEGREE + 1 or B.shape[1] > MAX_DEGREE + 1:
        raise ValueError("degree too large for the kernels")
    if (bdeg < 1).any():
        raise ValueError("moduli must have degree >= 1")
    impl = _impl_for(backend)
    n = A.shape[0]
    if n == 0 or B.shape[0] == 0:
        return np.zeros((n, B.shape[0]), dtype=np.int8)
    bounds = [(s, min(s + CHUNK_ROWS, n)) for s in range(0, n, CHUNK_ROWS)]

    def work(span):
        s, e = span
        return impl.chi_matrix(A[s:e], adeg[s:e], B, bdeg, q)

    if threads <= 1 or len(bounds) == 1:
        parts = [work(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    return np.vstack(parts)


def squarefree_mask(q, n, backend=None):
    return np.asarray(_impl_for(backend).squarefree_mask(q, n), dtype=bool)


def irreducible_mask(q, n, backend=None):
    return np.asarray(_impl_for(backend).irreducible_mask(q, n), dtype=bool)
