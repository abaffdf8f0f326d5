"""Zeros of quadratic Dirichlet L-functions over F_q[x]: brute-force level
densities and Ratios Conjecture predictions."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
