"""Truncated Laurent series in u and Perron coefficient extraction.

A PowerSeries stores coefficients for exponents ``low .. order``.  Terms
above ``order`` are unknown; terms below ``low`` are taken to be zero (for
Taylor series low = 0 and this is exact; Laurent expansions in an annulus
are cut at a depth chosen so the dropped part is below double precision).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class PowerSeries:
    coeffs: np.ndarray
    order: int
    low: int = 0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        need = self.order - self.low + 1
        if need < 0:
            raise ValueError("order below low exponent")
        if c.size < need:
            c = np.concatenate([c, np.zeros(need - c.size, dtype=complex)])
        self.coeffs = c[:need]

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int, low: int = 0) -> "PowerSeries":
        return cls(np.zeros(order - low + 1, dtype=complex), order, low)

    @classmethod
    def constant(cls, c: complex, order: int) -> "PowerSeries":
        out = cls.zero(order)
        out.coeffs[0] = c
        return out

    @classmethod
    def monomial(cls, k: int, c: complex, order: int) -> "PowerSeries":
        out = cls.zero(order, min(0, k))
        if k <= order:
            out.coeffs[k - out.low] = c
        return out

    @classmethod
    def geometric(cls, ratio: complex, step: int, order: int, start: int = 1,
                  scale: complex = 1.0) -> "PowerSeries":
        """scale * sum_{k >= start} ratio^k u^(step k), Taylor."""
        out = cls.zero(order)
        k = start
        while step * k <= order:
            out.coeffs[step * k] += scale * ratio ** k
            k += 1
        return out

    @classmethod
    def from_dict(cls, terms: dict, order: int, low: int = 0) -> "PowerSeries":
        out = cls.zero(order, low)
        for k, v in terms.items():
            if low <= k <= order:
                out.coeffs[k - low] += v
        return out

    # -- access -----------------------------------------------------------
    def __getitem__(self, n: int) -> complex:
        if n > self.order:
            raise IndexError(f"exponent {n} beyond truncation order {self.order}")
        if n < self.low:
            return 0j
        return complex(self.coeffs[n - self.low])

    def exponents(self) -> np.ndarray:
        return np.arange(self.low, self.order + 1)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        return PowerSeries(self.coeffs[: order - self.low + 1].copy(), order, self.low)

    def __call__(self, u) -> complex:
        u = np.asarray(u, dtype=complex)
        return np.sum(self.coeffs[:, None] * u[None, ...] ** self.exponents()[:, None], axis=0) \
            if u.ndim else complex(np.sum(self.coeffs * u ** self.exponents()))

    # -- arithmetic -------------------------------------------------------
    def _aligned(self, other: "PowerSeries"):
        low = min(self.low, other.low)
        order = min(self.order, other.order)
        a = np.zeros(order - low + 1, dtype=complex)
        b = np.zeros(order - low + 1, dtype=complex)
        a[self.low - low: self.low - low + max(0, order - self.low + 1)] = self.coeffs[: max(0, order - self.low + 1)]
        b[other.low - low: other.low - low + max(0, order - other.low + 1)] = other.coeffs[: max(0, order - other.low + 1)]
        return a, b, order, low

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            out = self.copy()
            if self.low <= 0 <= self.order:
                out.coeffs[-self.low] += other
            return out
        a, b, order, low = self._aligned(other)
        return PowerSeries(a + b, order, low)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs, self.order, self.low)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(self.coeffs * other, self.order, self.low)
        low = self.low + other.low
        order = min(self.order + other.low, other.order + self.low)
        if order < low:
            raise ValueError("product has no known coefficients")
        prod = np.convolve(self.coeffs, other.coeffs)
        return PowerSeries(prod[: order - low + 1], order, low)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return self * other.reciprocal()
        return PowerSeries(self.coeffs / other, self.order, self.low)

    def copy(self) -> "PowerSeries":
        return PowerSeries(self.coeffs.copy(), self.order, self.low)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by u^k."""
        return PowerSeries(self.coeffs.copy(), self.order + k, self.low + k)

    def scale_variable(self, c: complex) -> "PowerSeries":
        """F(c u)."""
        return PowerSeries(self.coeffs * c ** self.exponents().astype(float), self.order, self.low)

    def reciprocal(self) -> "PowerSeries":
        """1/F for a Taylor series with nonzero constant term."""
        if self.low != 0:
            raise ValueError("reciprocal needs a Taylor series")
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero")
        n = self.order + 1
        out = np.zeros(n, dtype=complex)
        out[0] = 1 / c0
        for k in range(1, n):
            out[k] = -np.dot(self.coeffs[1:k + 1], out[k - 1::-1][:k]) / c0
        return PowerSeries(out, self.order, 0)

    def exp(self) -> "PowerSeries":
        """exp(F) for a Taylor series with zero constant term."""
        if self.low != 0 or self.coeffs[0] != 0:
            raise ValueError("exp needs a Taylor series without constant term")
        n = self.order + 1
        k = np.arange(n)
        kf = k * self.coeffs
        out = np.zeros(n, dtype=complex)
        out[0] = 1
        for m in range(1, n):
            out[m] = np.dot(kf[1:m + 1], out[m - 1::-1][:m]) / m
        return PowerSeries(out, self.order, 0)

    def reflect(self) -> "PowerSeries":
        """G(u) = F(1/u); only for series whose known range is bounded on both sides."""
        return PowerSeries(self.coeffs[::-1].copy(), -self.low, -self.order)

    def extend(self, order: int) -> "PowerSeries":
        """Declare the coefficients between self.order and ``order`` to be exactly zero.

        Only valid when the caller knows the series has no terms there, as
        for the negative half of a Laurent expansion.
        """
        if order < self.order:
            raise ValueError("extend cannot lower the order")
        return PowerSeries(self.coeffs, order, self.low)

    def max_abs_below(self, n: int) -> float:
        """Largest |coefficient| among exponents < n (0 if none stored)."""
        k = n - self.low
        if k <= 0:
            return 0.0
        return float(np.max(np.abs(self.coeffs[:k])))


def perron_extract(F: PowerSeries, N: int) -> complex:
    """Sum of all coefficients of F with exponent <= N.

    This is the residue at u = 0 of F(u) u^(-N-1) / (1 - u) for a contour
    inside the annulus where F's expansion is valid.
    """
    if N > F.order:
        raise ValueError(f"N = {N} exceeds truncation order {F.order}")
    if N < F.low:
        return 0j
    return complex(np.sum(F.coeffs[: N - F.low + 1]))


def perron_contour(func, N: int, r: float, points: int = 4096) -> complex:
    """Trapezoid rule for (1/2 pi i) \\oint func(u) du / (u^(N+1) (1-u)) on |u| = r < 1."""
    theta = 2 * np.pi * np.arange(points) / points
    u = r * np.exp(1j * theta)
    return complex(np.mean(func(u) * u ** (-N) / (1 - u)))


def laurent_from_samples(func, r: float, low: int, order: int, points: int = 1024) -> PowerSeries:
    """Laurent coefficients of an analytic function on the circle |u| = r, by FFT."""
    theta = 2 * np.pi * np.arange(points) / points
    u = r * np.exp(1j * theta)
    c = np.fft.fft(func(u)) / points
    ks = np.arange(low, order + 1)
    return PowerSeries(c[ks % points] / r ** ks, order, low)
