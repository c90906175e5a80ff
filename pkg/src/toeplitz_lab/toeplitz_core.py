"""Toeplitz matrices stored by their diagonal coefficients.

An ``n x n`` Toeplitz matrix is held as the ``2n - 1`` numbers
``a_{-(n-1)}, ..., a_{n-1}``; entry ``(i, j)`` (1-based) is ``a_{i-j}``.
Internally the sequence is 0-based with offset ``n - 1``, so ``a_k`` lives
at ``coeffs[k + n - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "ToeplitzSymbol",
    "KernelFunction",
    "TRIANGULAR",
    "constant",
    "tabulated",
    "from_scaled_kernel",
    "triangular_symbol",
    "identity_symbol",
    "materialize",
    "matvec_naive",
    "matvec_fft",
    "fft_radix2",
    "trace",
]


@dataclass(frozen=True)
class ToeplitzSymbol:
    """Diagonal coefficients of an ``n x n`` Toeplitz matrix.

    ``coeffs[k + n - 1]`` is ``a_k`` for ``-(n-1) <= k <= n-1``. When
    ``symmetric`` is set the constructor checks ``a_k == a_{-k}`` exactly.
    """

    n: int
    coeffs: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"matrix order must be positive, got {self.n}")
        coeffs = np.array(self.coeffs, dtype=np.float64)
        if coeffs.shape != (2 * self.n - 1,):
            raise DimensionError(
                f"expected {2 * self.n - 1} coefficients for n={self.n}, "
                f"got shape {coeffs.shape}"
            )
        if self.symmetric and not np.array_equal(coeffs, coeffs[::-1]):
            raise DomainError("symmetric flag set but a_k != a_-k")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_diagonals(cls, diagonals: dict[int, float], n: int) -> "ToeplitzSymbol":
        """Build from a sparse ``{k: a_k}`` map; absent diagonals are zero."""
        coeffs = np.zeros(2 * n - 1)
        for k, value in diagonals.items():
            if abs(k) > n - 1:
                raise DomainError(f"diagonal {k} out of range for n={n}")
            coeffs[k + n - 1] = value
        return cls(n, coeffs, symmetric=bool(np.array_equal(coeffs, coeffs[::-1])))

    def coeff(self, k: int) -> float:
        if abs(k) > self.n - 1:
            raise DomainError(f"diagonal {k} out of range for n={self.n}")
        return float(self.coeffs[k + self.n - 1])


@dataclass(frozen=True)
class KernelFunction:
    """A univariate profile ``f`` on ``[-1, 1]`` used as ``a_k = f(k/n)``."""

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=np.float64))


TRIANGULAR = KernelFunction("triangular", lambda x: 1.0 - np.abs(x))


def constant(value: float = 1.0) -> KernelFunction:
    return KernelFunction(f"constant({value!r})", lambda x: np.full(np.shape(x), float(value)))


def tabulated(nodes, values) -> KernelFunction:
    """Piecewise-linear profile through ``(nodes, values)``.

    The nodes must be increasing and cover ``[-1, 1]``. NaN values mark
    points where the profile is undefined; any interpolant touching them
    is NaN and rejected by :func:`from_scaled_kernel`.
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if nodes.ndim != 1 or nodes.shape != values.shape or len(nodes) < 2:
        raise DomainError("tabulated profile needs matching 1-D arrays of >= 2 nodes")
    if np.any(np.diff(nodes) <= 0):
        raise DomainError("tabulated nodes must be strictly increasing")
    if nodes[0] > -1.0 or nodes[-1] < 1.0:
        raise DomainError("tabulated nodes must cover [-1, 1]")

    def interp(x):
        return np.interp(x, nodes, values)

    return KernelFunction("tabulated", interp)


def from_scaled_kernel(f: KernelFunction, n: int) -> ToeplitzSymbol:
    """Symbol with ``a_k = f(k/n)`` for ``|k| <= n-1``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    k = np.arange(-(n - 1), n)
    coeffs = np.asarray(f(k / n), dtype=np.float64)
    if np.any(np.isnan(coeffs)):
        bad = k[np.isnan(coeffs)][0]
        raise DomainError(f"profile {f.name} undefined at k/n = {bad}/{n}")
    return ToeplitzSymbol(n, coeffs, symmetric=bool(np.array_equal(coeffs, coeffs[::-1])))


def triangular_symbol(n: int) -> ToeplitzSymbol:
    """The matrix ``K_n`` with ``a_m = 1 - |m|/n``."""
    return from_scaled_kernel(TRIANGULAR, n)


def identity_symbol(n: int) -> ToeplitzSymbol:
    return ToeplitzSymbol.from_diagonals({0: 1.0}, n)


def materialize(s: ToeplitzSymbol) -> np.ndarray:
    """Dense ``n x n`` array with entry ``(i, j) = a_{i-j}``."""
    n = s.n
    i = np.arange(n)
    return s.coeffs[(i[:, None] - i[None, :]) + n - 1].copy()


def _check_vector(s: ToeplitzSymbol, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (s.n,):
        raise DimensionError(f"vector of shape {v.shape} does not match n={s.n}")
    return v


def matvec_naive(s: ToeplitzSymbol, v) -> np.ndarray:
    """O(n^2) product, one row slice of the coefficient sequence at a time."""
    v = _check_vector(s, v)
    n = s.n
    out = np.empty(n)
    rev = s.coeffs[::-1]
    # row i needs a_{i-j} for j = 0..n-1, i.e. rev[n-1-i : 2n-1-i]
    for i in range(n):
        out[i] = np.dot(rev[n - 1 - i : 2 * n - 1 - i], v)
    return out


def fft_radix2(x, inverse: bool = False) -> np.ndarray:
    """Iterative Cooley-Tukey transform; ``len(x)`` must be a power of two.

    The inverse includes the ``1/L`` scaling.
    """
    a = np.asarray(x, dtype=np.complex128)
    size = a.shape[0]
    if size < 1 or size & (size - 1):
        raise DimensionError(f"transform length must be a power of two, got {size}")
    bits = size.bit_length() - 1
    idx = np.arange(size)
    rev = np.zeros(size, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    a = a[rev]
    sign = 1.0 if inverse else -1.0
    half = 1
    while half < size:
        twiddle = np.exp(sign * 1j * np.pi * np.arange(half) / half)
        blocks = a.reshape(-1, 2 * half)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * twiddle
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        a = blocks.reshape(size)
        half *= 2
    if inverse:
        a /= size
    return a


def _circulant_size(n: int) -> int:
    size = 1
    while size < 2 * n - 1:
        size *= 2
    return size


def matvec_fft(s: ToeplitzSymbol, v) -> np.ndarray:
    """Product through circulant embedding of size ``2^ceil(log2(2n-1))``."""
    v = _check_vector(s, v)
    n = s.n
    size = _circulant_size(n)
    # first column of the circulant: a_0..a_{n-1}, zeros, then a_{-(n-1)}..a_{-1}
    col = np.zeros(size)
    col[:n] = s.coeffs[n - 1 :]
    if n > 1:
        col[size - (n - 1) :] = s.coeffs[: n - 1]
    padded = np.zeros(size)
    padded[:n] = v
    prod = fft_radix2(fft_radix2(col) * fft_radix2(padded), inverse=True)
    return prod[:n].real.copy()


def trace(s: ToeplitzSymbol) -> float:
    return s.n * float(s.coeffs[s.n - 1])
