"""Determinant of the tridiagonal Toeplitz matrix ``E_n(x)``.

``E_n(x)`` has ``e_0 = 1``, ``e_1 = x``, ``e_{-1} = -1``. Expanding along the
last row gives ``D_n = D_{n-1} + x D_{n-2}`` with ``D_0 = D_1 = 1``, a
Fibonacci polynomial. The Leibniz oracle instead enumerates every
permutation with ``|sigma(i) - i| <= 1`` and adds
``sgn(sigma) x^forward (-1)^backward``, each factor computed on its own.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, SizeGuardError
from .toeplitz_core import ToeplitzSymbol, materialize

__all__ = [
    "IntPolynomial",
    "banded_symbol",
    "det_recurrence",
    "det_leibniz_bounded",
    "det_numeric",
    "lu_det",
    "permutation_sign",
]

LEIBNIZ_MAX_N = 20


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[j]`` multiplies ``x^j``, no trailing zeros."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPolynomial(tuple(u + v for u, v in zip(a, b)))

    def shift(self) -> "IntPolynomial":
        """Multiply by ``x``."""
        return IntPolynomial((0,) + self.coeffs) if self.coeffs else self

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def banded_symbol(n: int, x: float) -> ToeplitzSymbol:
    """``E_n(x)`` with ``e_{i-j}`` at entry ``(i, j)``."""
    if n == 1:
        return ToeplitzSymbol(1, [1.0])
    return ToeplitzSymbol.from_diagonals({0: 1.0, 1: x, -1: -1.0}, n)


def det_recurrence(n: int) -> IntPolynomial:
    if n < 1:
        raise DomainError("n must be positive")
    prev, cur = IntPolynomial((1,)), IntPolynomial((1,))  # D_0, D_1
    for _ in range(n - 1):
        prev, cur = cur, cur + prev.shift()
    return cur


def permutation_sign(image) -> int:
    """Sign from the cycle decomposition of a 1-based one-line permutation."""
    n = len(image)
    seen = [False] * n
    sign = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = image[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _bounded_permutations(n: int):
    """All 1-based ``sigma`` with ``|sigma(i) - i| <= 1``, by backtracking."""
    image = [0] * n
    used = [False] * (n + 2)

    def place(i):
        if i > n:
            yield tuple(image)
            return
        for v in (i - 1, i, i + 1):
            if 1 <= v <= n and not used[v]:
                used[v] = True
                image[i - 1] = v
                yield from place(i + 1)
                used[v] = False

    yield from place(1)


def det_leibniz_bounded(n: int) -> IntPolynomial:
    if n < 1:
        raise DomainError("n must be positive")
    if n > LEIBNIZ_MAX_N:
        raise SizeGuardError(f"Leibniz enumeration limited to n <= {LEIBNIZ_MAX_N}, got {n}")
    coeffs = [0] * (n + 1)
    for sigma in _bounded_permutations(n):
        forward = sum(1 for i, s in enumerate(sigma, start=1) if s == i + 1)
        backward = sum(1 for i, s in enumerate(sigma, start=1) if s == i - 1)
        coeffs[forward] += permutation_sign(sigma) * (-1) ** backward
    return IntPolynomial(tuple(coeffs))


def lu_det(a) -> float:
    """Determinant from an LU factorisation with partial pivoting."""
    a = np.asarray(a, dtype=np.float64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    return float((-1) ** swaps * np.prod(np.diag(lu)))


def det_numeric(n: int, x_value: float) -> float:
    return lu_det(materialize(banded_symbol(n, x_value)))
