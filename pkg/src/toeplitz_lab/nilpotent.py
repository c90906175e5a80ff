"""Upper-triangular Toeplitz ``T_n(x) = I + x N_n``.

``N_n`` has ones on the first superdiagonal, so ``T_n(x)`` carries ``x`` at
entries ``(i, i+1)``. In the ``a_{i-j}`` storage convention of
:mod:`toeplitz_core` that is diagonal ``k = -1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .banded import lu_det
from .errors import DomainError, SizeGuardError
from .toeplitz_core import ToeplitzSymbol, materialize

__all__ = [
    "UnipotentSpec",
    "PathWeight",
    "unipotent_matrix",
    "power_binomial",
    "power_direct",
    "eigenvalues_unipotent",
    "characteristic_values",
    "path_count",
]

BINOMIAL_MAX_K = 62
DIRECT_MAX_K = 2**20


@dataclass(frozen=True)
class UnipotentSpec:
    n: int
    x: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")


class PathWeight(NamedTuple):
    coefficient: int
    power: int


def unipotent_matrix(spec: UnipotentSpec) -> np.ndarray:
    if spec.n == 1:
        return np.ones((1, 1))
    return materialize(ToeplitzSymbol.from_diagonals({0: 1.0, -1: spec.x}, spec.n))


def power_binomial(spec: UnipotentSpec, k: int) -> np.ndarray:
    """``sum_j C(k, j) x^j N^j`` for ``j <= min(k, n-1)``."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if k > BINOMIAL_MAX_K:
        raise SizeGuardError(f"binomial powers limited to k <= {BINOMIAL_MAX_K}, got {k}")
    n = spec.n
    out = np.zeros((n, n))
    for j in range(min(k, n - 1) + 1):
        idx = np.arange(n - j)
        out[idx, idx + j] = math.comb(k, j) * spec.x**j
    return out


def power_direct(spec: UnipotentSpec, k: int) -> np.ndarray:
    """Square-and-multiply with dense products."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if k > DIRECT_MAX_K:
        raise SizeGuardError(f"direct powers limited to k <= {DIRECT_MAX_K}")
    base = unipotent_matrix(spec)
    result = np.eye(spec.n)
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def eigenvalues_unipotent(spec: UnipotentSpec) -> np.ndarray:
    """All ones: the matrix is triangular with unit diagonal."""
    return np.ones(spec.n)


def characteristic_values(spec: UnipotentSpec, lambdas=(0.0, 2.0, -1.0)) -> list[tuple[float, float, float]]:
    """``(lam, det(T - lam I), (1 - lam)^n)`` at each sample point."""
    t = unipotent_matrix(spec)
    eye = np.eye(spec.n)
    return [(lam, lu_det(t - lam * eye), (1.0 - lam) ** spec.n) for lam in lambdas]


def path_count(n: int, k: int, i: int, j: int) -> PathWeight:
    """Weight of entry ``(i, j)`` of ``T_n(x)^k`` as ``coefficient * x^power``.

    ``C(k, j-i)`` counts the ``k``-step sequences of stay / step-right
    moves that advance exactly ``j - i`` places.
    """
    if not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"indices ({i}, {j}) outside 1..{n}")
    if k < 0:
        raise DomainError("k must be nonnegative")
    steps = j - i
    if 0 <= steps <= min(k, n - 1):
        return PathWeight(math.comb(k, steps), steps)
    return PathWeight(0, 0)
