"""Dense symmetric eigenvalues and the spectral predictions for ``K_n``.

The eigensolver is the cyclic-by-row Jacobi method: sweep over ``(p, q)``
with ``p < q`` in row order, zeroing each off-diagonal entry with a plane
rotation, until the off-diagonal Frobenius norm drops below
``tolerance * ||A||_F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .errors import ConvergenceError, DomainError
from .toeplitz_core import ToeplitzSymbol, matvec_naive

__all__ = [
    "JacobiOptions",
    "Spectrum",
    "SeriesSum",
    "jacobi_eigen",
    "cosine_symbol_sum",
    "rayleigh",
    "trace_powers",
    "paper_lambda",
    "paper_trace_limit",
]

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class JacobiOptions:
    tolerance: float = 1e-12
    max_sweeps: int = 50

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_sweeps < 1:
            raise DomainError("max_sweeps must be at least 1")


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    sweeps: int
    off_norm: float


@numba.njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    acc = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            acc += a[p, q] * a[p, q]
    return math.sqrt(2.0 * acc)


@numba.njit(cache=True)
def _jacobi_sweeps(a, threshold, max_sweeps):
    """Rotate ``a`` in place; returns (sweeps done, final off norm, converged)."""
    n = a.shape[0]
    off = _off_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps == max_sweeps:
            return sweeps, off, False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # rows are contiguous: rotate rows p, q, then mirror into columns
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    a[k, p] = a[p, k]
                    a[k, q] = a[q, k]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
        off = _off_norm(a)
    return sweeps, off, True


def _check_symmetric(m) -> np.ndarray:
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DomainError(f"expected a non-empty square matrix, got shape {a.shape}")
    if np.any(np.abs(a - a.T) > SYMMETRY_TOL):
        raise DomainError("matrix is not symmetric within 1e-12")
    return a


def jacobi_eigen(m, opts: JacobiOptions | None = None) -> Spectrum:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    :raises DomainError: input not square or not symmetric within 1e-12
    :raises ConvergenceError: ``opts.max_sweeps`` sweeps were not enough
    """
    opts = opts or JacobiOptions()
    a = _check_symmetric(m)
    a = 0.5 * (a + a.T)
    fro = float(np.sqrt(np.sum(a * a)))
    sweeps, off, ok = _jacobi_sweeps(a, opts.tolerance * fro, opts.max_sweeps)
    if not ok:
        raise ConvergenceError(
            f"Jacobi did not converge in {sweeps} sweeps (off-norm {off:.3e})"
        )
    eig = np.sort(np.diag(a))[::-1].copy()
    return Spectrum(eigenvalues=eig, sweeps=int(sweeps), off_norm=float(off))


def cosine_symbol_sum(n: int, k: int) -> float:
    """``sum_{|m|<n} (1 - |m|/n) cos(pi k m / n)``.

    Summed as ``fsum((n-|m|) cos(.)) / n`` so the weights are exact integers
    and ``k = 0`` returns ``n`` exactly.
    """
    if n < 1 or k < 0:
        raise DomainError("need n >= 1 and k >= 0")
    terms = [(n - abs(m)) * math.cos(math.pi * k * m / n) for m in range(-(n - 1), n)]
    return math.fsum(terms) / n


def rayleigh(s: ToeplitzSymbol, v) -> float:
    v = np.asarray(v, dtype=np.float64)
    vv = float(v @ v)
    if vv == 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(v @ matvec_naive(s, v)) / vv


def trace_powers(m, p: int, opts: JacobiOptions | None = None) -> float:
    """``(1/n) sum_j lambda_j^p`` from the Jacobi spectrum of ``m``."""
    if p < 1:
        raise DomainError("p must be a positive integer")
    spec = jacobi_eigen(m, opts)
    return math.fsum(spec.eigenvalues**p) / len(spec.eigenvalues)


def paper_lambda(k: int) -> float:
    """Claimed eigenvalue ``4 / (pi^2 (2k+1)^2)`` of the triangular operator."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return 4.0 / (math.pi**2 * (2 * k + 1) ** 2)


class SeriesSum(NamedTuple):
    value: float
    tail_bound: float


def paper_trace_limit(p: int, terms: int) -> SeriesSum:
    """Partial sum of ``lambda_k^p`` over ``k < terms`` with a tail bound.

    The omitted tail is at most ``(4/pi^2)^p (2 terms)^(1-2p) / (2p-1)``.
    """
    if p < 1 or terms < 1:
        raise DomainError("need p >= 1 and terms >= 1")
    odd = 2.0 * np.arange(terms, dtype=np.float64) + 1.0
    # smallest terms first keeps the compensated sum honest
    vals = ((4.0 / math.pi**2) / odd[::-1] ** 2) ** p
    tail = (4.0 / math.pi**2) ** p * (2.0 * terms) ** (1 - 2 * p) / (2 * p - 1)
    return SeriesSum(math.fsum(vals), tail)
