"""The kernel operator ``(K f)(x) = int_0^1 k(x, y) f(y) dy`` on ``[0, 1]``.

Three kernels are available:

* ``TRIANGULAR``: ``1 - |x - y|``.
* ``BROWNIAN_MIN``: ``min(x, y)``, a comparison kernel whose eigenpairs
  ``sin((2k+1) pi x / 2)``, ``4 / (pi^2 (2k+1)^2)`` are known exactly.
* ``CONV_INDICATOR``: ``int_0^1 1[0,1](x - t) 1[0,1](y - t) dt`` in closed
  form, the length of ``[max(0, max(x, y) - 1), min(1, x, y)]``.

Every kernel is linear in ``y`` on each side of ``y = x``, which lets the
inner integral of a residual be taken exactly against trigonometric
profiles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectra import jacobi_eigen, paper_lambda
from .toeplitz_core import materialize, triangular_symbol

__all__ = [
    "KernelId",
    "EigenpairClaim",
    "CorollaryRow",
    "kernel_eval",
    "kernel_grid",
    "midpoint_nodes",
    "nystrom",
    "nystrom_spectrum",
    "eigenfunction_residual",
    "lemma_integral",
    "operator_trace",
    "corollary_convergence",
]


class KernelId(enum.Enum):
    TRIANGULAR = "triangular"
    BROWNIAN_MIN = "brownian-min"
    CONV_INDICATOR = "conv-indicator"


def _conv_indicator(x, y):
    lo = np.maximum(0.0, np.maximum(x, y) - 1.0)
    hi = np.minimum(1.0, np.minimum(x, y))
    return np.maximum(hi - lo, 0.0)


_KERNELS = {
    KernelId.TRIANGULAR: lambda x, y: 1.0 - np.abs(x - y),
    KernelId.BROWNIAN_MIN: np.minimum,
    KernelId.CONV_INDICATOR: _conv_indicator,
}


def kernel_grid(kid: KernelId, x, y) -> np.ndarray:
    """Vectorised kernel; no domain check."""
    return _KERNELS[kid](np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))


def kernel_eval(kid: KernelId, x: float, y: float) -> float:
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise DomainError(f"kernel arguments ({x}, {y}) outside [0, 1]^2")
    return float(kernel_grid(kid, x, y))


def midpoint_nodes(points: int) -> np.ndarray:
    return (np.arange(points) + 0.5) / points


def nystrom(kid: KernelId, m: int) -> np.ndarray:
    """``(1/m) k(x_i, x_j)`` at midpoints ``x_i = (i - 1/2)/m``."""
    if m < 2:
        raise DomainError("Nystrom discretisation needs m >= 2")
    x = midpoint_nodes(m)
    a = kernel_grid(kid, x[:, None], x[None, :]) / m
    # the kernels are symmetric, but make the floating-point matrix so too
    return np.triu(a) + np.triu(a, 1).T


def nystrom_spectrum(kid: KernelId, m: int, top: int) -> np.ndarray:
    if not 1 <= top <= m:
        raise DomainError(f"top must lie in [1, {m}]")
    return jacobi_eigen(nystrom(kid, m)).eigenvalues[:top]


@dataclass(frozen=True)
class EigenpairClaim:
    """A candidate eigenpair ``(lam, amplitude * cos(omega x + phase))``.

    The claimed pairs for the triangular kernel use the cosine profile with
    ``omega = (2k+1) pi / 2`` and ``lam = 4 / (pi^2 (2k+1)^2)``.
    """

    k: int
    omega: float
    lam: float
    phase: float = 0.0
    amplitude: float = 1.0

    @classmethod
    def paper(cls, k: int) -> "EigenpairClaim":
        return cls(k, (2 * k + 1) * math.pi / 2, paper_lambda(k))

    @classmethod
    def brownian(cls, k: int) -> "EigenpairClaim":
        """``sin((2k+1) pi x / 2)`` with the same eigenvalue, exact for ``min(x, y)``."""
        return cls(k, (2 * k + 1) * math.pi / 2, paper_lambda(k), phase=-math.pi / 2)

    @property
    def ode_lambda(self) -> float:
        """Eigenvalue implied by ``omega^2 = 2 / lambda``."""
        return 2.0 / self.omega**2

    def profile(self, x):
        return self.amplitude * np.cos(self.omega * np.asarray(x) + self.phase)


def _linear_times_cos(a, b, omega, phase, lo, hi):
    """``int_lo^hi (a + b y) cos(omega y + phase) dy`` in closed form."""

    def prim(y):
        arg = omega * y + phase
        return (a + b * y) * np.sin(arg) / omega + b * np.cos(arg) / omega**2

    return prim(hi) - prim(lo)


def _pieces(kid: KernelId, x):
    """Coefficients ``(a, b)`` of ``k(x, y) = a + b y`` for ``y < x`` and ``y > x``."""
    one = np.ones_like(x)
    zero = np.zeros_like(x)
    if kid is KernelId.TRIANGULAR:
        return (1.0 - x, one), (1.0 + x, -one)
    # CONV_INDICATOR coincides with min(x, y) on the unit square
    return (zero, one), (x, zero)


def apply_kernel_exact(kid: KernelId, claim: EigenpairClaim, x) -> np.ndarray:
    """``(K phi)(x)`` with the inner integral split at ``y = x`` and done exactly."""
    x = np.asarray(x, dtype=np.float64)
    (a0, b0), (a1, b1) = _pieces(kid, x)
    w, ph = claim.omega, claim.phase
    inner = _linear_times_cos(a0, b0, w, ph, 0.0, x) + _linear_times_cos(a1, b1, w, ph, x, 1.0)
    return claim.amplitude * inner


def eigenfunction_residual(kid: KernelId, claim: EigenpairClaim, quad_points: int) -> float:
    """``||K phi - lam phi||`` in ``L^2[0, 1]``, outer norm by the midpoint rule."""
    if quad_points < 64:
        raise DomainError("quad_points must be at least 64")
    x = midpoint_nodes(quad_points)
    r = apply_kernel_exact(kid, claim, x) - claim.lam * claim.profile(x)
    return math.sqrt(math.fsum(r * r) / quad_points)


def lemma_integral(k: int, quad_points: int) -> float:
    """Midpoint value of ``int_0^1 (1 - t) cos((2k+1) pi t / 2) dt``."""
    if quad_points < 64:
        raise DomainError("quad_points must be at least 64")
    if k < 0:
        raise DomainError("k must be nonnegative")
    t = midpoint_nodes(quad_points)
    f = (1.0 - t) * np.cos((2 * k + 1) * math.pi * t / 2)
    return math.fsum(f) / quad_points


def operator_trace(kid: KernelId, quad_points: int) -> float:
    """Midpoint value of ``int_0^1 k(x, x) dx``."""
    if quad_points < 2:
        raise DomainError("quad_points must be at least 2")
    x = midpoint_nodes(quad_points)
    return math.fsum(kernel_grid(kid, x, x)) / quad_points


@dataclass(frozen=True)
class CorollaryRow:
    n: int
    value: float  # lambda_k^(n) / n
    paper_target: float
    drift: float | None  # |value - previous row's value|


def corollary_convergence(k: int, n_list, spectra: dict | None = None) -> list[CorollaryRow]:
    """``lambda_k^(n)/n`` of ``K_n`` for each ``n``, next to ``paper_lambda(k)``.

    ``spectra`` may map ``n`` to an already computed descending eigenvalue
    array of ``K_n`` so a table over several ``k`` solves each ``n`` once.
    """
    rows = []
    prev = None
    for n in n_list:
        if n < k + 2:
            raise DomainError(f"n = {n} must be at least k + 2 = {k + 2}")
        if spectra is not None and n in spectra:
            eig = spectra[n]
        else:
            eig = jacobi_eigen(materialize(triangular_symbol(n))).eigenvalues
            if spectra is not None:
                spectra[n] = eig
        value = float(eig[k]) / n
        rows.append(
            CorollaryRow(n, value, paper_lambda(k), None if prev is None else abs(value - prev))
        )
        prev = value
    return rows
