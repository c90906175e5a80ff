"""Permutation displacements and the Toeplitz matrix ``P_n``.

Random permutations come from a Fisher-Yates shuffle driven by SplitMix64
(Steele, Lea & Flood 2014). SplitMix64 is counter based: the ``i``-th
output (0-based) of the stream seeded with ``s`` is
``mix(s + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64)``, so a whole batch of
shuffles can be drawn with array arithmetic and still agree bit for bit
with the scalar generator.

Stream layout: permutation ``t`` of a stream consumes outputs
``t*(n-1) .. t*(n-1) + n-2``; output ``c`` within it picks the swap partner
for position ``n-1-c`` (0-based) as ``r mod (n-c)``. The modulo bias is at
most ``n / 2^64`` and is ignored.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .toeplitz_core import ToeplitzSymbol

__all__ = [
    "SplitMix64",
    "Permutation",
    "DisplacementHistogram",
    "McEstimate",
    "ConcentrationResult",
    "sample_uniform",
    "sample_batch",
    "displacements",
    "histogram",
    "build_pn",
    "trace_pn",
    "expected_dk",
    "expected_dk_fraction",
    "variance_dk_exact",
    "variance_dk_fraction",
    "variance_dk_asymptotic",
    "dk_samples",
    "mc_moments_dk",
    "concentration_check",
]

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Scalar SplitMix64 generator."""

    def __init__(self, seed: int):
        _check_seed(seed)
        self.state = seed

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)


def _splitmix_block(seed: int, start: int, shape) -> np.ndarray:
    """Outputs ``start, start+1, ...`` of the stream, reshaped to ``shape``."""
    count = int(np.prod(shape))
    with np.errstate(over="ignore"):
        idx = np.arange(start + 1, start + 1 + count, dtype=np.uint64)
        z = np.uint64(seed) + idx * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z.reshape(shape)


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= MASK64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")


@dataclass(frozen=True)
class Permutation:
    """``sigma`` in one-line notation: ``image[i-1] = sigma(i)``."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        if not image:
            raise DomainError("permutation must have n >= 1")
        if sorted(image) != list(range(1, len(image) + 1)):
            raise DomainError(f"{image} is not a permutation of 1..{len(image)}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reversal(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.image, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))


@dataclass(frozen=True)
class DisplacementHistogram:
    """Counts ``d_k`` for ``k = -(n-1) .. n-1``; ``counts[k + n - 1] = d_k``."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != 2 * self.n - 1:
            raise DomainError("histogram needs 2n-1 counts")
        if sum(self.counts) != self.n:
            raise DomainError("counts must sum to n")
        for k, d in zip(range(-(self.n - 1), self.n), self.counts):
            if not 0 <= d <= self.n - abs(k):
                raise DomainError(f"d_{k} = {d} outside [0, {self.n - abs(k)}]")

    def __getitem__(self, k: int) -> int:
        if abs(k) > self.n - 1:
            return 0
        return self.counts[k + self.n - 1]

    def items(self):
        return zip(range(-(self.n - 1), self.n), self.counts)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    variance: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class ConcentrationResult:
    """Outcome of a Chebyshev check on ``d_k / n``.

    ``empirical_prob`` centres ``d_k/n`` on its mean ``(n-|k|)/n^2``.
    ``literal_centre_prob`` uses ``(n-|k|)/n`` as the centre instead, which
    is the mean of ``d_k`` itself, and is kept for the discrepancy record.
    """

    empirical_prob: float
    chebyshev_bound: float
    allowed: float
    literal_centre_prob: float
    trials: int

    @property
    def within_bound(self) -> bool:
        return self.empirical_prob <= self.allowed


def sample_uniform(n: int, seed: int) -> Permutation:
    """First permutation of the SplitMix64 stream seeded with ``seed``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    rng = SplitMix64(seed)
    a = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = rng.next() % (i + 1)
        a[i], a[j] = a[j], a[i]
    return Permutation(tuple(a))


def sample_batch(n: int, seed: int, trials: int, start: int = 0) -> np.ndarray:
    """Permutations ``start .. start+trials-1`` of a stream as a 1-based array."""
    _check_seed(seed)
    a = np.tile(np.arange(1, n + 1, dtype=np.int64), (trials, 1))
    if n == 1 or trials == 0:
        return a
    draws = _splitmix_block(seed, start * (n - 1), (trials, n - 1))
    rows = np.arange(trials)
    for c in range(n - 1):
        i = n - 1 - c
        j = (draws[:, c] % np.uint64(i + 1)).astype(np.int64)
        ai = a[:, i].copy()
        a[:, i] = a[rows, j]
        a[rows, j] = ai
    return a


def displacements(p: Permutation) -> tuple[int, ...]:
    """``delta_i = i - sigma(i)``."""
    return tuple(i - s for i, s in enumerate(p.image, start=1))


def histogram(p: Permutation) -> DisplacementHistogram:
    n = p.n
    counts = [0] * (2 * n - 1)
    for d in displacements(p):
        counts[d + n - 1] += 1
    return DisplacementHistogram(n, tuple(counts))


def build_pn(h: DisplacementHistogram) -> ToeplitzSymbol:
    """``P_n`` with ``d_{i-j}`` at entry ``(i, j)``."""
    coeffs = np.asarray(h.counts, dtype=np.float64)
    return ToeplitzSymbol(h.n, coeffs, symmetric=bool(np.array_equal(coeffs, coeffs[::-1])))


def trace_pn(p: Permutation) -> int:
    """``n * d_0``; ``d_0`` is the number of fixed points."""
    fixed = sum(1 for i, s in enumerate(p.image, start=1) if i == s)
    return p.n * fixed


def _check_diagonal(n: int, k: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if abs(k) > n - 1:
        raise DomainError(f"|k| = {abs(k)} exceeds n-1 = {n - 1}")


def expected_dk_fraction(n: int, k: int) -> Fraction:
    _check_diagonal(n, k)
    return Fraction(n - abs(k), n)


def expected_dk(n: int, k: int) -> float:
    """``E[d_k] = (n - |k|)/n`` for a uniform permutation."""
    return float(expected_dk_fraction(n, k))


def variance_dk_fraction(n: int, k: int) -> Fraction:
    """Exact ``Var(d_k)`` as a rational.

    With ``N = n - |k|`` indicators, each of variance ``1/n - 1/n^2`` and
    pairwise covariance ``1/(n^2 (n-1))``:
    ``N (1/n - 1/n^2) + N (N-1) / (n^2 (n-1))``.
    """
    if n < 2:
        raise DomainError("variance formula needs n >= 2")
    _check_diagonal(n, k)
    big_n = n - abs(k)
    return big_n * (Fraction(1, n) - Fraction(1, n * n)) + Fraction(
        big_n * (big_n - 1), n * n * (n - 1)
    )


def variance_dk_exact(n: int, k: int) -> float:
    return float(variance_dk_fraction(n, k))


def variance_dk_asymptotic(n: int, k: int) -> float:
    """Leading form ``(n-|k|)/n - (n-|k|)^2/n^2``."""
    _check_diagonal(n, k)
    ratio = Fraction(n - abs(k), n)
    return float(ratio - ratio * ratio)


_CHUNK_ENTRIES = 1 << 22


def _worker_dk(n: int, k: int, trials: int, seed: int) -> np.ndarray:
    out = np.empty(trials, dtype=np.int64)
    chunk = max(1, _CHUNK_ENTRIES // n)
    cols = np.arange(1, n + 1)
    for start in range(0, trials, chunk):
        m = min(chunk, trials - start)
        perms = sample_batch(n, seed, m, start=start)
        out[start : start + m] = np.count_nonzero(cols - perms == k, axis=1)
    return out


def dk_samples(n: int, k: int, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """``d_k`` for ``trials`` seeded permutations, in worker order.

    Worker ``w`` draws from the stream seeded ``seed + w (mod 2^64)`` and
    handles ``trials // workers`` trials, plus one for the first
    ``trials % workers`` workers.
    """
    _check_diagonal(n, k)
    _check_seed(seed)
    if trials < 1:
        raise DomainError("trials must be positive")
    if workers < 1:
        raise DomainError("workers must be positive")
    base, extra = divmod(trials, workers)
    shares = [base + (w < extra) for w in range(workers)]
    seeds = [(seed + w) & MASK64 for w in range(workers)]
    if workers == 1:
        return _worker_dk(n, k, trials, seed)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda a: _worker_dk(n, k, *a), zip(shares, seeds)))
    return np.concatenate(parts)


def mc_moments_dk(n: int, k: int, trials: int, seed: int, workers: int = 1) -> McEstimate:
    """Sample mean and unbiased variance of ``d_k``."""
    if trials < 2:
        raise DomainError("need at least two trials for a variance")
    d = dk_samples(n, k, trials, seed, workers)
    s1 = int(d.sum())
    s2 = int((d * d).sum())
    mean = Fraction(s1, trials)
    var = (s2 - s1 * mean) / (trials - 1)
    variance = float(var)
    return McEstimate(
        mean=float(mean),
        variance=variance,
        stderr=math.sqrt(variance / trials),
        trials=trials,
        seed=seed,
    )


def concentration_check(
    n: int, k: int, epsilon: float, trials: int, seed: int, workers: int = 1
) -> ConcentrationResult:
    """Empirical ``P(|d_k/n - E[d_k/n]| > eps)`` against Chebyshev.

    ``allowed = min(1, bound + 4 sqrt(bound/trials) + 10/trials)`` absorbs
    the sampling error of the empirical frequency.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    d = dk_samples(n, k, trials, seed, workers)
    centre = (n - abs(k)) / n**2
    literal = (n - abs(k)) / n
    ratio = d / n
    prob = np.count_nonzero(np.abs(ratio - centre) > epsilon) / trials
    literal_prob = np.count_nonzero(np.abs(ratio - literal) > epsilon) / trials
    bound = variance_dk_exact(n, k) / (n * n * epsilon * epsilon) if n >= 2 else 0.0
    allowed = min(1.0, bound + 4.0 * math.sqrt(bound / trials) + 10.0 / trials)
    return ConcentrationResult(
        empirical_prob=float(prob),
        chebyshev_bound=float(bound),
        allowed=float(allowed),
        literal_centre_prob=float(literal_prob),
        trials=trials,
    )
