import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_lab.errors import DomainError
from toeplitz_lab.permutations import (
    Permutation,
    SplitMix64,
    build_pn,
    concentration_check,
    displacements,
    dk_samples,
    expected_dk,
    histogram,
    mc_moments_dk,
    sample_batch,
    sample_uniform,
    trace_pn,
    variance_dk_asymptotic,
    variance_dk_exact,
    variance_dk_fraction,
)
from toeplitz_lab.toeplitz_core import materialize

EXAMPLE = Permutation((2, 4, 1, 3))


def exhaustive_moments(n, k):
    """Exact mean and variance of d_k over all of S_n."""
    values = []
    for image in itertools.permutations(range(1, n + 1)):
        values.append(sum(1 for i, s in enumerate(image, start=1) if i - s == k))
    total = math.factorial(n)
    mean = Fraction(sum(values), total)
    var = Fraction(sum(v * v for v in values), total) - mean * mean
    return mean, var


permutations_st = st.integers(1, 30).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


class TestGenerator:
    def test_splitmix_reference_values(self):
        # Reference outputs of SplitMix64 seeded with 1234567 (public test vector).
        rng = SplitMix64(1234567)
        assert [rng.next() for _ in range(3)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
        ]

    def test_seed_range(self):
        with pytest.raises(DomainError):
            SplitMix64(-1)
        with pytest.raises(DomainError):
            SplitMix64(2**64)

    def test_n1(self):
        assert sample_uniform(1, 99).image == (1,)

    def test_deterministic(self):
        assert sample_uniform(5, 42) == sample_uniform(5, 42)

    def test_batch_matches_scalar(self):
        for n in (1, 2, 7, 31):
            batch = sample_batch(n, 42, 1)
            assert tuple(batch[0]) == sample_uniform(n, 42).image

    def test_batch_offsets_continue_the_stream(self):
        whole = sample_batch(9, 5, 40)
        np.testing.assert_array_equal(whole[25:], sample_batch(9, 5, 15, start=25))

    def test_batch_rows_are_permutations(self):
        batch = sample_batch(12, 3, 500)
        assert np.all(np.sort(batch, axis=1) == np.arange(1, 13))

    def test_uniform_on_s3(self):
        batch = sample_batch(3, 2024, 60000)
        freq = Counter(map(tuple, batch))
        assert len(freq) == 6
        for count in freq.values():
            assert abs(count / 60000 - 1 / 6) <= 0.01


class TestDisplacements:
    def test_worked_example(self):
        assert displacements(EXAMPLE) == (-1, -2, 2, 1)

    def test_identity(self):
        assert displacements(Permutation.identity(6)) == (0,) * 6

    def test_reversal(self):
        assert displacements(Permutation.reversal(4)) == (-3, -1, 1, 3)

    def test_not_a_permutation(self):
        with pytest.raises(DomainError):
            Permutation((1, 1, 3))


class TestHistogram:
    def test_worked_example(self):
        h = histogram(EXAMPLE)
        assert [h[k] for k in range(-3, 4)] == [0, 1, 1, 0, 1, 1, 0]

    def test_identity(self):
        h = histogram(Permutation.identity(6))
        assert h[0] == 6 and sum(h.counts) == 6

    def test_reversal(self):
        h = histogram(Permutation.reversal(4))
        assert {k: d for k, d in h.items() if d} == {-3: 1, -1: 1, 1: 1, 3: 1}

    @settings(max_examples=200)
    @given(permutations_st)
    def test_sum_identities(self, image):
        h = histogram(Permutation(tuple(image)))
        assert sum(h.counts) == len(image)
        assert sum(k * d for k, d in h.items()) == 0

    @settings(max_examples=200)
    @given(permutations_st)
    def test_inverse_mirrors(self, image):
        p = Permutation(tuple(image))
        h, g = histogram(p), histogram(p.inverse())
        n = p.n
        assert all(g[k] == h[-k] for k in range(-(n - 1), n))


class TestPn:
    def test_identity(self):
        s = build_pn(histogram(Permutation.identity(3)))
        np.testing.assert_array_equal(materialize(s), 3 * np.eye(3))

    def test_worked_example_trace(self):
        m = materialize(build_pn(histogram(EXAMPLE)))
        assert np.all(np.diag(m) == 0)
        assert trace_pn(EXAMPLE) == 0

    def test_identity_trace(self):
        assert trace_pn(Permutation.identity(5)) == 25

    def test_trace_against_dense(self):
        batch = sample_batch(64, 77, 1000)
        for row in batch:
            p = Permutation(tuple(row))
            dense = materialize(build_pn(histogram(p)))
            assert trace_pn(p) == int(np.trace(dense))
            assert trace_pn(p) == 64 * histogram(p)[0]


class TestMoments:
    def test_expected_d1_n4(self):
        assert expected_dk(4, 1) == 0.75

    @pytest.mark.parametrize("n", [1, 2, 9, 100])
    def test_expected_k0(self, n):
        assert expected_dk(n, 0) == 1.0

    def test_expected_domain(self):
        with pytest.raises(DomainError):
            expected_dk(4, 4)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_expected_exhaustive(self, n):
        for k in range(-(n - 1), n):
            mean, _ = exhaustive_moments(n, k)
            assert mean == Fraction(n - abs(k), n)

    def test_variance_s2(self):
        assert variance_dk_exact(2, 1) == 0.25

    def test_variance_fixed_points_s4(self):
        _, var = exhaustive_moments(4, 0)
        assert var == 1
        assert variance_dk_exact(4, 0) == 1.0

    @pytest.mark.parametrize("n", range(2, 6))
    def test_variance_exhaustive(self, n):
        for k in range(-(n - 1), n):
            _, var = exhaustive_moments(n, k)
            assert var == variance_dk_fraction(n, k)

    def test_variance_n1_rejected(self):
        with pytest.raises(DomainError):
            variance_dk_exact(1, 0)

    def test_asymptotic_values(self):
        assert variance_dk_asymptotic(7, 0) == 0.0
        assert variance_dk_asymptotic(100, 50) == 0.25

    @pytest.mark.parametrize("n,k", [(1000, 3), (50, 10), (8, 0), (20, 19)])
    def test_gap_between_exact_and_leading_form(self, n, k):
        # Algebra on the two closed forms: the gap is N(N-1)/(n(n-1)), not O(1/n).
        big_n = n - abs(k)
        gap = variance_dk_fraction(n, k) - (Fraction(big_n, n) - Fraction(big_n, n) ** 2)
        assert gap == Fraction(big_n * (big_n - 1), n * (n - 1))
        assert variance_dk_exact(n, k) - variance_dk_asymptotic(n, k) == pytest.approx(float(gap), abs=1e-15)


class TestMonteCarlo:
    def test_mean_k0(self):
        est = mc_moments_dk(50, 0, 100_000, seed=1)
        assert abs(est.mean - 1.0) <= 3 * est.stderr
        assert est.stderr == pytest.approx(math.sqrt(est.variance / est.trials))

    def test_variance_k10(self):
        est = mc_moments_dk(50, 10, 100_000, seed=2)
        assert abs(est.variance - variance_dk_exact(50, 10)) <= 0.05 * variance_dk_exact(50, 10)

    def test_n2(self):
        est = mc_moments_dk(2, 1, 10_000, seed=3)
        assert abs(est.mean - 0.5) <= 3 * est.stderr

    def test_n50_k7(self):
        est = mc_moments_dk(50, 7, 100_000, seed=4)
        assert abs(est.mean - 0.86) <= 3 * est.stderr

    def test_deterministic_for_fixed_workers(self):
        a = dk_samples(20, 1, 1001, seed=9, workers=3)
        b = dk_samples(20, 1, 1001, seed=9, workers=3)
        np.testing.assert_array_equal(a, b)

    def test_worker_streams(self):
        d = dk_samples(20, 0, 11, seed=9, workers=2)
        cols = np.arange(1, 21)
        first = np.count_nonzero(sample_batch(20, 9, 6) == cols, axis=1)
        second = np.count_nonzero(sample_batch(20, 10, 5) == cols, axis=1)
        np.testing.assert_array_equal(d, np.concatenate([first, second]))

    def test_seed_wraps(self):
        d = dk_samples(5, 0, 4, seed=2**64 - 1, workers=2)
        assert d.shape == (4,)

    def test_needs_two_trials(self):
        with pytest.raises(DomainError):
            mc_moments_dk(5, 0, 1, seed=0)


class TestConcentration:
    def test_chebyshev_n200(self):
        res = concentration_check(200, 0, 0.05, 10_000, seed=5)
        assert res.chebyshev_bound == pytest.approx(variance_dk_exact(200, 0) / (200**2 * 0.05**2))
        assert res.within_bound

    def test_large_epsilon(self):
        res = concentration_check(30, 2, 1.5, 2_000, seed=6)
        assert res.empirical_prob == 0.0
        assert res.literal_centre_prob == 0.0

    def test_far_diagonal(self):
        res = concentration_check(50, 49, 0.5, 2_000, seed=7)
        assert res.empirical_prob == 0.0
        assert res.within_bound

    def test_literal_centre_is_far_off(self):
        # d_0/n sits near 1/n, a distance ~1 from (n-|k|)/n.
        res = concentration_check(200, 0, 0.05, 1_000, seed=8)
        assert res.literal_centre_prob == 1.0

    def test_epsilon_positive(self):
        with pytest.raises(DomainError):
            concentration_check(10, 0, 0.0, 10, seed=0)
