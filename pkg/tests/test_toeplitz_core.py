import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_lab.errors import DimensionError, DomainError
from toeplitz_lab.toeplitz_core import (
    TRIANGULAR,
    ToeplitzSymbol,
    constant,
    fft_radix2,
    from_scaled_kernel,
    identity_symbol,
    materialize,
    matvec_fft,
    matvec_naive,
    tabulated,
    trace,
    triangular_symbol,
)


def random_symbol(rng, n, symmetric=False):
    coeffs = rng.uniform(-1.0, 1.0, 2 * n - 1)
    if symmetric:
        coeffs = 0.5 * (coeffs + coeffs[::-1])
    return ToeplitzSymbol(n, coeffs, symmetric=symmetric)


class TestScaledKernel:
    def test_triangular_n4_k_minus2(self):
        s = from_scaled_kernel(TRIANGULAR, 4)
        assert s.coeff(-2) == 0.5

    @pytest.mark.parametrize("n", [1, 5, 17])
    def test_constant_profile(self, n):
        s = from_scaled_kernel(constant(1.0), n)
        assert np.all(s.coeffs == 1.0)
        assert s.symmetric

    def test_triangular_n100_k37(self):
        assert from_scaled_kernel(TRIANGULAR, 100).coeff(37) == pytest.approx(0.63, abs=1e-15)

    def test_tabulated_linear_interpolation(self):
        f = tabulated([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
        s = from_scaled_kernel(f, 4)
        np.testing.assert_allclose(s.coeffs, triangular_symbol(4).coeffs, atol=1e-15)

    def test_tabulated_undefined_point(self):
        f = tabulated([-1.0, 0.0, 1.0], [0.0, np.nan, 0.0])
        with pytest.raises(DomainError):
            from_scaled_kernel(f, 3)

    def test_tabulated_must_cover_interval(self):
        with pytest.raises(DomainError):
            tabulated([-0.5, 1.0], [1.0, 1.0])
        with pytest.raises(DomainError):
            tabulated([0.0], [1.0])

    def test_asymmetric_profile_clears_flag(self):
        f = tabulated([-1.0, 1.0], [0.0, 1.0])
        assert not from_scaled_kernel(f, 3).symmetric

    @pytest.mark.parametrize("n", [1, 2, 3, 10, 99, 1000])
    def test_triangular_symbol_matches_scaled_kernel_exactly(self, n):
        a = triangular_symbol(n)
        b = from_scaled_kernel(TRIANGULAR, n)
        assert np.array_equal(a.coeffs, b.coeffs)
        assert a.symmetric


class TestSymbol:
    def test_length_checked(self):
        with pytest.raises(DimensionError):
            ToeplitzSymbol(3, np.zeros(4))

    def test_symmetric_flag_checked(self):
        with pytest.raises(DomainError):
            ToeplitzSymbol(2, [1.0, 2.0, 3.0], symmetric=True)

    def test_coeffs_are_read_only(self):
        s = triangular_symbol(3)
        with pytest.raises(ValueError):
            s.coeffs[0] = 5.0

    def test_triangular_n1(self):
        assert triangular_symbol(1).coeffs.tolist() == [1.0]

    def test_triangular_main_diagonal(self):
        assert triangular_symbol(4).coeff(0) == 1.0


class TestMaterialize:
    def test_banded_example_n4(self):
        # The displayed E_4(x) carries x above the diagonal, i.e. on i-j = -1.
        x = 3.5
        shown = np.array(
            [
                [1, x, 0, 0],
                [-1, 1, x, 0],
                [0, -1, 1, x],
                [0, 0, -1, 1],
            ],
            dtype=float,
        )
        as_displayed = ToeplitzSymbol.from_diagonals({0: 1.0, -1: x, 1: -1.0}, 4)
        np.testing.assert_array_equal(materialize(as_displayed), shown)
        # With e_1 = x, e_-1 = -1 placed on diagonal i-j the result is the transpose.
        by_definition = ToeplitzSymbol.from_diagonals({0: 1.0, 1: x, -1: -1.0}, 4)
        np.testing.assert_array_equal(materialize(by_definition), shown.T)

    def test_identity(self):
        np.testing.assert_array_equal(materialize(identity_symbol(5)), np.eye(5))

    def test_triangular_3(self):
        expected = np.array([[1, 2 / 3, 1 / 3], [2 / 3, 1, 2 / 3], [1 / 3, 2 / 3, 1]])
        np.testing.assert_allclose(materialize(triangular_symbol(3)), expected, rtol=0, atol=1e-15)

    def test_triangular_entry_2_4(self):
        assert materialize(triangular_symbol(4))[1, 3] == 0.5

    @pytest.mark.parametrize("n", [1, 2, 7, 50])
    def test_triangular_entry_range(self, n):
        m = materialize(triangular_symbol(n))
        assert m.min() >= 1.0 / n - 1e-15
        assert m.max() <= 1.0
        assert np.all(np.diag(m) == 1.0)
        for k in range(-(n - 1), n):
            assert np.unique(np.diagonal(m, offset=k)).size == 1


class TestMatvec:
    def test_identity_naive(self):
        v = np.array([0.3, -2.0, 7.0])
        np.testing.assert_array_equal(matvec_naive(identity_symbol(3), v), v)

    def test_triangular_2(self):
        np.testing.assert_allclose(matvec_naive(triangular_symbol(2), [1.0, 0.0]), [1.0, 0.5])

    def test_naive_against_dense_n64(self):
        rng = np.random.default_rng(7)
        s = random_symbol(rng, 64)
        v = rng.standard_normal(64)
        np.testing.assert_allclose(matvec_naive(s, v), materialize(s) @ v, rtol=0, atol=1e-12)

    def test_identity_fft(self):
        np.testing.assert_allclose(matvec_fft(identity_symbol(3), [3.0, 1.0, 4.0]), [3.0, 1.0, 4.0], atol=1e-14)

    def test_triangular_512_fft(self):
        rng = np.random.default_rng(11)
        v = rng.standard_normal(512)
        v /= np.linalg.norm(v)
        s = triangular_symbol(512)
        naive = matvec_naive(s, v)
        err = np.max(np.abs(matvec_fft(s, v) - naive)) / np.max(np.abs(naive))
        assert err <= 1e-10

    def test_all_ones_fft(self):
        s = from_scaled_kernel(constant(1.0), 8)
        np.testing.assert_allclose(matvec_fft(s, np.ones(8)), np.full(8, 8.0), atol=1e-12)

    @pytest.mark.parametrize("fn", [matvec_naive, matvec_fft])
    def test_length_mismatch(self, fn):
        with pytest.raises(DimensionError):
            fn(triangular_symbol(4), np.ones(3))

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 100, 1000, 4096])
    def test_fft_matches_naive(self, n):
        rng = np.random.default_rng(n)
        s = random_symbol(rng, n)
        v = rng.uniform(-1.0, 1.0, n)
        naive = matvec_naive(s, v)
        err = np.max(np.abs(matvec_fft(s, v) - naive)) / max(np.max(np.abs(naive)), 1e-300)
        assert err <= 1e-10


@pytest.mark.parametrize("size", [1, 2, 8, 64, 1024])
def test_fft_radix2_against_numpy(size):
    rng = np.random.default_rng(size)
    x = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    np.testing.assert_allclose(fft_radix2(x), np.fft.fft(x), atol=1e-10 * size)
    np.testing.assert_allclose(fft_radix2(fft_radix2(x), inverse=True), x, atol=1e-12 * size)


def test_fft_radix2_rejects_bad_length():
    with pytest.raises(DimensionError):
        fft_radix2(np.ones(6))


class TestTrace:
    @pytest.mark.parametrize("n", [1, 4, 33])
    def test_triangular(self, n):
        assert trace(triangular_symbol(n)) == n

    def test_identity(self):
        assert trace(identity_symbol(7)) == 7

    def test_quarter(self):
        assert trace(ToeplitzSymbol.from_diagonals({0: 0.25}, 8)) == 2.0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_bilinear_symmetry(n, seed):
    rng = np.random.default_rng(seed)
    s = random_symbol(rng, n, symmetric=True)
    u = rng.standard_normal(n)
    v = rng.standard_normal(n)
    lhs = u @ matvec_naive(s, v)
    rhs = v @ matvec_naive(s, u)
    scale = np.sum(np.abs(u)) * np.sum(np.abs(v))
    assert abs(lhs - rhs) <= 1e-10 * scale
