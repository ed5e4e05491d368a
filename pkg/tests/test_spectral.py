import numpy as np
import pytest

from spectral_ops import InvalidShapeError, Rng, dft_naive, fft_axis, irfft2, randn, rfft2


def crandn(rng, n):
    return randn(rng, (n,)) + 1j * randn(rng, (n,))


def test_constant_gives_impulse():
    assert np.allclose(dft_naive([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-14)


def test_impulse_gives_constant():
    assert np.allclose(dft_naive([1, 0, 0, 0]), [1, 1, 1, 1], atol=1e-14)


def test_naive_matches_term_by_term_sum():
    # independent evaluation of the defining sum, term by term
    x = crandn(Rng(2), 8)
    expected = np.zeros(8, dtype=complex)
    for k in range(8):
        for n in range(8):
            expected[k] += x[n] * np.exp(-2j * np.pi * n * k / 8)
    assert np.max(np.abs(dft_naive(x) - expected)) < 1e-12
    assert np.max(np.abs(fft_axis(x) - expected)) < 1e-12


def test_dft_naive_rejects_matrices():
    with pytest.raises(InvalidShapeError):
        dft_naive(np.zeros((2, 2)))


def test_fft_inverse_roundtrip_length_7():
    x = crandn(Rng(3), 7)
    assert np.max(np.abs(fft_axis(fft_axis(x), inverse=True) - x)) < 1e-12


@pytest.mark.parametrize("n", list(range(1, 65)))
def test_fft_equals_naive_dft(n):
    x = crandn(Rng(100 + n), n)
    assert np.max(np.abs(fft_axis(x) - dft_naive(x))) <= 1e-10


def test_constant_2d_impulse_along_last_axis_only():
    x = np.full((3, 4), 2.0)
    out = fft_axis(x, axis=-1)
    assert np.allclose(out[:, 0], 8.0)
    assert np.allclose(out[:, 1:], 0.0, atol=1e-14)


def test_axis_out_of_range():
    with pytest.raises(InvalidShapeError):
        fft_axis(np.zeros(4), axis=2)


def test_linearity():
    rng = Rng(4)
    x, y = crandn(rng, 20), crandn(rng, 20)
    lhs = fft_axis(1.5 * x + (2 - 1j) * y)
    rhs = 1.5 * fft_axis(x) + (2 - 1j) * fft_axis(y)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


@pytest.mark.parametrize("n", [8, 31, 64])
def test_parseval(n):
    x = crandn(Rng(5 + n), n)
    lhs = np.sum(np.abs(x) ** 2)
    rhs = np.sum(np.abs(fft_axis(x)) ** 2) / n
    assert abs(lhs - rhs) / lhs < 1e-10


@pytest.mark.parametrize("n", [5, 12, 16])
def test_double_transform_reverses(n):
    x = crandn(Rng(6 + n), n)
    twice = fft_axis(fft_axis(x))
    assert np.max(np.abs(twice - n * x[(-np.arange(n)) % n])) < 1e-10


class TestRealTransforms:
    def test_roundtrip(self):
        x = randn(Rng(7), (4, 6))
        assert np.max(np.abs(irfft2(rfft2(x), (4, 6)) - x)) < 1e-12

    def test_half_spectrum_extent(self):
        assert rfft2(randn(Rng(8), (4, 6))).shape == (4, 6 // 2 + 1)

    def test_matches_full_complex_fft(self):
        x = randn(Rng(9), (4, 6))
        full = fft_axis(fft_axis(x, axis=-1), axis=-2)
        assert np.max(np.abs(rfft2(x) - full[:, :4])) < 1e-12

    def test_batched_channels(self):
        x = randn(Rng(10), (3, 5, 7))
        assert np.max(np.abs(irfft2(rfft2(x), (5, 7)) - x)) < 1e-12

    def test_inconsistent_out_extents_rejected(self):
        spec = rfft2(randn(Rng(11), (4, 6)))
        with pytest.raises(InvalidShapeError):
            irfft2(spec, (4, 8))
        with pytest.raises(InvalidShapeError):
            irfft2(spec, (5, 6))

    def test_rfft2_rejects_complex(self):
        with pytest.raises(InvalidShapeError):
            rfft2(np.zeros((4, 4), dtype=complex))
