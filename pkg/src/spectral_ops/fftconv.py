"""Depthwise 2D cross-correlation: direct sliding-window evaluation and the
FFT route through padded real transforms with a conjugated kernel spectrum.

Cross-correlation (no kernel flip) is what CNN "convolution" layers compute:

    out[c, y, x] = sum_{i,j} image[c, y+i-oy, x+j-ox] * kernel[c, i, j]

with zeros outside the image (or wrap-around for circular mode).  Everything
is depthwise: one kernel slice per channel, no cross-channel mixing.

Output extents for an H x W image and Kh x Kw kernel:

    full      (H+Kh-1, W+Kw-1)   whole correlation support, oy = ox = Kh-1 side
    same      (H, W)             centered, oy = floor((Kh-1)/2) — CNN drop-in
    valid     (H-Kh+1, W-Kw+1)   kernel fully inside (needs Kh<=H, Kw<=W)
    circular  (H, W)             indices taken modulo the image extents

`full` keeps the entire linear-correlation support (the natural crop of the
frequency-domain pipeline); `same` is the centered convention CNNs use.  The
two disagree about what "the" output is, so both are exposed as modes.

The FFT route pads both operands to (H+Kh-1, W+Kw-1) — large enough that
circular convolution equals linear convolution — transforms with rfft2,
multiplies the image spectrum by the *conjugated* kernel spectrum
(conjugation implemented by negating the imaginary part), inverts, and
shifts/crops per mode.  direct_xcorr2d is the O(n^2 m^2) oracle it is
verified against.
"""

from __future__ import annotations

import numpy as np

from . import spectral
from .errors import InvalidShapeError
from .tensor import Rng, randn

MODES = ("full", "same", "valid", "circular")


def _check_operands(image, kernel, bias, mode):
    img = np.asarray(image)
    ker = np.asarray(kernel)
    if img.ndim != 3 or ker.ndim != 3:
        raise InvalidShapeError(
            f"expected image [C, H, W] and kernel [C, Kh, Kw], got ranks "
            f"{img.ndim} and {ker.ndim}"
        )
    if img.shape[0] != ker.shape[0]:
        raise InvalidShapeError(
            f"channel mismatch: image has {img.shape[0]} channels, "
            f"kernel has {ker.shape[0]}"
        )
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")
    if mode == "valid" and (ker.shape[1] > img.shape[1] or ker.shape[2] > img.shape[2]):
        raise InvalidShapeError(
            f"kernel extents {ker.shape[1:]} exceed image extents {img.shape[1:]} "
            f"in valid mode"
        )
    if bias is not None:
        b = np.asarray(bias)
        if b.shape != (img.shape[0],):
            raise InvalidShapeError(
                f"bias must have shape [{img.shape[0]}], got {b.shape}"
            )
    return img, ker


def _add_bias(out, bias):
    if bias is None:
        return out
    return out + np.asarray(bias, dtype=out.dtype)[:, None, None]


def direct_xcorr2d(image, kernel, bias=None, mode: str = "same") -> np.ndarray:
    """Literal sliding-window cross-correlation (the oracle path).

    Accumulates one kernel tap at a time in row-major tap order, so two
    calls that differ only in boundary handling add the same terms in the
    same order wherever the boundary is not touched.
    """
    img, ker = _check_operands(image, kernel, bias, mode)
    c, h, w = img.shape
    _, kh, kw = ker.shape

    if mode == "circular":
        out = np.zeros_like(img)
        for i in range(kh):
            for j in range(kw):
                out += np.roll(img, (-i, -j), axis=(1, 2)) * ker[:, i, j, None, None]
        return _add_bias(out, bias)

    if mode == "valid":
        pt = pl = 0
        oh, ow = h - kh + 1, w - kw + 1
    elif mode == "full":
        pt, pl = kh - 1, kw - 1
        oh, ow = h + kh - 1, w + kw - 1
    else:  # same
        pt, pl = (kh - 1) // 2, (kw - 1) // 2
        oh, ow = h, w
    # pad exactly enough that every window padded[:, y+i, x+j] exists
    pad_bottom = oh + kh - 1 - h - pt
    pad_right = ow + kw - 1 - w - pl
    padded = np.zeros((c, h + pt + pad_bottom, w + pl + pad_right), dtype=img.dtype)
    padded[:, pt : pt + h, pl : pl + w] = img

    out = np.zeros((c, oh, ow), dtype=img.dtype)
    for i in range(kh):
        for j in range(kw):
            out += padded[:, i : i + oh, j : j + ow] * ker[:, i, j, None, None]
    return _add_bias(out, bias)


def _fold_mod(kernel, h: int, w: int) -> np.ndarray:
    """Fold kernel taps into an [C, h, w] grid by index modulo the extents.

    Pads when the kernel is smaller than the grid, wraps-and-sums when it is
    larger, so circular correlation with the folded kernel equals circular
    correlation with the original.
    """
    c, kh, kw = kernel.shape
    qh = -(-kh // h)
    rows = np.zeros((c, qh * h, kw), dtype=kernel.dtype)
    rows[:, :kh, :] = kernel
    folded = rows.reshape(c, qh, h, kw).sum(axis=1)
    qw = -(-kw // w)
    cols = np.zeros((c, h, qw * w), dtype=kernel.dtype)
    cols[:, :, :kw] = folded
    return cols.reshape(c, h, qw, w).sum(axis=2)


def fft_xcorr2d(image, kernel, bias=None, mode: str = "same") -> np.ndarray:
    """Cross-correlation via padded real FFTs and a conjugated kernel spectrum."""
    img, ker = _check_operands(image, kernel, bias, mode)
    c, h, w = img.shape
    _, kh, kw = ker.shape

    if mode == "circular":
        kernel_ft = spectral.rfft2(_fold_mod(ker, h, w))
        kernel_ft.imag *= -1
        out = spectral.irfft2(spectral.rfft2(img) * kernel_ft, (h, w))
        return _add_bias(out, bias)

    ph, pw = h + kh - 1, w + kw - 1
    img_p = np.zeros((c, ph, pw), dtype=img.dtype)
    img_p[:, :h, :w] = img
    ker_p = np.zeros((c, ph, pw), dtype=ker.dtype)
    ker_p[:, :kh, :kw] = ker

    kernel_ft = spectral.rfft2(ker_p)
    kernel_ft.imag *= -1
    raw = spectral.irfft2(spectral.rfft2(img_p) * kernel_ft, (ph, pw))

    if mode == "valid":
        out = raw[:, : h - kh + 1, : w - kw + 1]
    else:
        full = np.roll(raw, (kh - 1, kw - 1), axis=(1, 2))
        if mode == "full":
            out = full
        else:  # same: centered crop of the full support
            out = full[:, kh // 2 : kh // 2 + h, kw // 2 : kw // 2 + w]
    return _add_bias(np.ascontiguousarray(out), bias)


def fft_circular_conv2d(image, kernel) -> np.ndarray:
    """True circular convolution (kernel flipped) via unpadded spectra.

    No padding and no conjugation: the plain spectrum product, so the result
    wraps around — the (m-1) edge values mix opposite sides of the image.
    Accepts [H, W] or [C, H, W] operands; a smaller kernel is zero-padded
    (larger: folded modulo the image extents) before transforming.
    """
    img = np.asarray(image)
    ker = np.asarray(kernel)
    squeeze = img.ndim == 2
    if squeeze:
        if ker.ndim != 2:
            raise InvalidShapeError("rank-2 image needs a rank-2 kernel")
        img, ker = img[None], ker[None]
    if img.ndim != 3 or ker.ndim != 3 or img.shape[0] != ker.shape[0]:
        raise InvalidShapeError(
            f"expected matching [C, H, W] / [C, Kh, Kw] operands, got "
            f"{np.asarray(image).shape} and {np.asarray(kernel).shape}"
        )
    h, w = img.shape[1:]
    out = spectral.irfft2(
        spectral.rfft2(img) * spectral.rfft2(_fold_mod(ker, h, w)), (h, w)
    )
    return out[0] if squeeze else out


def bench_conv(image_sizes, kernel_sizes, repeats: int = 5, dtype=np.float32, seed: int = 42):
    """Time direct vs FFT same-mode correlation over an (n, m) grid.

    Returns one BenchRow per (n, m, method).  Runs a small-case equality
    guard before any timing so a broken path can never produce timings.
    """
    from .bench import BenchRow, time_median

    guard_img = randn(Rng(seed), (1, 8, 8), np.float64)
    guard_ker = randn(Rng(seed + 1), (1, 3, 3), np.float64)
    guard_diff = np.max(
        np.abs(
            fft_xcorr2d(guard_img, guard_ker, mode="same")
            - direct_xcorr2d(guard_img, guard_ker, mode="same")
        )
    )
    assert guard_diff <= 1e-10, f"conv guard failed: max |fft - direct| = {guard_diff}"

    rng = Rng(seed)
    rows = []
    for n in image_sizes:
        for m in kernel_sizes:
            img = randn(rng, (1, n, n), dtype)
            ker = randn(rng, (1, m, m), dtype)
            for method, fn in (("direct", direct_xcorr2d), ("fft", fft_xcorr2d)):
                median_ms, checksum = time_median(
                    lambda fn=fn: fn(img, ker, mode="same"), repeats
                )
                rows.append(
                    BenchRow("conv", f"n={n} m={m}", method, median_ms, repeats, checksum)
                )
    return rows
