"""Structured state-space convolution kernels.

Builds the lower-triangular polynomial-basis transition pair (A, B),
materializes the kernel K[t] = C . (e^A)^t . B at integer times t (unit time
step, no bilinear/zero-order-hold discretization machinery), and applies the
kernel causally with a padded FFT convolution.

Two sign conventions are exposed.  `as_written` keeps the transition matrix
all-positive exactly as the defining formula reads, which makes e^{tA} blow
up with t; `negated` (the default) flips the sign of A, giving the decaying
kernels the rest of the state-space literature uses.  Formula tests pin the
first, demos use the second — neither silently "fixes" the other.

Kernels are materialized naively; the diagonal-plus-low-rank / Woodbury
O(N+L) machinery is deliberately out of scope at these state sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidShapeError

SIGN_CONVENTIONS = ("as_written", "negated")


@dataclass
class SsmParams:
    """State dimension N with transition A [N,N], input B [N], readout C [N]."""

    N: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray | None = None
    sign_convention: str = "negated"


@dataclass
class SsmKernel:
    """Materialized kernel values K[0..L-1]."""

    values: np.ndarray

    @property
    def L(self) -> int:
        return self.values.shape[0]


def hippo_legs(n: int, sign_convention: str = "negated") -> SsmParams:
    """The HiPPO-LegS transition pair (0-indexed n, k):

        A[n,k] = sqrt(2n+1)*sqrt(2k+1)  if n > k
                 n + 1                  if n = k
                 0                      if n < k
        B[n]   = sqrt(2n+1)

    `negated` returns -A instead.  C is left unset — callers choose a readout.
    """
    if n < 1:
        raise InvalidShapeError(f"state dimension must be >= 1, got {n}")
    if sign_convention not in SIGN_CONVENTIONS:
        raise ValueError(
            f"sign_convention must be one of {SIGN_CONVENTIONS}, got {sign_convention!r}"
        )
    idx = np.arange(n)
    root = np.sqrt(2.0 * idx + 1.0)
    a = np.tril(np.outer(root, root), -1) + np.diag(idx + 1.0)
    if sign_convention == "negated":
        a = -a
    return SsmParams(N=n, A=a, B=root.copy(), C=None, sign_convention=sign_convention)


def matrix_exp(m) -> np.ndarray:
    """e^M by scaling-and-squaring around a truncated Taylor core.

    M is scaled by 2^-s until its 1-norm is <= 1/2, the series is summed to
    machine precision there, and the result squared back s times.  Intended
    for the desk-scale state matrices here (N <= 64).
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidShapeError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a, 1)
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    t = a / (2.0**s)
    acc = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    # ||t||_1 <= 1/2, so 24 terms push the truncation error below f64 roundoff
    for k in range(1, 25):
        term = term @ t / k
        acc = acc + term
    for _ in range(s):
        acc = acc @ acc
    return acc


def ssm_kernel(params: SsmParams, L: int) -> SsmKernel:
    """values[t] = C . (e^A)^t . B for t = 0..L-1.

    e^A is computed once; the powers come from repeated multiplication
    against the running state vector (unit time step).
    """
    if params.C is None:
        raise ConfigError("SsmParams.C is unset; set a readout vector before materializing")
    if L < 1:
        raise InvalidShapeError(f"kernel length must be >= 1, got {L}")
    c = np.asarray(params.C, dtype=np.float64)
    if c.shape != (params.N,):
        raise InvalidShapeError(f"C must have shape [{params.N}], got {c.shape}")
    step = matrix_exp(params.A)
    state = np.asarray(params.B, dtype=np.float64).copy()
    values = np.empty(L)
    for t in range(L):
        values[t] = c @ state
        state = step @ state
    return SsmKernel(values=values)


def causal_fft_conv(kernel, u) -> np.ndarray:
    """y[t] = sum_{s<=t} K[s] * u[t-s] via FFTs padded to 2L-1.

    The padding removes wrap-around, so truncating the inverse transform to
    L gives exactly the causal sum.  `kernel` may be an SsmKernel or a plain
    rank-1 array.
    """
    k = kernel.values if isinstance(kernel, SsmKernel) else np.asarray(kernel)
    u = np.asarray(u)
    if k.ndim != 1 or u.ndim != 1:
        raise InvalidShapeError("causal_fft_conv expects rank-1 kernel and input")
    if k.shape[0] != u.shape[0]:
        raise InvalidShapeError(
            f"kernel length {k.shape[0]} != input length {u.shape[0]}"
        )
    L = k.shape[0]
    n = 2 * L - 1
    spec = np.fft.rfft(k, n) * np.fft.rfft(u, n)
    return np.fft.irfft(spec, n)[:L]
