"""Dense tensors, seeded normal sampling, and the FTNS binary tensor format.

Tensors are plain row-major (C-order) numpy arrays of float32 or float64;
frequency-domain intermediates elsewhere in the library use the matching
complex dtypes.  Arrays are treated as immutable values: every operation
returns fresh buffers and nothing mutates its inputs.

The random stream is fully pinned down so that ports in other languages can
reproduce fixtures bit-for-bit; see :class:`Rng`.

FTNS file layout (little-endian throughout):

    offset  size       field
    0       4          magic bytes ``F T N S``
    4       1          format version, u8, currently 1
    5       1          dtype code, u8: 0 = f32, 1 = f64
    6       4          rank, u32
    10      8 * rank   extents, u64 each
    ...     payload    scalars, row-major, little-endian

The payload length must equal ``itemsize * product(extents)`` exactly.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .errors import FormatError, InvalidShapeError

_MAGIC = b"FTNS"
_VERSION = 1

# dtype code <-> numpy dtype (explicitly little-endian for the wire format)
_DTYPE_FOR_CODE = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_CODE_FOR_DTYPE = {np.dtype(np.float32): 0, np.dtype(np.float64): 1}

# splitmix64 constants
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)
_S11 = np.uint64(11)


def check_shape(shape) -> tuple[int, ...]:
    """Validate a shape: rank >= 1 and every extent a positive integer."""
    try:
        extents = tuple(int(e) for e in shape)
    except TypeError as exc:
        raise InvalidShapeError(f"shape {shape!r} is not a sequence of extents") from exc
    if len(extents) < 1:
        raise InvalidShapeError("rank must be >= 1 (scalar shapes are not tensors)")
    if any(e < 1 for e in extents):
        raise InvalidShapeError(f"all extents must be >= 1, got {extents}")
    return extents


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, vectorized over uint64 (wrapping arithmetic)
    x = (x ^ (x >> _S30)) * _MIX1
    x = (x ^ (x >> _S27)) * _MIX2
    return x ^ (x >> _S31)


class Rng:
    """Deterministic stream of standard-normal draws.

    The raw stream is splitmix64 evaluated at consecutive counter values:

        out_i = mix64(seed + i * 0x9E3779B97F4A7C15)   for i = 1, 2, 3, ...

    where ``mix64`` is the splitmix64 finalizer
    (``z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27;
    z *= 0x94D049BB133111EB; z ^= z>>31`` on 64-bit wrapping integers).

    Each raw output maps to a uniform in (0, 1] via
    ``u = ((out >> 11) + 1) * 2**-53``; consecutive uniform pairs (u1, u2)
    feed the Box-Muller transform, emitting

        sqrt(-2 ln u1) * cos(2 pi u2),   then
        sqrt(-2 ln u1) * sin(2 pi u2).

    A draw of n samples consumes exactly ceil(n/2) pairs; for odd n the
    trailing sin value is discarded and never carried into the next draw.
    All math is IEEE-754 f64, so equal seeds reproduce equal streams across
    platforms; f32 tensors are f64 draws rounded once at the end.

    Single-owner: instances are cheap and not meant to be shared between
    threads.
    """

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def _raw(self, n: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        return _mix64(self._seed + idx * _GOLDEN)

    def normal(self, n: int) -> np.ndarray:
        """Return the next `n` standard-normal f64 draws."""
        if n < 0:
            raise ValueError(f"sample count must be >= 0, got {n}")
        if n == 0:
            return np.empty(0)
        pairs = (n + 1) // 2
        raw = self._raw(2 * pairs)
        u = ((raw >> _S11).astype(np.float64) + 1.0) * 2.0**-53
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        theta = (2.0 * np.pi) * u[1::2]
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(theta)
        out[1::2] = radius * np.sin(theta)
        return out[:n]


def randn(rng: Rng, shape, dtype=np.float64) -> np.ndarray:
    """Tensor of i.i.d. standard-normal draws from `rng`.

    Draws are generated in f64 and rounded to `dtype` (f32 or f64).
    """
    extents = check_shape(shape)
    dt = np.dtype(dtype)
    if dt not in _CODE_FOR_DTYPE:
        raise ValueError(f"dtype must be float32 or float64, got {dt}")
    flat = rng.normal(math.prod(extents))
    return flat.astype(dt, copy=False).reshape(extents)


def write_tensor(t, path) -> None:
    """Write a float32/float64 array to `path` in the FTNS format."""
    a = np.asarray(t)
    if a.dtype not in _CODE_FOR_DTYPE:
        raise ValueError(f"FTNS stores float32/float64 tensors only, got dtype {a.dtype}")
    extents = check_shape(a.shape)
    code = _CODE_FOR_DTYPE[a.dtype]
    header = _MAGIC + struct.pack("<BBI", _VERSION, code, len(extents))
    header += struct.pack(f"<{len(extents)}Q", *extents)
    payload = np.ascontiguousarray(a, dtype=_DTYPE_FOR_CODE[code]).tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_tensor(path) -> np.ndarray:
    """Read an FTNS file back into a numpy array (inverse of write_tensor)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 10:
        raise FormatError(f"truncated file: fixed header needs 10 bytes, got {len(data)}")
    if data[:4] != _MAGIC:
        raise FormatError(f"bad magic at offset 0: expected {_MAGIC!r}, got {data[:4]!r}")
    version, code, rank = struct.unpack_from("<BBI", data, 4)
    if version != _VERSION:
        raise FormatError(f"unsupported version {version} at offset 4 (expected {_VERSION})")
    if code not in _DTYPE_FOR_CODE:
        raise FormatError(f"unknown dtype code {code} at offset 5")
    if rank < 1:
        raise FormatError(f"rank {rank} at offset 6 is invalid (must be >= 1)")
    end_extents = 10 + 8 * rank
    if len(data) < end_extents:
        raise FormatError(
            f"truncated file: extents end at offset {end_extents}, file has {len(data)} bytes"
        )
    extents = struct.unpack_from(f"<{rank}Q", data, 10)
    if any(e < 1 for e in extents):
        raise FormatError(f"non-positive extent in {extents} at offset 10")
    dt = _DTYPE_FOR_CODE[code]
    count = math.prod(extents)
    expected = end_extents + count * dt.itemsize
    if len(data) != expected:
        raise FormatError(
            f"payload length mismatch at offset {end_extents}: expected file size "
            f"{expected}, got {len(data)}"
        )
    flat = np.frombuffer(data, dtype=dt, count=count, offset=end_extents)
    # native byte order, fresh writable buffer
    return flat.astype(dt.newbyteorder("="), copy=True).reshape(extents)
