"""Microbenchmark plumbing: timed medians and CSV rows.

Timing protocol: one warm-up call (excluded), then `repeats` timed calls on
the monotonic clock; the median is reported.  Each row carries a checksum
(first element of the last output) so timed work cannot be optimized away.
Timing loops run sequentially — never in parallel — so cases don't contend.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

CSV_HEADER = "suite,params,method,median_ms,repeats,checksum"


@dataclass
class BenchRow:
    suite: str
    params: str  # space-separated key=value pairs, e.g. "n=256 m=31"
    method: str
    median_ms: float
    repeats: int
    checksum: float


def time_median(fn, repeats: int) -> tuple[float, float]:
    """Median wall-time of `fn()` in ms over `repeats` runs after 1 warm-up."""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    out = fn()  # warm-up, excluded from the median
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        samples.append((time.perf_counter() - start) * 1e3)
    checksum = float(np.asarray(out).flat[0])
    return float(np.median(samples)), checksum


def write_csv(rows, fh) -> None:
    """Write rows sorted by (params, method) for deterministic output."""
    fh.write(CSV_HEADER + "\n")
    for row in sorted(rows, key=lambda r: (r.params, r.method)):
        fh.write(
            f"{row.suite},{row.params},{row.method},"
            f"{row.median_ms:.6f},{row.repeats},{row.checksum:.9g}\n"
        )
