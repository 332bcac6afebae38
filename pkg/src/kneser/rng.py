"""Counter-based deterministic random sampling (Philox 2x32-10).

Every draw is a pure function of (seed, sample index, draw index), so
results are reproducible bit-for-bit regardless of chunking or thread
count.  Sample i of a stream uses counter-high = i and consumes counter-low
values 0, 1, 2, ... as needed (rejection sampling never disturbs other
samples' streams).
"""
from __future__ import annotations

import numpy as np

PHILOX_M = np.uint64(0xD2511F53)
PHILOX_W = np.uint32(0x9E3779B9)
_U32 = np.uint64(0xFFFFFFFF)


def _fold_seed(seed: int) -> np.uint32:
    seed &= (1 << 64) - 1
    return np.uint32((seed ^ (seed >> 32)) & 0xFFFFFFFF)


def philox2x32(lo: np.ndarray, hi: np.ndarray, key: np.uint32):
    """Vectorized Philox 2x32, 10 rounds; lo/hi are uint32 arrays."""
    ctr_lo = lo.astype(np.uint64)
    ctr_hi = hi.astype(np.uint64)
    k = np.uint64(key)
    for _ in range(10):
        product = PHILOX_M * ctr_lo
        p_hi = product >> np.uint64(32)
        p_lo = product & _U32
        ctr_lo, ctr_hi = (p_hi ^ k ^ ctr_hi) & _U32, p_lo
        k = (k + np.uint64(PHILOX_W)) & _U32
    return ctr_lo.astype(np.uint32), ctr_hi.astype(np.uint32)


def _to_unit(u32: np.ndarray) -> np.ndarray:
    """uint32 -> (0, 1), strictly inside by the half-step offset."""
    return (u32.astype(np.float64) + 0.5) / 4294967296.0


def ball_samples(seed: int, start: int, count: int, radius: float) -> np.ndarray:
    """Uniform points in the open ball B(0, radius): rows start..start+count-1
    of the stream determined by seed."""
    key = _fold_seed(seed)
    out = np.zeros((count, 3))
    pending = np.arange(count, dtype=np.int64)
    attempt = 0
    while pending.size:
        idx = (pending + start).astype(np.uint32)
        lo0 = np.full(pending.size, 2 * attempt, dtype=np.uint32)
        a, b = philox2x32(lo0, idx, key)
        c, _ = philox2x32(lo0 + np.uint32(1), idx, key)
        xyz = np.stack(
            [
                2.0 * _to_unit(a) - 1.0,
                2.0 * _to_unit(b) - 1.0,
                2.0 * _to_unit(c) - 1.0,
            ],
            axis=1,
        ) * radius
        ok = np.sum(xyz * xyz, axis=1) < radius * radius
        out[pending[ok]] = xyz[ok]
        pending = pending[~ok]
        attempt += 1
        if attempt > 64:  # pragma: no cover - astronomically unlikely
            raise RuntimeError("ball rejection sampling failed to converge")
    return out
