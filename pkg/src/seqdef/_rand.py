"""Deterministic random streams.

Every stochastic routine in the package draws from a Philox-4x64-10
counter-based generator (numpy's implementation). A stream is addressed
by the user seed plus a small tuple of stream indices (e.g. a trial
number), so independent trials can run in parallel and any run can be
reproduced from (seed, indices) alone.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _fold(indices: tuple[int, ...]) -> int:
    # splitmix64-style fold of the index tuple into one 64-bit word
    acc = 0x9E3779B97F4A7C15
    for idx in indices:
        acc = (acc ^ (int(idx) & _MASK64)) & _MASK64
        acc = (acc * 0xBF58476D1CE4E5B9) & _MASK64
        acc ^= acc >> 31
    return acc


def rng_stream(seed: int, *indices: int) -> np.random.Generator:
    """Generator for the stream addressed by (seed, *indices)."""
    key = np.array([int(seed) & _MASK64, _fold(indices)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
