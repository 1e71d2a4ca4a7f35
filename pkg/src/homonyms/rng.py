"""Deterministic random stream derivation.

Every Monte Carlo task owns a generator derived from (seed, *path), e.g.
(seed, grid_index, replicate_index). Streams depend only on that tuple,
never on execution order, so parallel schedules reproduce serial output.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return an independent generator keyed by (seed, *path).

    `seed` is a 64-bit non-negative integer; path components are
    non-negative integers (replicate indices, grid indices, ...).
    """
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    entropy = [seed] + [int(p) for p in path]
    if any(p < 0 for p in entropy):
        raise ValueError("stream path components must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(entropy))
