"""Counter-based random sub-streams.

Every random draw in besovlab comes from a Philox generator keyed by the
experiment seed plus a tuple of integer coordinates (replicate, coordinate,
block, ...). A stream depends only on its key, never on the order in which
streams are created, so replicates can run in any order or in parallel.
"""

from typing import Iterable, List

import numpy as np


SEED_MASK = (1 << 64) - 1


def normalize_seed(seed: int) -> int:
    """Return the seed reduced to an unsigned 64-bit integer.

    Raises:
        ValueError: If seed is not an integer.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    return int(seed) & SEED_MASK


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Create the generator for sub-stream ``keys`` of ``seed``.

    Args:
        seed: Experiment seed (64-bit).
        *keys: Non-negative integers identifying the sub-stream.

    Returns:
        A numpy Generator backed by Philox.
    """
    sequence = np.random.SeedSequence(
        entropy=normalize_seed(seed),
        spawn_key=tuple(int(k) for k in keys),
    )
    return np.random.Generator(np.random.Philox(sequence))


def substreams(seed: int, keys: Iterable[tuple]) -> List[np.random.Generator]:
    """Create one generator per key tuple."""
    return [substream(seed, *key) for key in keys]
