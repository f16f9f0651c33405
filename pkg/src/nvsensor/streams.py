"""Counter-based RNG streams, one per (seed, purpose, index).

Philox counters make each stream a pure function of its key tuple, so any
worker can regenerate index i's draws without coordinating with the others
and populations come out identical at every worker count.
"""

import numpy as np

TAG_SAMPLE = 0    # parameter sampling for one nanodiamond
TAG_READOUT = 1   # photon shot noise for one nanodiamond
TAG_DETACH = 2    # RNA-copy allocation for one group


def stream(seed: int, tag: int, index: int) -> np.random.Generator:
    """Independent generator for (seed, tag, index).

    The tag and index live in the upper counter words; the low word is left
    for Philox's own block counter, giving each stream 2**64 blocks of
    headroom before any overlap.
    """
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a uint64, got {seed}")
    if index < 0 or tag < 0:
        raise ValueError("tag and index must be non-negative")
    bitgen = np.random.Philox(key=seed, counter=[0, int(index), int(tag), 0])
    return np.random.Generator(bitgen)
