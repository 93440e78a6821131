"""Counter-based random streams.

Every stream is a Philox generator keyed by ``SeedSequence(seed, spawn_key=keys)``,
so a stream is fully determined by the root seed and its integer path. Streams for
different keys are independent and can be drawn in any order.
"""

from typing import Tuple

import numpy as np


def _sequence(seed: int, keys: Tuple[int, ...]) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for the stream at ``(seed, *keys)``."""

    return np.random.Generator(np.random.Philox(_sequence(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child 64-bit seed, e.g. one per sweep point."""

    state = _sequence(seed, keys).generate_state(1, dtype=np.uint64)
    return int(state[0])
