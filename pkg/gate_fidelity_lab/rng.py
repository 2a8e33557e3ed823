"""Counter-based random substreams.

Every random draw of an experiment comes from a Philox generator keyed by
(seed, purpose, protocol, index).  Two runs with the same seed therefore see
the same numbers for plan position l no matter which thread executes it or
in what order.
"""

import numpy as np

from .errors import InvalidInputError

# Stream purposes
PLAN = 0
SHOTS = 1

PROTOCOL_CODES = {"A": 0, "B": 1, "C1": 2, "C2": 3}


class RandomStreams:
    """Factory of independent, reproducible generators derived from one seed."""

    def __init__(self, seed: int):
        if seed < 0:
            raise InvalidInputError(f"Seed must be non-negative, got {seed}")
        self.seed = int(seed)

    def generator(self, *key: int) -> np.random.Generator:
        """Generator for the substream named by ``key``."""
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(int(k) for k in key))
        return np.random.Generator(np.random.Philox(sequence))

    def plan_uniforms(self, protocol: str, count: int) -> np.ndarray:
        """The ``count`` uniforms that place plan positions 0..count-1 for ``protocol``."""
        return self.generator(PLAN, PROTOCOL_CODES[protocol]).random(count)

    def shots(self, protocol: str, position: int) -> np.random.Generator:
        """Generator for every shot of plan position ``position``."""
        return self.generator(SHOTS, PROTOCOL_CODES[protocol], position)

    def __repr__(self) -> str:
        return f"RandomStreams(seed={self.seed})"
