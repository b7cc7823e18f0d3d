"""
Seeded randomness with named, independent substreams.

A run seed is split into substreams ("graph", "model", "dropout", "labels",
"sampler", ...) so that drawing more numbers in one stage never shifts the
numbers another stage sees.
"""
import zlib

import numpy as np


class RandomSource:
    """Seeded generator that can derive named child generators."""

    def __init__(self, seed: int):
        """
        Initialize RandomSource.

        Args:
            seed: Non-negative 64-bit integer seed
        """
        if seed < 0 or seed >= 2**64:
            raise ValueError(f"Seed must be a non-negative 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.generator = np.random.default_rng(np.random.SeedSequence(self.seed))

    def substream(self, name: str) -> np.random.Generator:
        """
        Derive the generator for a named substream.

        The child is seeded with SeedSequence(seed, spawn_key=(crc32(name),)),
        so it depends only on (seed, name) and not on how much the parent or
        other substreams have been used.

        Args:
            name: Substream name, e.g. "model" or "dropout"

        Returns:
            Fresh numpy Generator for the substream
        """
        key = zlib.crc32(name.encode("utf-8"))
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(key,)))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"
