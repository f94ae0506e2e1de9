"""
Seeded random streams.

PCG64 draws are platform independent, so identical seeds reproduce
identical streams. Child streams for independent work items come from
``spawn`` and depend only on (seed, key).
"""

import numpy as np

_SEED_MASK = (1 << 64) - 1


class SeededRng:
    def __init__(self, seed: int):
        self.seed = int(seed) & _SEED_MASK
        self._path: tuple[int, ...] = ()
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, key: int) -> "SeededRng":
        child = SeededRng.__new__(SeededRng)
        child.seed = self.seed
        child._path = self._path + (int(key) & _SEED_MASK,)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=child._path)
        child._generator = np.random.Generator(np.random.PCG64(sequence))
        return child

    def uniform(self, low: float, high: float, size=None) -> np.ndarray:
        return self._generator.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None) -> np.ndarray:
        return self._generator.normal(loc, scale, size)

    def integers(self, low: int, high: int, size=None) -> np.ndarray:
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def permuted_rows(self, rows: int, width: int) -> np.ndarray:
        """Independent permutation of range(width) in every row."""
        base = np.broadcast_to(np.arange(width), (rows, width))
        return self._generator.permuted(base, axis=1)

    def signs(self, size) -> np.ndarray:
        return self._generator.integers(0, 2, size) * 2.0 - 1.0

    @property
    def state(self) -> dict:
        return self._generator.bit_generator.state

    @state.setter
    def state(self, value: dict) -> None:
        self._generator.bit_generator.state = value
