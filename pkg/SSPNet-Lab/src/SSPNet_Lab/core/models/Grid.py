from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Periodic grid of n points at the cell centers of (0, 1)."""

    n: int = 100

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.n}")

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) / self.n
