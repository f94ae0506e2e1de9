from dataclasses import dataclass

import numpy as np


@dataclass
class BurgersState:
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.float64)
        if not np.all(np.isfinite(self.u)):
            raise ValueError("state holds non-finite values")
        if self.t < 0:
            raise ValueError("time must be non-negative")
