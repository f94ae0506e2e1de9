from dataclasses import dataclass

import numpy as np


@dataclass
class Dataset:
    images: np.ndarray  # (count, 1, rows, cols), values in [0, 1]
    labels: np.ndarray  # (count,), integers in [0, 10)
    split: str = "train"

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.images) != len(self.labels):
            raise ValueError(
                f"image count {len(self.images)} != label count {len(self.labels)}"
            )
        if self.images.size and (self.images.min() < 0 or self.images.max() > 1):
            raise ValueError("pixels must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.labels)

    def class_counts(self, num_classes: int = 10) -> np.ndarray:
        return np.bincount(self.labels, minlength=num_classes)
