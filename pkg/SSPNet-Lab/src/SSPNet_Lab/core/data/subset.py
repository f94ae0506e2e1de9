import numpy as np

from ..errors import InsufficientSamplesError
from ..models import Dataset
from ..tensor import SeededRng
from .idx import NUM_CLASSES


def subset(dataset: Dataset, per_class: int, seed: int = 0) -> Dataset:
    """Class-balanced subsample: ``per_class`` samples of every class, in file order."""
    if per_class < 0:
        raise InsufficientSamplesError(f"per_class must be non-negative, got {per_class}")
    rng = SeededRng(seed)
    chosen = []
    for label in range(NUM_CLASSES):
        candidates = np.flatnonzero(dataset.labels == label)
        if len(candidates) < per_class:
            raise InsufficientSamplesError(
                f"class {label} has {len(candidates)} samples, {per_class} requested"
            )
        chosen.append(candidates[rng.permutation(len(candidates))[:per_class]])
    index = np.sort(np.concatenate(chosen))
    return Dataset(dataset.images[index], dataset.labels[index], dataset.split)
