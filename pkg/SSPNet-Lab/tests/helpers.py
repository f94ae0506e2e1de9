"""
Small models and datasets shared by the test suites.
"""

import numpy as np

from SSPNet_Lab.core.models import Dataset, LinearKind, NetworkSpec
from SSPNet_Lab.core.tensor import SeededRng, Tensor, dense, reshape


class LinearModel:
    """logits = flatten(x) W + b"""

    def __init__(self, seed: int = 0, in_features: int = 16, classes: int = 10):
        rng = SeededRng(seed)
        self.weight = Tensor(rng.normal(0.0, 1.0, (in_features, classes)))
        self.bias = Tensor(rng.normal(0.0, 0.1, classes))

    def __call__(self, x):
        x = x if isinstance(x, Tensor) else Tensor(x)
        return dense(reshape(x, (x.shape[0], -1)), self.weight, self.bias)


def balanced_dataset(per_class: int, seed: int = 0, side: int = 4) -> Dataset:
    rng = SeededRng(seed)
    labels = np.tile(np.arange(10), per_class)
    # One bright pixel per class so the data is learnable.
    images = rng.uniform(0.0, 0.3, (len(labels), 1, side, side))
    images[np.arange(len(labels)), 0, labels % side, labels // side % side] += 0.6
    return Dataset(np.clip(images, 0.0, 1.0), labels)


def dense_spec(block_kind="resblock", **overrides) -> NetworkSpec:
    settings = dict(
        block_kind=block_kind,
        blocks_per_group=1,
        group_channels=(8,),
        in_channels=16,
        linear_kind=LinearKind.DENSE,
    )
    settings.update(overrides)
    return NetworkSpec(**settings)
