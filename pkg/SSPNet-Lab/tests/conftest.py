"""
Shared fixtures: a linear model, a small learnable dataset and a
synthetic MNIST directory in IDX format.
"""

import numpy as np
import pytest

from helpers import LinearModel, balanced_dataset

from SSPNet_Lab.core.data import MNIST_FILES, write_idx


@pytest.fixture
def linear_model():
    return LinearModel(seed=7)


@pytest.fixture
def tiny_dataset():
    return balanced_dataset(per_class=4, seed=1)


@pytest.fixture
def mnist_dir(tmp_path):
    """Synthetic 8x8 'MNIST': 3 training and 2 test images per class."""
    directory = tmp_path / "mnist"
    directory.mkdir()
    for split, per_class in (("train", 3), ("test", 2)):
        data = balanced_dataset(per_class, seed=len(split), side=8)
        images_name, labels_name = MNIST_FILES[split]
        write_idx(data.images, data.labels, directory / images_name, directory / labels_name)
    return directory
