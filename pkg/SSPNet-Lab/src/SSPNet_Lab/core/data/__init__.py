"""
MNIST ingestion from IDX files and class-balanced subsets.
"""

from .idx import (
    IMAGE_MAGIC,
    LABEL_MAGIC,
    MNIST_FILES,
    NUM_CLASSES,
    load_idx,
    load_mnist,
    read_idx_images,
    read_idx_labels,
    write_idx,
)
from .subset import subset
