"""
Reader and writer for the big-endian IDX files MNIST ships in.

Images::

    u32 magic 0x00000803 | u32 count | u32 rows | u32 cols | u8 pixels, row-major

Labels::

    u32 magic 0x00000801 | u32 count | u8 labels
"""

import logging
import struct
from pathlib import Path

import numpy as np

from ..errors import IdxFormatError
from ..models import Dataset

logger = logging.getLogger(__name__)

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
NUM_CLASSES = 10

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


def _read_header(raw: bytes, magic: int, fields: int, path) -> tuple[int, ...]:
    if len(raw) < 4:
        raise IdxFormatError(f"{path}: truncated header", len(raw))
    (found,) = struct.unpack(">I", raw[:4])
    if found != magic:
        raise IdxFormatError(f"{path}: wrong magic 0x{found:08x}, expected 0x{magic:08x}", 0)
    size = 4 * (1 + fields)
    if len(raw) < size:
        raise IdxFormatError(f"{path}: truncated header", len(raw))
    return struct.unpack(f">{fields}I", raw[4:size])


def read_idx_images(path: str | Path) -> np.ndarray:
    """(count, 1, rows, cols) float64 pixels scaled to [0, 1]."""
    raw = Path(path).read_bytes()
    count, rows, cols = _read_header(raw, IMAGE_MAGIC, 3, path)
    expected = 16 + count * rows * cols
    if len(raw) < expected:
        raise IdxFormatError(f"{path}: truncated pixel data ({count} images of {rows}x{cols})", len(raw))
    pixels = np.frombuffer(raw, dtype=np.uint8, count=count * rows * cols, offset=16)
    return pixels.reshape(count, 1, rows, cols).astype(np.float64) / 255.0


def read_idx_labels(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    (count,) = _read_header(raw, LABEL_MAGIC, 1, path)
    if len(raw) < 8 + count:
        raise IdxFormatError(f"{path}: truncated label data ({count} labels)", len(raw))
    labels = np.frombuffer(raw, dtype=np.uint8, count=count, offset=8).astype(np.int64)
    bad = np.flatnonzero(labels >= NUM_CLASSES)
    if bad.size:
        raise IdxFormatError(f"{path}: label {labels[bad[0]]} out of range", 8 + int(bad[0]))
    return labels


def load_idx(images_path: str | Path, labels_path: str | Path, split: str = "train") -> Dataset:
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if len(images) != len(labels):
        raise IdxFormatError(
            f"{images_path} holds {len(images)} images but {labels_path} holds {len(labels)} labels", 4
        )
    logger.info("loaded %d %s samples from %s", len(labels), split, images_path)
    return Dataset(images, labels, split)


def load_mnist(data_dir: str | Path, split: str = "train") -> Dataset:
    images_name, labels_name = MNIST_FILES[split]
    data_dir = Path(data_dir)
    return load_idx(data_dir / images_name, data_dir / labels_name, split)


def write_idx(images: np.ndarray, labels: np.ndarray, images_path: str | Path, labels_path: str | Path) -> None:
    """Write pixels in [0, 1] (rounded to bytes) and labels as IDX files."""
    images = np.asarray(images, dtype=np.float64)
    if images.ndim == 4:
        images = images[:, 0]
    count, rows, cols = images.shape
    pixels = np.rint(np.clip(images, 0.0, 1.0) * 255.0).astype(np.uint8)
    with open(images_path, "wb") as handle:
        handle.write(struct.pack(">4I", IMAGE_MAGIC, count, rows, cols))
        handle.write(pixels.tobytes())
    labels = np.asarray(labels, dtype=np.uint8)
    with open(labels_path, "wb") as handle:
        handle.write(struct.pack(">2I", LABEL_MAGIC, len(labels)))
        handle.write(labels.tobytes())
