"""
Tests for IDX ingestion and class-balanced subsets.
"""

import os
import struct
from pathlib import Path

import numpy as np
import pytest

from helpers import balanced_dataset

from SSPNet_Lab.core.data import (
    IMAGE_MAGIC,
    LABEL_MAGIC,
    load_idx,
    load_mnist,
    read_idx_images,
    read_idx_labels,
    subset,
    write_idx,
)
from SSPNet_Lab.core.errors import IdxFormatError, InsufficientSamplesError


def write_raw(path: Path, header: tuple[int, ...], payload: bytes) -> Path:
    path.write_bytes(struct.pack(f">{len(header)}I", *header) + payload)
    return path


class TestIdxReader:
    """Test suite for IDX image and label files."""

    def test_pixels_map_to_unit_interval(self, tmp_path):
        """Verify byte 0 -> 0.0 and byte 255 -> 1.0."""
        path = write_raw(tmp_path / "img", (IMAGE_MAGIC, 1, 1, 3), bytes([0, 255, 51]))
        np.testing.assert_allclose(read_idx_images(path)[0, 0, 0], [0.0, 1.0, 0.2])

    def test_write_then_read(self, tmp_path):
        """Verify the writer and reader agree on byte-exact pixels."""
        data = balanced_dataset(per_class=2, seed=0, side=5)
        images = np.rint(data.images * 255.0) / 255.0
        write_idx(images, data.labels, tmp_path / "img", tmp_path / "lbl")
        loaded = load_idx(tmp_path / "img", tmp_path / "lbl", "test")
        assert loaded.images.shape == (20, 1, 5, 5)
        np.testing.assert_allclose(loaded.images, images, atol=1e-12)
        np.testing.assert_array_equal(loaded.labels, data.labels)
        assert loaded.split == "test"

    def test_wrong_magic_reports_offset_zero(self, tmp_path):
        """Verify a label file passed as images is rejected at byte 0."""
        path = write_raw(tmp_path / "img", (LABEL_MAGIC, 1), bytes([3]))
        with pytest.raises(IdxFormatError) as excinfo:
            read_idx_images(path)
        assert excinfo.value.offset == 0

    def test_truncated_pixels(self, tmp_path):
        """Verify a short pixel section is rejected."""
        path = write_raw(tmp_path / "img", (IMAGE_MAGIC, 2, 2, 2), bytes(5))
        with pytest.raises(IdxFormatError):
            read_idx_images(path)

    def test_truncated_header(self, tmp_path):
        """Verify a file shorter than its header is rejected."""
        path = tmp_path / "lbl"
        path.write_bytes(b"\x00\x00")
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_wrong_magic_wins_over_short_header(self, tmp_path):
        """Verify a bare wrong magic is reported at byte 0, not as a truncated header."""
        path = write_raw(tmp_path / "img", (LABEL_MAGIC,), b"")
        with pytest.raises(IdxFormatError, match="wrong magic") as excinfo:
            read_idx_images(path)
        assert excinfo.value.offset == 0

    def test_short_header_after_good_magic(self, tmp_path):
        """Verify a correct magic with missing dimensions reports the file length."""
        path = write_raw(tmp_path / "img", (IMAGE_MAGIC, 1), b"")
        with pytest.raises(IdxFormatError, match="truncated header") as excinfo:
            read_idx_images(path)
        assert excinfo.value.offset == 8

    def test_label_out_of_range(self, tmp_path):
        """Verify labels must be digits."""
        path = write_raw(tmp_path / "lbl", (LABEL_MAGIC, 3), bytes([1, 12, 0]))
        with pytest.raises(IdxFormatError) as excinfo:
            read_idx_labels(path)
        assert excinfo.value.offset == 9

    def test_count_mismatch(self, tmp_path):
        """Verify image and label counts must agree."""
        write_raw(tmp_path / "img", (IMAGE_MAGIC, 2, 1, 1), bytes(2))
        write_raw(tmp_path / "lbl", (LABEL_MAGIC, 3), bytes(3))
        with pytest.raises(IdxFormatError):
            load_idx(tmp_path / "img", tmp_path / "lbl")

    def test_load_mnist_names(self, mnist_dir):
        """Verify the standard MNIST file names for both splits."""
        train = load_mnist(mnist_dir, "train")
        test = load_mnist(mnist_dir, "test")
        assert (len(train), len(test)) == (30, 20)
        assert train.images.shape[1:] == (1, 8, 8)


class TestSubset:
    """Test suite for class-balanced subsampling."""

    def test_balanced_counts(self):
        """Verify exactly per_class samples of each class."""
        data = balanced_dataset(per_class=6, seed=0)
        picked = subset(data, 4, seed=1)
        np.testing.assert_array_equal(picked.class_counts(), np.full(10, 4))

    def test_keeps_file_order(self):
        """Verify the selected rows come out in their original order."""
        data = balanced_dataset(per_class=6, seed=0)
        picked = subset(data, 3, seed=2)
        rows = [int(np.flatnonzero((data.images == image).all(axis=(1, 2, 3)))[0]) for image in picked.images]
        assert rows == sorted(rows)

    def test_seed_determinism(self):
        """Verify the same seed selects the same samples and another seed does not."""
        data = balanced_dataset(per_class=6, seed=0)
        first, second = subset(data, 2, seed=5), subset(data, 2, seed=5)
        np.testing.assert_array_equal(first.images, second.images)
        assert not np.array_equal(first.images, subset(data, 2, seed=6).images)

    def test_zero_per_class(self):
        """Verify an empty subset is allowed."""
        assert len(subset(balanced_dataset(per_class=2), 0)) == 0

    def test_short_class(self):
        """Verify asking for more samples than a class holds fails."""
        with pytest.raises(InsufficientSamplesError):
            subset(balanced_dataset(per_class=2), 3)


@pytest.mark.slow
@pytest.mark.skipif("SSPNET_MNIST_DIR" not in os.environ, reason="set SSPNET_MNIST_DIR to the MNIST IDX files")
class TestRealMnist:
    """Test suite for the real MNIST files."""

    def test_split_sizes_and_histogram(self):
        """Verify 60000/10000 samples and the known class histogram of the test split."""
        directory = os.environ["SSPNET_MNIST_DIR"]
        train = load_mnist(directory, "train")
        test = load_mnist(directory, "test")
        assert (len(train), len(test)) == (60000, 10000)
        np.testing.assert_array_equal(
            test.class_counts(), [980, 1135, 1032, 1010, 982, 892, 958, 1028, 974, 1009]
        )
