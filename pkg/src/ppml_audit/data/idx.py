"""IDX (MNIST-family) file ingestion."""

import gzip
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .dataset import ImageDataset, dataset_from_arrays

_IDX_DTYPES = {
    0x08: np.uint8,
    0x09: np.int8,
    0x0B: ">i2",
    0x0C: ">i4",
    0x0D: ">f4",
    0x0E: ">f8",
}

TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"
TEST_IMAGES = "t10k-images-idx3-ubyte"
TEST_LABELS = "t10k-labels-idx1-ubyte"


def read_idx(path) -> np.ndarray:
    """Parse one IDX file (optionally gzipped). Big-endian header: two zero
    bytes, a dtype code, the dimension count, then uint32 sizes per dimension.
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4:
        raise FormatError(f"{path}: truncated magic at offset 0")
    zero1, zero2, dtype_code, ndim = struct.unpack(">BBBB", data[:4])
    if zero1 != 0 or zero2 != 0:
        raise FormatError(f"{path}: bad magic bytes at offset 0")
    if dtype_code not in _IDX_DTYPES:
        raise FormatError(f"{path}: unknown dtype code 0x{dtype_code:02x} at offset 2")
    header_end = 4 + 4 * ndim
    if len(data) < header_end:
        raise FormatError(f"{path}: truncated dimension header at offset 4")
    dims = struct.unpack(f">{ndim}I", data[4:header_end])
    dtype = np.dtype(_IDX_DTYPES[dtype_code])
    expected = header_end + dtype.itemsize * int(np.prod(dims, dtype=np.int64))
    if len(data) < expected:
        raise FormatError(f"{path}: truncated payload at offset {len(data)} "
                          f"(expected {expected} bytes)")
    arr = np.frombuffer(data, dtype=dtype, count=int(np.prod(dims, dtype=np.int64)),
                        offset=header_end)
    return arr.reshape(dims)


def _find(directory: Path, stem: str) -> Path | None:
    for candidate in (directory / stem, directory / (stem + ".gz")):
        if candidate.exists():
            return candidate
    return None


def load_idx(path) -> ImageDataset:
    """Load an MNIST-style directory holding the four canonically named IDX
    files (test pair optional). Grayscale images gain a trailing channel axis;
    class names are the digit strings 0..max label."""
    directory = Path(path)
    if not directory.is_dir():
        raise FormatError(f"{path}: expected a directory of IDX files")
    img_path = _find(directory, TRAIN_IMAGES)
    lbl_path = _find(directory, TRAIN_LABELS)
    if img_path is None or lbl_path is None:
        raise FormatError(f"{path}: missing {TRAIN_IMAGES} / {TRAIN_LABELS}")
    train_images = _as_images(read_idx(img_path), img_path)
    train_labels = read_idx(lbl_path).astype(np.int64)

    test_img_path = _find(directory, TEST_IMAGES)
    test_lbl_path = _find(directory, TEST_LABELS)
    if test_img_path is not None and test_lbl_path is not None:
        test_images = _as_images(read_idx(test_img_path), test_img_path)
        test_labels = read_idx(test_lbl_path).astype(np.int64)
    else:
        h, w, c = train_images.shape[1:]
        test_images = np.zeros((0, h, w, c), dtype=np.uint8)
        test_labels = np.zeros(0, dtype=np.int64)

    num_classes = int(max(train_labels.max(initial=0),
                          test_labels.max(initial=0))) + 1
    names = [str(i) for i in range(num_classes)]
    return dataset_from_arrays(train_images, train_labels, test_images,
                               test_labels, names)


def _as_images(arr: np.ndarray, path) -> np.ndarray:
    if arr.dtype != np.uint8:
        raise FormatError(f"{path}: image payload must be unsigned bytes")
    if arr.ndim == 3:  # (N, H, W) grayscale
        return arr[..., None]
    if arr.ndim == 4:
        return arr
    raise FormatError(f"{path}: expected 3 or 4 dimensions, got {arr.ndim}")
