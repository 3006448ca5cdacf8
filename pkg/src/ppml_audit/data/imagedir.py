"""Directory-of-images ingestion: one subdirectory per class."""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import FormatError
from .dataset import ImageDataset, dataset_from_arrays

_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp"}


def _read_split(split_dir: Path, class_names: list):
    images, labels = [], []
    for label, name in enumerate(class_names):
        class_dir = split_dir / name
        if not class_dir.is_dir():
            continue
        for file in sorted(class_dir.iterdir()):
            if file.suffix.lower() not in _EXTENSIONS:
                continue
            try:
                with Image.open(file) as img:
                    arr = np.asarray(img.convert(img.mode if img.mode in ("L", "RGB") else "RGB"))
            except (UnidentifiedImageError, OSError) as exc:
                raise FormatError(f"{file}: unreadable image: {exc}") from exc
            if arr.ndim == 2:
                arr = arr[..., None]
            images.append(arr.astype(np.uint8))
            labels.append(label)
    return images, labels


def load_image_dir(path) -> ImageDataset:
    """Labels are assigned by lexicographically sorted class-directory name.

    Layout is either ``root/<class>/*.png`` (everything becomes the train
    split) or ``root/{train,test}/<class>/*.png``.
    """
    root = Path(path)
    if not root.is_dir():
        raise FormatError(f"{path}: expected a directory")
    if (root / "train").is_dir():
        train_dir = root / "train"
        test_dir = root / "test" if (root / "test").is_dir() else None
    else:
        train_dir, test_dir = root, None

    class_names = sorted(d.name for d in train_dir.iterdir() if d.is_dir())
    if not class_names:
        raise FormatError(f"{path}: no class subdirectories found")

    train_images, train_labels = _read_split(train_dir, class_names)
    if not train_images:
        raise FormatError(f"{path}: no images found")
    shapes = {img.shape for img in train_images}
    if len(shapes) != 1:
        raise FormatError(f"{path}: images disagree on shape: {sorted(shapes)}")

    if test_dir is not None:
        test_images, test_labels = _read_split(test_dir, class_names)
        if test_images and {i.shape for i in test_images} != shapes:
            raise FormatError(f"{path}: test images disagree with train shape")
    else:
        test_images, test_labels = [], []

    shape = next(iter(shapes))
    stack = lambda lst: (np.stack(lst) if lst
                         else np.zeros((0,) + shape, dtype=np.uint8))
    return dataset_from_arrays(stack(train_images), np.asarray(train_labels, dtype=np.int64),
                               stack(test_images), np.asarray(test_labels, dtype=np.int64),
                               class_names)
