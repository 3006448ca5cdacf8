"""Labeled 8-bit image collections with fixed train/test splits."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError


@dataclass(frozen=True)
class ImageDataset:
    """Images are (N, H, W, C) uint8; labels are dense integer class ids
    indexing `class_names`. Instances are immutable: modification operators
    return new datasets and never touch the originals."""

    train_images: np.ndarray
    train_labels: np.ndarray
    test_images: np.ndarray
    test_labels: np.ndarray
    class_names: tuple

    def __post_init__(self):
        for name, images, labels in (("train", self.train_images, self.train_labels),
                                     ("test", self.test_images, self.test_labels)):
            if images.dtype != np.uint8:
                raise InputError(f"{name} images must be uint8")
            if images.ndim != 4:
                raise InputError(f"{name} images must be (N, H, W, C)")
            if labels.shape != (images.shape[0],):
                raise InputError(f"{name} labels must be one id per image")
            if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_names)):
                raise InputError(f"{name} labels exceed the class-name table")
        if self.train_images.shape[0] == 0:
            raise InputError("train split must be non-empty")

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    @property
    def image_shape(self) -> tuple:
        return tuple(self.train_images.shape[1:])

    def class_histogram(self, split: str = "train") -> np.ndarray:
        """Per-class sample counts; always sums to the split size."""
        labels = self.train_labels if split == "train" else self.test_labels
        return np.bincount(labels, minlength=self.num_classes)


def dataset_from_arrays(train_images, train_labels, test_images, test_labels,
                        class_names) -> ImageDataset:
    return ImageDataset(
        train_images=np.ascontiguousarray(train_images, dtype=np.uint8),
        train_labels=np.asarray(train_labels, dtype=np.int64),
        test_images=np.ascontiguousarray(test_images, dtype=np.uint8),
        test_labels=np.asarray(test_labels, dtype=np.int64),
        class_names=tuple(str(c) for c in class_names),
    )
