"""Model-ready tensors: resize to 32x32, scale to [0, 1], replicate
grayscale to three channels."""

from dataclasses import dataclass

import numpy as np
from PIL import Image

from ..errors import InputError
from .dataset import ImageDataset

TARGET_SIZE = 32


@dataclass(frozen=True)
class PreparedData:
    """float64 images (N, 32, 32, 3) in [0, 1] plus labels, per split."""

    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray
    class_names: tuple

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def subset(self, mask: np.ndarray) -> "PreparedData":
        """New view keeping only the masked train samples (test unchanged)."""
        return PreparedData(self.train_x[mask], self.train_y[mask],
                            self.test_x, self.test_y, self.class_names)


def _resize_split(images: np.ndarray, allow_downscale: bool) -> np.ndarray:
    n, h, w, c = images.shape
    if (h, w) == (TARGET_SIZE, TARGET_SIZE):
        resized = images
    else:
        if (h > TARGET_SIZE or w > TARGET_SIZE) and not allow_downscale:
            raise InputError(
                f"images are {h}x{w}; pass allow_downscale=True to shrink "
                f"them to {TARGET_SIZE}x{TARGET_SIZE}")
        # bilinear when growing, area averaging when shrinking
        method = Image.BILINEAR if max(h, w) < TARGET_SIZE else Image.BOX
        out = np.empty((n, TARGET_SIZE, TARGET_SIZE, c), dtype=np.uint8)
        for i in range(n):
            frame = images[i, :, :, 0] if c == 1 else images[i]
            img = Image.fromarray(frame).resize((TARGET_SIZE, TARGET_SIZE), method)
            arr = np.asarray(img, dtype=np.uint8)
            out[i] = arr[..., None] if c == 1 else arr
        resized = out
    if c == 1:
        resized = np.repeat(resized, 3, axis=3)
    elif c != 3:
        raise InputError(f"expected 1 or 3 channels, got {c}")
    return resized.astype(np.float64) / 255.0


def preprocess(ds: ImageDataset, allow_downscale: bool = False) -> PreparedData:
    n_test = ds.test_images.shape[0]
    train_x = _resize_split(ds.train_images, allow_downscale)
    if n_test:
        test_x = _resize_split(ds.test_images, allow_downscale)
    else:
        test_x = np.zeros((0, TARGET_SIZE, TARGET_SIZE, 3))
    return PreparedData(train_x, ds.train_labels.copy(), test_x,
                        ds.test_labels.copy(), ds.class_names)
