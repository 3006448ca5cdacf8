"""Structural dataset modifications: class-size reduction, class-count
reduction, and the two imbalance modes, plus grayscale conversion.

The removal-based operators only ever touch the train split; the single
exception is class-count reduction, which must drop the removed classes from
the test split as well so evaluation stays well-posed. All operators are
deterministic given (dataset, parameters, seed): randomness comes from a
substream derived from the seed plus the operator's name and parameters.
"""

import warnings

import numpy as np

from ..errors import InputError
from ..rng import DEFAULT_SEED, derive_rng
from .dataset import ImageDataset, dataset_from_arrays

GRAY_WEIGHTS = (0.299, 0.587, 0.114)
NORMAL_FACTOR_BOUNDS = (0.05, 1.0)


def _round_half_up(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def to_grayscale(ds: ImageDataset) -> ImageDataset:
    """Weighted-luminance conversion of both splits to a single channel.

    Unlike the removal operators this produces a dataset *variant*, so the
    test split is converted too; otherwise train and test would live in
    different colour spaces.
    """
    if ds.image_shape[2] == 1:
        warnings.warn("dataset is already grayscale; returning it unchanged")
        return ds
    if ds.image_shape[2] != 3:
        raise InputError("grayscale conversion expects 3-channel images")

    def convert(images):
        if images.shape[0] == 0:
            return images[..., :1]
        luma = np.tensordot(images.astype(np.float64), GRAY_WEIGHTS, axes=([3], [0]))
        return _round_half_up(luma).astype(np.uint8)[..., None]

    return dataset_from_arrays(convert(ds.train_images), ds.train_labels,
                               convert(ds.test_images), ds.test_labels,
                               ds.class_names)


def _keep_per_class(labels: np.ndarray, targets: dict, rng) -> np.ndarray:
    """Sorted union of per-class index subsets of the requested sizes."""
    keep = []
    for label, target in targets.items():
        idx = np.flatnonzero(labels == label)
        if target == idx.size:
            keep.append(idx)
        else:
            keep.append(rng.choice(idx, size=target, replace=False))
    return np.sort(np.concatenate(keep))


def reduce_class_size(ds: ImageDataset, per_class: int,
                      seed: int = DEFAULT_SEED) -> ImageDataset:
    """Randomly remove train samples until every class holds exactly
    `per_class`, yielding perfect balance."""
    if per_class < 1:
        raise InputError("per_class must be >= 1")
    hist = ds.class_histogram("train")
    for label, count in enumerate(hist):
        if count < per_class:
            raise InputError(
                f"class {ds.class_names[label]!r} has only {count} train "
                f"samples, fewer than the requested {per_class}")
    rng = derive_rng(seed, "reduce_class_size", per_class=per_class)
    keep = _keep_per_class(ds.train_labels,
                           {label: per_class for label in range(ds.num_classes)},
                           rng)
    return dataset_from_arrays(ds.train_images[keep], ds.train_labels[keep],
                               ds.test_images, ds.test_labels, ds.class_names)


def reduce_class_count(ds: ImageDataset, keep_classes: int) -> ImageDataset:
    """Keep only the first `keep_classes` labels of the alphanumerically
    ordered class-name list; both splits are filtered and labels re-indexed
    densely in their original id order."""
    if keep_classes < 3 or keep_classes > ds.num_classes:
        raise InputError(
            f"keep_classes must lie in [3, {ds.num_classes}], got {keep_classes}")
    kept_names = set(sorted(ds.class_names)[:keep_classes])
    kept_ids = [i for i, name in enumerate(ds.class_names) if name in kept_names]
    remap = {old: new for new, old in enumerate(kept_ids)}

    def filter_split(images, labels):
        mask = np.isin(labels, kept_ids)
        new_labels = np.array([remap[l] for l in labels[mask]], dtype=np.int64)
        return images[mask], new_labels

    train_images, train_labels = filter_split(ds.train_images, ds.train_labels)
    test_images, test_labels = filter_split(ds.test_images, ds.test_labels)
    return dataset_from_arrays(train_images, train_labels, test_images,
                               test_labels, [ds.class_names[i] for i in kept_ids])


def _require_balanced(ds: ImageDataset) -> int:
    hist = ds.class_histogram("train")
    if ds.num_classes < 2:
        raise InputError("imbalance is undefined for a single class")
    sizes = set(hist.tolist())
    if len(sizes) != 1:
        raise InputError(
            "imbalance operators expect balanced classes; run the class-size "
            f"reduction first (current sizes {hist.tolist()})")
    return int(hist[0])


def linear_imbalance_sizes(base_size: int, num_classes: int, factor: float) -> np.ndarray:
    """Target sizes for the linear mode: the smallest class shrinks to
    (1-factor) * base, the largest keeps base, intermediate classes step up
    with equal intervals. Rounding collisions are resolved downward so all
    sizes stay distinct for factor > 0."""
    if not 0.0 <= factor <= 1.0:
        raise InputError("imbalance factor must lie in [0, 1]")
    if num_classes < 2:
        raise InputError("imbalance is undefined for a single class")
    k = np.arange(num_classes, dtype=np.float64)
    raw = base_size * (1.0 - factor) + k * (base_size * factor) / (num_classes - 1)
    sizes = _round_half_up(raw)
    if factor > 0.0:
        for pos in range(num_classes - 2, -1, -1):
            if sizes[pos] >= sizes[pos + 1]:
                sizes[pos] = sizes[pos + 1] - 1
    if np.any(sizes < 1):
        raise InputError("imbalance factor leaves a class empty")
    return sizes


def imbalance_linear(ds: ImageDataset, factor: float,
                     seed: int = DEFAULT_SEED) -> ImageDataset:
    """Linearly ascending class sizes; classes ordered by (size, label)."""
    base = _require_balanced(ds)
    sizes = linear_imbalance_sizes(base, ds.num_classes, factor)
    if factor == 0.0:
        return ds
    rng = derive_rng(seed, "imbalance_linear", factor=factor)
    # balanced input: the size sort is a tie, so class id order decides
    targets = {label: int(sizes[label]) for label in range(ds.num_classes)}
    keep = _keep_per_class(ds.train_labels, targets, rng)
    return dataset_from_arrays(ds.train_images[keep], ds.train_labels[keep],
                               ds.test_images, ds.test_labels, ds.class_names)


def clipped_normal_factors(factor: float, count: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Per-class retention factors for the normal mode: draws from
    Normal(1-factor, factor^2) clipped into [0.05, 1.0]."""
    if not 0.0 <= factor <= 1.0:
        raise InputError("imbalance factor must lie in [0, 1]")
    draws = rng.normal(1.0 - factor, factor, size=count)
    lo, hi = NORMAL_FACTOR_BOUNDS
    return np.clip(draws, lo, hi)


def imbalance_normal(ds: ImageDataset, factor: float,
                     seed: int = DEFAULT_SEED) -> ImageDataset:
    """Each class keeps a random clipped-normal fraction of its samples."""
    base = _require_balanced(ds)
    rng = derive_rng(seed, "imbalance_normal", factor=factor)
    factors = clipped_normal_factors(factor, ds.num_classes, rng)
    sizes = np.maximum(_round_half_up(factors * base), 1)
    targets = {label: int(sizes[label]) for label in range(ds.num_classes)}
    if all(t == base for t in targets.values()):
        return ds
    keep = _keep_per_class(ds.train_labels, targets, rng)
    return dataset_from_arrays(ds.train_images[keep], ds.train_labels[keep],
                               ds.test_images, ds.test_labels, ds.class_names)
