"""Class-separability metrics over flattened, [0, 1]-scaled pixels."""

import math

import numpy as np

from ..data.dataset import ImageDataset
from ..data.preprocess import preprocess
from ..errors import InputError


def _flattened_features(ds: ImageDataset):
    prepared = preprocess(ds, allow_downscale=True)
    x = prepared.train_x.reshape(prepared.train_x.shape[0], -1)
    return x, prepared.train_y


def _check_classes(features: np.ndarray, labels: np.ndarray):
    if features.shape[0] != labels.shape[0]:
        raise InputError("features and labels must align")
    classes = np.unique(labels)
    if classes.size < 2:
        raise InputError("separability metrics need at least 2 classes")
    return classes


def fdr_from_features(features: np.ndarray, labels: np.ndarray) -> float:
    """Fisher discriminant ratio: trace of the between-class scatter over the
    trace of the within-class scatter.

    Returns inf when every class is concentrated on a single point (zero
    within-class variance means perfect separability).
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    classes = _check_classes(features, labels)
    global_mean = features.mean(axis=0)
    between = 0.0
    within = 0.0
    for cls in classes:
        group = features[labels == cls]
        mean = group.mean(axis=0)
        diff = mean - global_mean
        between += group.shape[0] * float(diff @ diff)
        centered = group - mean
        within += float((centered * centered).sum())
    if within == 0.0:
        return math.inf
    return between / within


def fdr(ds: ImageDataset) -> float:
    return fdr_from_features(*_flattened_features(ds))


def in_class_std_from_features(features: np.ndarray, labels: np.ndarray) -> float:
    """Per-feature standard deviation within each class (population form),
    averaged over features, then averaged over classes."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    classes = _check_classes(features, labels)
    per_class = []
    for cls in classes:
        group = features[labels == cls]
        if group.shape[0] == 0:
            raise InputError(f"class {cls} is empty")
        per_class.append(float(group.std(axis=0, ddof=0).mean()))
    return float(np.mean(per_class))


def in_class_std(ds: ImageDataset) -> float:
    return in_class_std_from_features(*_flattened_features(ds))
