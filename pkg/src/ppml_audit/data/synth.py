"""Synthetic class-conditional blob datasets for desk-scale experiments.

Each class owns a blob position on a ring plus a colour tint; samples add
per-image position jitter and pixel noise. Low noise gives an easily
separable task, high noise forces models to memorize individual samples,
which is the regime where membership leakage shows up.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import InputError
from ..rng import derive_rng
from .dataset import ImageDataset, dataset_from_arrays


@dataclass(frozen=True)
class SynthSpec:
    num_classes: int = 4
    train_per_class: int = 100
    test_per_class: int = 25
    height: int = 32
    width: int = 32
    channels: int = 3
    blob_radius: float = 5.0
    ring_radius: float = 9.0
    center_jitter: float = 2.0
    noise_std: float = 32.0
    brightness: float = 170.0

    def __post_init__(self):
        if self.num_classes < 2:
            raise InputError("synthetic datasets need at least 2 classes")
        if self.train_per_class < 1 or self.test_per_class < 0:
            raise InputError("per-class sample counts must be positive")
        if self.channels not in (1, 3):
            raise InputError("channels must be 1 or 3")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SynthSpec":
        return cls(**d)


def _class_geometry(spec: SynthSpec, label: int):
    angle = 2.0 * math.pi * label / spec.num_classes
    cx = spec.width / 2.0 + spec.ring_radius * math.cos(angle)
    cy = spec.height / 2.0 + spec.ring_radius * math.sin(angle)
    if spec.channels == 1:
        tint = np.ones(1)
    else:
        tint = 0.7 + 0.3 * np.cos(angle + 2.0 * math.pi * np.arange(3) / 3.0)
    return cx, cy, tint


def _render(spec: SynthSpec, label: int, rng: np.random.Generator) -> np.ndarray:
    cx, cy, tint = _class_geometry(spec, label)
    jx, jy = rng.normal(0.0, spec.center_jitter, size=2)
    ys = np.arange(spec.height)[:, None]
    xs = np.arange(spec.width)[None, :]
    dist_sq = (xs - cx - jx) ** 2 + (ys - cy - jy) ** 2
    blob = spec.brightness * np.exp(-dist_sq / (2.0 * spec.blob_radius ** 2))
    img = blob[..., None] * tint
    img = img + rng.normal(0.0, spec.noise_std, size=img.shape)
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def synth_generate(spec: SynthSpec, seed: int) -> ImageDataset:
    """Deterministic for identical (spec, seed)."""
    rng = derive_rng(seed, "synth_generate", **spec.to_dict())
    splits = {}
    for split, per_class in (("train", spec.train_per_class),
                             ("test", spec.test_per_class)):
        images, labels = [], []
        for label in range(spec.num_classes):
            for _ in range(per_class):
                images.append(_render(spec, label, rng))
                labels.append(label)
        if images:
            splits[split] = (np.stack(images), np.asarray(labels, dtype=np.int64))
        else:
            shape = (0, spec.height, spec.width, spec.channels)
            splits[split] = (np.zeros(shape, dtype=np.uint8),
                             np.zeros(0, dtype=np.int64))
    names = [f"class_{i:02d}" for i in range(spec.num_classes)]
    return dataset_from_arrays(*splits["train"], *splits["test"], names)
