"""Privacy auditing toolkit for image classification datasets.

Quantifies a dataset's privacy-relevant characteristics, applies controlled
structural modifications, trains DP and non-private CNN models, attacks them
with an offline likelihood-ratio membership test, and reports utility and
vulnerability.
"""

__version__ = "0.1.0"

from .data import (ImageDataset, PreparedData, SynthSpec, load_dataset,
                   load_idx, load_image_dir, preprocess, save_dataset,
                   synth_generate)
from .dp import PrivacyBudget, TrainConfig, calibrate_sigma, train
from .nn import ModelConfig, ModelParams, init_params

__all__ = [
    "__version__",
    "ImageDataset",
    "SynthSpec",
    "synth_generate",
    "load_idx",
    "load_image_dir",
    "load_dataset",
    "save_dataset",
    "preprocess",
    "PreparedData",
    "ModelConfig",
    "ModelParams",
    "init_params",
    "PrivacyBudget",
    "TrainConfig",
    "train",
    "calibrate_sigma",
]
