from .container import (load_dataset, load_params, read_container,
                        save_dataset, save_params, write_container)
from .dataset import ImageDataset, dataset_from_arrays
from .idx import load_idx, read_idx
from .imagedir import load_image_dir
from .modify import (clipped_normal_factors, imbalance_linear,
                     imbalance_normal, linear_imbalance_sizes,
                     reduce_class_count, reduce_class_size, to_grayscale)
from .preprocess import PreparedData, preprocess
from .synth import SynthSpec, synth_generate

__all__ = [
    "ImageDataset",
    "dataset_from_arrays",
    "read_idx",
    "load_idx",
    "load_image_dir",
    "SynthSpec",
    "synth_generate",
    "PreparedData",
    "preprocess",
    "to_grayscale",
    "reduce_class_size",
    "reduce_class_count",
    "imbalance_linear",
    "imbalance_normal",
    "linear_imbalance_sizes",
    "clipped_normal_factors",
    "save_dataset",
    "load_dataset",
    "save_params",
    "load_params",
    "read_container",
    "write_container",
]
