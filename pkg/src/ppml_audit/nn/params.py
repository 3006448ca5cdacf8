"""Model parameters as an ordered name -> array mapping, plus tree helpers."""

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .config import ModelConfig


@dataclass
class ModelParams:
    """Learnable parameters in forward order, keyed by layer name."""

    config: ModelConfig
    arrays: dict

    def copy(self) -> "ModelParams":
        return ModelParams(self.config, {k: v.copy() for k, v in self.arrays.items()})

    @property
    def num_coordinates(self) -> int:
        return sum(v.size for v in self.arrays.values())


def init_params(config: ModelConfig, seed: int) -> ModelParams:
    """He-style uniform fan-in init for weights, zeros for biases.

    Group-norm scales start at 1 and shifts at 0. Bit-identical for identical
    (config, seed).
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    k = config.kernel_size
    h, w, in_ch = config.input_shape
    c1, c2, c3 = config.conv_channels

    def uniform(shape, fan_in):
        bound = np.sqrt(6.0 / fan_in)
        return rng.uniform(-bound, bound, size=shape)

    arrays = {}
    prev = in_ch
    for i, ch in enumerate((c1, c2, c3), start=1):
        arrays[f"conv{i}_w"] = uniform((k, k, prev, ch), fan_in=k * k * prev)
        arrays[f"conv{i}_b"] = np.zeros(ch)
        arrays[f"gn{i}_gamma"] = np.ones(ch)
        arrays[f"gn{i}_beta"] = np.zeros(ch)
        prev = ch
    flat = config.flattened_units
    arrays["fc1_w"] = uniform((flat, config.hidden_units), fan_in=flat)
    arrays["fc1_b"] = np.zeros(config.hidden_units)
    arrays["out_w"] = uniform((config.hidden_units, config.num_classes),
                              fan_in=config.hidden_units)
    arrays["out_b"] = np.zeros(config.num_classes)
    return ModelParams(config, arrays)


def map_arrays(fn, *trees: dict) -> dict:
    """Apply fn leaf-wise over dicts sharing the same keys."""
    first = trees[0]
    return {k: fn(*(t[k] for t in trees)) for k in first}


def zeros_like_tree(tree: dict) -> dict:
    return {k: np.zeros_like(v) for k, v in tree.items()}


def flatten_tree(tree: dict) -> np.ndarray:
    return np.concatenate([v.ravel() for v in tree.values()])


def tree_l2_norm(tree: dict) -> float:
    return float(np.sqrt(sum(float(np.sum(v * v)) for v in tree.values())))


def get_flat_coordinate(tree: dict, index: int):
    """Locate flat coordinate `index` as (key, unraveled index)."""
    if index < 0:
        raise InputError(f"parameter index {index} out of range")
    offset = index
    for key, arr in tree.items():
        if offset < arr.size:
            return key, np.unravel_index(offset, arr.shape)
        offset -= arr.size
    raise InputError(f"parameter index {index} out of range")
