"""Finite-difference oracle for gradient verification."""

import numpy as np

from ..errors import InputError
from .network import example_loss
from .params import ModelParams, get_flat_coordinate


def central_difference(fn, x: float, h: float) -> float:
    """(f(x+h) - f(x-h)) / (2h)."""
    if h <= 0:
        raise InputError("step size h must be positive")
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def finite_difference_gradient(params: ModelParams, example: np.ndarray,
                               label: int, param_index: int, h: float = 1e-4) -> float:
    """Central finite difference of the single-example loss along one
    parameter coordinate (flat index across all parameters in forward order).
    """
    if h <= 0:
        raise InputError("step size h must be positive")
    key, sub = get_flat_coordinate(params.arrays, param_index)

    def loss_at(value):
        perturbed = params.copy()
        perturbed.arrays[key][sub] = value
        return example_loss(perturbed, example, label)

    origin = float(params.arrays[key][sub])
    return central_difference(loss_at, origin, h)
