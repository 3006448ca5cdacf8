"""Adam optimizer with bias correction.

The DP variant differs only in the gradient that is fed in (clipped and
noised), so a single update rule serves both paths.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError
from ..nn.params import ModelParams, zeros_like_tree


@dataclass
class AdamState:
    step: int
    m: dict
    v: dict


def init_adam(params: ModelParams) -> AdamState:
    return AdamState(step=0, m=zeros_like_tree(params.arrays),
                     v=zeros_like_tree(params.arrays))


def adam_step(state: AdamState, params: ModelParams, grad: dict,
              learning_rate: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8):
    """One bias-corrected Adam update. Returns (new_state, new_params)."""
    for key, arr in params.arrays.items():
        if key not in grad or grad[key].shape != arr.shape:
            raise ShapeError(f"gradient shape mismatch for {key}")
    t = state.step + 1
    new_m, new_v, new_arrays = {}, {}, {}
    for key, p in params.arrays.items():
        g = grad[key]
        m = beta1 * state.m[key] + (1.0 - beta1) * g
        v = beta2 * state.v[key] + (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1 ** t)
        v_hat = v / (1.0 - beta2 ** t)
        new_arrays[key] = p - learning_rate * m_hat / (np.sqrt(v_hat) + eps)
        new_m[key] = m
        new_v[key] = v
    return AdamState(t, new_m, new_v), ModelParams(params.config, new_arrays)
