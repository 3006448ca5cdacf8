"""Per-example gradient clipping and noisy aggregation."""

import math

import numpy as np

from ..errors import InputError, NumericError
from ..nn.params import map_arrays, tree_l2_norm


def _check_finite(tree: dict, what: str):
    for key, arr in tree.items():
        if not np.all(np.isfinite(arr)):
            raise NumericError(f"non-finite values in {what} ({key})")


def clip_gradient(grad: dict, clip_norm: float) -> dict:
    """Scale a gradient-set so its global L2 norm is at most `clip_norm`.

    Direction is preserved; gradients already inside the ball pass through
    unchanged.
    """
    if clip_norm <= 0:
        raise InputError("clip_norm must be positive")
    _check_finite(grad, "gradient")
    norm = tree_l2_norm(grad)
    if norm <= clip_norm:
        return {k: v.copy() for k, v in grad.items()}
    factor = clip_norm / norm
    return {k: v * factor for k, v in grad.items()}


def per_example_norms(per_grads: dict) -> np.ndarray:
    """Global L2 norm of each example's gradient-set (leading batch axis)."""
    sq = None
    for arr in per_grads.values():
        s = (arr * arr).reshape(arr.shape[0], -1).sum(axis=1)
        sq = s if sq is None else sq + s
    return np.sqrt(sq)


def noisy_aggregate(per_grads: dict, clip_norm: float | None, noise_multiplier: float,
                    rng: np.random.Generator | None = None,
                    norm_observer=None) -> dict:
    """DP gradient estimate: clip each example's gradient-set to `clip_norm`,
    sum, add N(0, (noise_multiplier * clip_norm)^2) per coordinate, divide by
    the batch size.

    With noise_multiplier 0 this is the plain average of clipped gradients;
    with clip_norm None clipping is skipped entirely (non-private path).
    """
    if not per_grads:
        raise InputError("empty gradient tree")
    batch = next(iter(per_grads.values())).shape[0]
    if batch == 0:
        raise InputError("cannot aggregate an empty batch")
    _check_finite(per_grads, "per-example gradients")
    if noise_multiplier < 0:
        raise InputError("noise_multiplier must be >= 0")

    if clip_norm is not None:
        if clip_norm <= 0:
            raise InputError("clip_norm must be positive")
        norms = per_example_norms(per_grads)
        factors = np.minimum(1.0, clip_norm / np.maximum(norms, 1e-300))
        clipped = {k: v * factors.reshape((batch,) + (1,) * (v.ndim - 1))
                   for k, v in per_grads.items()}
        if norm_observer is not None:
            norm_observer(norms * factors)
    else:
        clipped = per_grads

    total = {k: v.sum(axis=0) for k, v in clipped.items()}
    if noise_multiplier > 0:
        if clip_norm is None or not math.isfinite(clip_norm):
            raise NumericError("noise requires a finite clip_norm")
        if rng is None:
            raise InputError("noise requires an rng")
        scale = noise_multiplier * clip_norm
        total = {k: v + rng.normal(0.0, scale, size=v.shape)
                 for k, v in total.items()}
    return map_arrays(lambda v: v / batch, total)
