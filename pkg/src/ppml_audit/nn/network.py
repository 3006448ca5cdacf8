"""Forward/backward passes for the full classifier."""

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, NumericError, ShapeError
from . import functional as F
from .params import ModelParams


@dataclass
class ForwardCache:
    """Intermediate activations retained between a forward pass and its
    matching backward pass."""

    batch: np.ndarray
    layer_caches: list


def apply_random_flip(batch: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Mirror each image horizontally with probability 0.5."""
    flip = rng.random(batch.shape[0]) < 0.5
    out = batch.copy()
    out[flip] = out[flip, :, ::-1, :]
    return out


def _check_batch(params: ModelParams, batch: np.ndarray):
    cfg = params.config
    expected = (batch.shape[0],) + tuple(cfg.input_shape)
    if batch.ndim != 4 or batch.shape != expected:
        raise ShapeError(
            f"batch shape {batch.shape} does not match (B, {cfg.input_shape[0]}, "
            f"{cfg.input_shape[1]}, {cfg.input_shape[2]})"
        )


def forward(params: ModelParams, batch: np.ndarray, train_mode: bool = False,
            rng: np.random.Generator | None = None):
    """Class probabilities for a batch.

    In train mode the random-flip layer consumes `rng`; evaluation is fully
    deterministic. Returns (probabilities, cache).
    """
    _check_batch(params, batch)
    if train_mode:
        if rng is None:
            raise InputError("train_mode forward requires an rng for the flip layer")
        batch = apply_random_flip(batch, rng)

    a = params.arrays
    caches = []
    x = batch
    for i in (1, 2, 3):
        conv_in_shape = x.shape
        x, col = F.conv2d_forward(x, a[f"conv{i}_w"], a[f"conv{i}_b"])
        x, gn_cache = F.groupnorm_forward(x, a[f"gn{i}_gamma"], a[f"gn{i}_beta"],
                                          params.config.groupnorm_groups)
        x, relu_mask = F.relu_forward(x)
        x, pool_cache = F.maxpool2_forward(x)
        caches.append((conv_in_shape, col, gn_cache, relu_mask, pool_cache, x.shape))
    flat = x.reshape(x.shape[0], -1)
    hidden, fc1_in = F.dense_forward(flat, a["fc1_w"], a["fc1_b"])
    hidden, fc1_mask = F.relu_forward(hidden)
    logits, out_in = F.dense_forward(hidden, a["out_w"], a["out_b"])
    probs = F.softmax(logits)
    if not np.all(np.isfinite(probs)):
        raise NumericError("forward pass produced non-finite probabilities")
    caches.append((flat.shape, fc1_in, fc1_mask, out_in))
    return probs, ForwardCache(batch=batch, layer_caches=caches)


def _backward_per_example(params: ModelParams, cache: ForwardCache,
                          dlogits: np.ndarray) -> dict:
    """Backpropagate per-example logit gradients into per-example parameter
    gradients (leading batch axis on every array)."""
    a = params.arrays
    grads = {}
    flat_shape, fc1_in, fc1_mask, out_in = cache.layer_caches[-1]

    dhidden, grads["out_w"], grads["out_b"] = F.dense_backward(dlogits, out_in, a["out_w"])
    dhidden = F.relu_backward(dhidden, fc1_mask)
    dflat, grads["fc1_w"], grads["fc1_b"] = F.dense_backward(dhidden, fc1_in, a["fc1_w"])

    dx = None
    for i in (3, 2, 1):
        (conv_in_shape, col, gn_cache, relu_mask, pool_cache,
         pooled_shape) = cache.layer_caches[i - 1]
        if i == 3:
            dpool = dflat.reshape(pooled_shape)
        else:
            dpool = dx
        dgn = F.maxpool2_backward(dpool, pool_cache)
        dgn = F.relu_backward(dgn, relu_mask)
        dconv, grads[f"gn{i}_gamma"], grads[f"gn{i}_beta"] = F.groupnorm_backward(dgn, gn_cache)
        dx, grads[f"conv{i}_w"], grads[f"conv{i}_b"] = F.conv2d_backward(
            dconv, col, a[f"conv{i}_w"], conv_in_shape, need_dx=(i > 1))

    # preserve the forward parameter order
    return {k: grads[k] for k in a}


def example_loss(params: ModelParams, example: np.ndarray, label: int) -> float:
    """Cross-entropy loss of a single example, evaluation mode."""
    probs, _ = forward(params, example[None])
    losses, _ = F.cross_entropy_per_example(probs, np.array([label]))
    return float(losses[0])


def loss_and_per_example_gradients(params: ModelParams, batch: np.ndarray,
                                   labels: np.ndarray, train_mode: bool = False,
                                   rng: np.random.Generator | None = None):
    """Softmax cross-entropy per example plus the gradient of each example's
    own loss with respect to every parameter.

    Returns (losses, grads) where losses has shape (B,) and grads maps each
    parameter name to an array with a leading batch axis. The mean over the
    batch axis equals the gradient of the mean loss.
    """
    labels = np.asarray(labels)
    num_classes = params.config.num_classes
    if labels.ndim != 1 or labels.shape[0] != batch.shape[0]:
        raise ShapeError("labels must be one id per batch example")
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise InputError(f"labels must lie in [0, {num_classes})")
    probs, cache = forward(params, batch, train_mode=train_mode, rng=rng)
    losses, dlogits = F.cross_entropy_per_example(probs, labels)
    grads = _backward_per_example(params, cache, dlogits)
    return losses, grads
