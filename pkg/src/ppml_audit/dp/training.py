"""Training loop for private (DP-Adam) and non-private (Adam) models.

Both paths share one gradient pipeline: per-example gradients are aggregated
by :func:`ppml_audit.dp.clipping.noisy_aggregate`, with clipping and noise
simply disabled on the non-private path. That makes the degenerate private
configuration (infinite clip norm, zero noise) bit-identical to non-private
training on the same seed.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..data.preprocess import PreparedData
from ..errors import InputError
from ..nn.config import ModelConfig
from ..nn.network import apply_random_flip, forward, loss_and_per_example_gradients
from ..nn.params import ModelParams, init_params
from ..rng import derive_rng
from .accountant import calibrate_sigma, compute_epsilon
from .adam import adam_step, init_adam
from .clipping import noisy_aggregate

NON_PRIVATE = math.inf


@dataclass(frozen=True)
class PrivacyBudget:
    """(epsilon, delta) target; epsilon = inf means non-private training."""

    epsilon: float
    delta: float = 1e-5

    def __post_init__(self):
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive (or inf for non-private)")
        if not 0.0 < self.delta < 1.0:
            raise InputError("delta must lie in (0, 1)")

    @property
    def is_private(self) -> bool:
        return math.isfinite(self.epsilon)

    def label(self) -> str:
        if not self.is_private:
            return "inf"
        return f"{self.epsilon:g}"


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.005
    batch_size: int = 256
    epochs: int = 30
    clip_norm: float = 1.0
    noise_multiplier: float | None = None  # None: calibrate from the budget
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    record_history: bool = True  # per-epoch loss/accuracy tracking

    def __post_init__(self):
        if self.epochs < 1:
            raise InputError("epochs must be >= 1")
        if self.batch_size < 1:
            raise InputError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise InputError("learning_rate must be positive")
        if self.clip_norm <= 0:
            raise InputError("clip_norm must be positive")
        if self.noise_multiplier is not None and self.noise_multiplier < 0:
            raise InputError("noise_multiplier must be >= 0")


@dataclass
class TrainHistory:
    train_loss: list = field(default_factory=list)
    train_accuracy: list = field(default_factory=list)
    test_accuracy: list = field(default_factory=list)
    noise_multiplier: float | None = None
    epsilon_spent: float | None = None

    @property
    def final_gap(self) -> float:
        return self.train_accuracy[-1] - self.test_accuracy[-1]

    def to_dict(self) -> dict:
        return {
            "train_loss": list(self.train_loss),
            "train_accuracy": list(self.train_accuracy),
            "test_accuracy": list(self.test_accuracy),
            "noise_multiplier": self.noise_multiplier,
            "epsilon_spent": self.epsilon_spent,
        }


def predict_probabilities(params: ModelParams, x: np.ndarray,
                          batch_size: int = 512) -> np.ndarray:
    """Evaluation-mode class probabilities, batched."""
    outputs = []
    for start in range(0, x.shape[0], batch_size):
        probs, _ = forward(params, x[start:start + batch_size])
        outputs.append(probs)
    if not outputs:
        return np.zeros((0, params.config.num_classes))
    return np.concatenate(outputs)


def _accuracy(params: ModelParams, x: np.ndarray, y: np.ndarray) -> float:
    if x.shape[0] == 0:
        return 0.0
    preds = predict_probabilities(params, x).argmax(axis=1)
    return float(np.mean(preds == y))


def resolve_noise_multiplier(config: TrainConfig, budget: PrivacyBudget,
                             dataset_size: int) -> float:
    """Noise multiplier for the run: explicit if configured, otherwise
    calibrated so the accounted epsilon meets the budget."""
    if config.noise_multiplier is not None:
        return config.noise_multiplier
    batch = min(config.batch_size, dataset_size)
    q = batch / dataset_size
    steps = math.ceil(dataset_size / batch) * config.epochs
    return calibrate_sigma(budget.epsilon, budget.delta, q, steps)


def train(data: PreparedData, model_config: ModelConfig, train_config: TrainConfig,
          budget: PrivacyBudget, seed: int, grad_norm_observer=None):
    """Train a classifier on the prepared train split.

    Private budgets run clip -> noise -> Adam per batch; the non-private
    budget runs plain Adam on the mean per-example gradient. Deterministic
    given (data, configs, budget, seed). Returns (params, history).
    """
    n = data.train_x.shape[0]
    if n == 0:
        raise InputError("cannot train on an empty dataset")
    if data.num_classes != model_config.num_classes:
        raise InputError(
            f"model expects {model_config.num_classes} classes but the dataset "
            f"has {data.num_classes}")

    batch = min(train_config.batch_size, n)
    steps_per_epoch = math.ceil(n / batch)
    clip = None
    sigma = 0.0
    history = TrainHistory()
    if budget.is_private:
        clip = train_config.clip_norm
        sigma = resolve_noise_multiplier(train_config, budget, n)
        history.noise_multiplier = sigma
        if sigma > 0:
            history.epsilon_spent = compute_epsilon(
                batch / n, sigma, steps_per_epoch * train_config.epochs,
                budget.delta)

    params = init_params(model_config, seed)
    opt = init_adam(params)
    shuffle_rng = derive_rng(seed, "train/shuffle")
    flip_rng = derive_rng(seed, "train/flip")
    noise_rng = derive_rng(seed, "train/noise")

    for _ in range(train_config.epochs):
        order = shuffle_rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            xb = apply_random_flip(data.train_x[idx], flip_rng)
            losses, per_grads = loss_and_per_example_gradients(
                params, xb, data.train_y[idx])
            grad = noisy_aggregate(per_grads, clip, sigma, noise_rng,
                                   norm_observer=grad_norm_observer)
            opt, params = adam_step(opt, params, grad,
                                    train_config.learning_rate,
                                    train_config.beta1, train_config.beta2,
                                    train_config.adam_eps)
            epoch_losses.append(float(losses.mean()))
        if train_config.record_history:
            history.train_loss.append(float(np.mean(epoch_losses)))
            history.train_accuracy.append(_accuracy(params, data.train_x, data.train_y))
            history.test_accuracy.append(_accuracy(params, data.test_x, data.test_y))
    return params, history
