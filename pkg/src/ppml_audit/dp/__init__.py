from .accountant import (DEFAULT_ORDERS, calibrate_sigma, compute_epsilon,
                         compute_rdp, rdp_to_eps)
from .adam import AdamState, adam_step, init_adam
from .clipping import clip_gradient, noisy_aggregate, per_example_norms
from .training import (NON_PRIVATE, PrivacyBudget, TrainConfig, TrainHistory,
                       predict_probabilities, resolve_noise_multiplier, train)

__all__ = [
    "DEFAULT_ORDERS",
    "compute_rdp",
    "rdp_to_eps",
    "compute_epsilon",
    "calibrate_sigma",
    "AdamState",
    "init_adam",
    "adam_step",
    "clip_gradient",
    "noisy_aggregate",
    "per_example_norms",
    "PrivacyBudget",
    "TrainConfig",
    "TrainHistory",
    "NON_PRIVATE",
    "train",
    "predict_probabilities",
    "resolve_noise_multiplier",
]
