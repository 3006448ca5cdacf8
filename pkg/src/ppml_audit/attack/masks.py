"""Membership masks for the shadow ensemble."""

import numpy as np

from ..errors import InputError


def sample_membership_masks(num_models: int, size: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Boolean (num_models, size) matrix; each row marks the floor(size/2)
    samples the model trains on, drawn uniformly without replacement. A
    sample's IN-count across models is therefore Binomial(N, 1/2) up to the
    fixed row sums."""
    if num_models < 2:
        raise InputError("need at least 2 shadow models")
    if size < 2:
        raise InputError("need at least 2 samples to split")
    masks = np.zeros((num_models, size), dtype=bool)
    half = size // 2
    for m in range(num_models):
        masks[m, rng.choice(size, size=half, replace=False)] = True
    return masks
