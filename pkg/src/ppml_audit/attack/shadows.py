"""Shadow ensemble training and confidence extraction."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..data.preprocess import PreparedData
from ..dp.training import PrivacyBudget, TrainConfig, predict_probabilities, train
from ..errors import InputError
from ..nn.config import ModelConfig
from ..rng import derive_rng
from .masks import sample_membership_masks


@dataclass
class ShadowEnsemble:
    """N trained models plus the membership mask each one was trained on.

    Model m trained on the samples with masks[m] True, using seed
    base_seed + m, so the whole ensemble is reproducible from base_seed.
    """

    models: list
    masks: np.ndarray
    base_seed: int

    @property
    def num_models(self) -> int:
        return len(self.models)


def train_shadows(data: PreparedData, model_config: ModelConfig,
                  train_config: TrainConfig, budget: PrivacyBudget,
                  num_models: int, base_seed: int,
                  workers: int = 1) -> ShadowEnsemble:
    """Each shadow trains on a random half of the train split.

    Training errors propagate annotated with the failing model index.
    Workers > 1 trains models concurrently; results are merged by index, so
    parallelism never changes the outcome."""
    size = data.train_x.shape[0]
    mask_rng = derive_rng(base_seed, "shadow_masks", num_models=num_models,
                          size=size)
    masks = sample_membership_masks(num_models, size, mask_rng)
    # shadow histories are never consumed; skip the per-epoch evaluation
    shadow_config = replace(train_config, record_history=False)

    def train_one(index: int):
        try:
            params, _ = train(data.subset(masks[index]), model_config,
                              shadow_config, budget, seed=base_seed + index)
            return params
        except Exception as exc:
            raise InputError(f"shadow model {index} failed: {exc}") from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = list(pool.map(train_one, range(num_models)))
    else:
        models = [train_one(m) for m in range(num_models)]
    return ShadowEnsemble(models=models, masks=masks, base_seed=base_seed)


def member_confidences(ensemble: ShadowEnsemble, data: PreparedData) -> np.ndarray:
    """(N, S) true-class probabilities of every model on every train sample,
    evaluation mode (no augmentation)."""
    size = data.train_x.shape[0]
    conf = np.empty((ensemble.num_models, size))
    idx = np.arange(size)
    for m, params in enumerate(ensemble.models):
        probs = predict_probabilities(params, data.train_x)
        conf[m] = probs[idx, data.train_y]
    return conf
