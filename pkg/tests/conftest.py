import numpy as np
import pytest

from ppml_audit.data import SynthSpec, preprocess, synth_generate
from ppml_audit.nn import ModelConfig, init_params


@pytest.fixture(scope="session")
def small_config():
    """Narrow model keeps gradient and training tests quick."""
    return ModelConfig(conv_channels=(4, 8, 8), groupnorm_groups=4,
                       hidden_units=16, num_classes=3)


@pytest.fixture(scope="session")
def small_params(small_config):
    return init_params(small_config, seed=42)


@pytest.fixture(scope="session")
def easy_dataset():
    """Tiny, clearly separable 2-class blob task."""
    spec = SynthSpec(num_classes=2, train_per_class=40, test_per_class=20,
                     noise_std=8.0)
    return synth_generate(spec, seed=42)


@pytest.fixture(scope="session")
def easy_data(easy_dataset):
    return preprocess(easy_dataset)


@pytest.fixture(scope="session")
def balanced_dataset():
    """4 balanced classes for operator tests."""
    spec = SynthSpec(num_classes=4, train_per_class=30, test_per_class=10,
                     noise_std=20.0)
    return synth_generate(spec, seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
