import math

import numpy as np
import pytest

from ppml_audit.data import PreparedData
from ppml_audit.dp import PrivacyBudget, TrainConfig, train
from ppml_audit.errors import InputError
from ppml_audit.nn import ModelConfig


@pytest.fixture(scope="module")
def tiny_config():
    return ModelConfig(conv_channels=(4, 8, 8), groupnorm_groups=4,
                       hidden_units=16, num_classes=2)


@pytest.fixture(scope="module")
def quick_train_config():
    return TrainConfig(batch_size=32, epochs=3)


def test_zero_epochs_rejected():
    with pytest.raises(InputError):
        TrainConfig(epochs=0)


def test_empty_dataset_rejected(tiny_config, quick_train_config):
    empty = PreparedData(np.zeros((0, 32, 32, 3)), np.zeros(0, dtype=np.int64),
                         np.zeros((0, 32, 32, 3)), np.zeros(0, dtype=np.int64),
                         ("a", "b"))
    with pytest.raises(InputError):
        train(empty, tiny_config, quick_train_config, PrivacyBudget(math.inf), 0)


def test_history_lengths_match_epochs(easy_data, tiny_config, quick_train_config):
    _, hist = train(easy_data, tiny_config, quick_train_config,
                    PrivacyBudget(math.inf), seed=0)
    assert len(hist.train_loss) == 3
    assert len(hist.train_accuracy) == 3
    assert len(hist.test_accuracy) == 3


def test_training_deterministic(easy_data, tiny_config, quick_train_config):
    p1, h1 = train(easy_data, tiny_config, quick_train_config,
                   PrivacyBudget(math.inf), seed=7)
    p2, h2 = train(easy_data, tiny_config, quick_train_config,
                   PrivacyBudget(math.inf), seed=7)
    for key in p1.arrays:
        assert np.array_equal(p1.arrays[key], p2.arrays[key])
    assert h1.train_loss == h2.train_loss


def test_different_seeds_differ(easy_data, tiny_config, quick_train_config):
    p1, _ = train(easy_data, tiny_config, quick_train_config,
                  PrivacyBudget(math.inf), seed=7)
    p2, _ = train(easy_data, tiny_config, quick_train_config,
                  PrivacyBudget(math.inf), seed=8)
    assert any(not np.array_equal(p1.arrays[k], p2.arrays[k]) for k in p1.arrays)


def test_degenerate_private_path_bitwise_equals_non_private(
        easy_data, tiny_config):
    """Infinite clip norm and zero noise reduce DP training to the exact
    non-private computation on the same seed."""
    base = TrainConfig(batch_size=32, epochs=2)
    degenerate = TrainConfig(batch_size=32, epochs=2, clip_norm=math.inf,
                             noise_multiplier=0.0)
    p_plain, _ = train(easy_data, tiny_config, base, PrivacyBudget(math.inf), seed=3)
    p_dp, _ = train(easy_data, tiny_config, degenerate, PrivacyBudget(5.0), seed=3)
    for key in p_plain.arrays:
        assert np.array_equal(p_plain.arrays[key], p_dp.arrays[key]), key


def test_separable_task_learned_non_private(easy_data, tiny_config):
    """Clearly separable blobs reach high train accuracy in 30 epochs."""
    cfg = TrainConfig(batch_size=32, epochs=30)
    _, hist = train(easy_data, tiny_config, cfg, PrivacyBudget(math.inf), seed=0)
    assert hist.train_accuracy[-1] >= 0.95


def test_private_gap_not_larger_than_non_private(easy_data, tiny_config):
    """Strong privacy suppresses overfitting: averaged over seeds, the
    train-test gap under eps=1 stays at or below the non-private gap."""
    cfg = TrainConfig(batch_size=32, epochs=8)
    gaps_np, gaps_dp = [], []
    for seed in range(5):
        _, h_np = train(easy_data, tiny_config, cfg, PrivacyBudget(math.inf), seed)
        _, h_dp = train(easy_data, tiny_config, cfg, PrivacyBudget(1.0), seed)
        gaps_np.append(h_np.final_gap)
        gaps_dp.append(h_dp.final_gap)
    assert np.mean(gaps_dp) <= np.mean(gaps_np) + 1e-9


def test_private_run_records_noise_and_epsilon(easy_data, tiny_config):
    cfg = TrainConfig(batch_size=32, epochs=2)
    _, hist = train(easy_data, tiny_config, cfg, PrivacyBudget(3.0), seed=0)
    assert hist.noise_multiplier is not None and hist.noise_multiplier > 0
    assert hist.epsilon_spent is not None and hist.epsilon_spent <= 3.0


def test_explicit_noise_multiplier_skips_calibration(easy_data, tiny_config):
    cfg = TrainConfig(batch_size=32, epochs=2, noise_multiplier=2.5)
    _, hist = train(easy_data, tiny_config, cfg, PrivacyBudget(3.0), seed=0)
    assert hist.noise_multiplier == 2.5


def test_post_clip_norms_observed(easy_data, tiny_config):
    """Every post-clip per-example gradient norm stays within the bound."""
    seen = []
    cfg = TrainConfig(batch_size=16, epochs=1, noise_multiplier=0.5)
    train(easy_data, tiny_config, cfg, PrivacyBudget(2.0), seed=0,
          grad_norm_observer=lambda norms: seen.append(norms.copy()))
    assert seen, "observer never called"
    all_norms = np.concatenate(seen)
    assert all_norms.size >= easy_data.train_x.shape[0]
    assert np.all(all_norms <= cfg.clip_norm + 1e-9)
