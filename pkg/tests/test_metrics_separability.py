import math

import numpy as np
import pytest

from oracles import fdr_bruteforce, in_class_std_bruteforce
from ppml_audit.data import dataset_from_arrays
from ppml_audit.errors import InputError
from ppml_audit.metrics import (fdr, fdr_from_features, in_class_std,
                                in_class_std_from_features)


class TestFdr:
    def test_repeated_points_signal_infinite_separability(self):
        x = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
        y = np.array([0, 0, 1, 1])
        assert fdr_from_features(x, y) == math.inf

    def test_identical_means_zero(self):
        x = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        y = np.array([0, 0, 1, 1])
        assert fdr_from_features(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_two_gaussians_match_bruteforce(self):
        """Unit-variance classes one apart along the first axis."""
        rng = np.random.default_rng(11)
        a = rng.normal([0.0, 0.0], 1.0, size=(5000, 2))
        b = rng.normal([1.0, 0.0], 1.0, size=(5000, 2))
        x = np.vstack([a, b])
        y = np.repeat([0, 1], 5000)
        ours = fdr_from_features(x, y)
        # bruteforce scatter loops are slow; oracle runs on a stratified subset
        sub = np.r_[0:200, 5000:5200]
        assert fdr_from_features(x[sub], y[sub]) == pytest.approx(
            fdr_bruteforce(x[sub], y[sub]), rel=1e-9)
        # full-set value close to the theoretical n*0.25 / (n*2) scale
        assert ours == pytest.approx(0.125, rel=0.1)

    def test_translation_invariance(self, rng):
        x = rng.normal(size=(60, 5))
        y = rng.integers(0, 3, size=60)
        shifted = x + 13.7
        assert fdr_from_features(x, y) == pytest.approx(
            fdr_from_features(shifted, y), rel=1e-9)

    def test_single_class_rejected(self):
        with pytest.raises(InputError):
            fdr_from_features(np.zeros((4, 2)), np.zeros(4, dtype=int))

    def test_dataset_level_runs(self, balanced_dataset):
        value = fdr(balanced_dataset)
        assert value > 0


class TestInClassStd:
    def test_identical_samples_contribute_zero(self):
        x = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 1.0], [2.0, 3.0]])
        y = np.array([0, 0, 1, 1])
        # class 0 contributes 0; class 1 has per-feature std 1
        assert in_class_std_from_features(x, y) == pytest.approx(0.5)

    def test_binary_feature_half(self):
        x = np.array([[0.0], [1.0], [0.0], [1.0]])
        y = np.array([0, 0, 1, 1])
        assert in_class_std_from_features(x, y) == pytest.approx(0.5)

    def test_matches_bruteforce(self, rng):
        x = rng.normal(size=(50, 7))
        y = rng.integers(0, 4, size=50)
        if len(set(y.tolist())) < 2:
            y[0], y[1] = 0, 1
        assert in_class_std_from_features(x, y) == pytest.approx(
            in_class_std_bruteforce(x, y), abs=1e-10)

    def test_dataset_level_runs(self, balanced_dataset):
        assert in_class_std(balanced_dataset) > 0
