import numpy as np
import pytest

from oracles import accuracy_bruteforce, macro_f1_bruteforce
from ppml_audit.metrics import accuracy_score, confusion_matrix, macro_f1


def test_perfect_predictions():
    y = np.array([0, 1, 2, 1, 0])
    assert accuracy_score(y, y) == 1.0
    assert macro_f1(y, y, 3) == 1.0


def test_symmetric_binary_confusion():
    """TP=1 FP=1 FN=1 TN=1 per class: every F1 term is 0.5."""
    y_true = np.array([0, 0, 1, 1])
    y_pred = np.array([0, 1, 0, 1])
    cm = confusion_matrix(y_true, y_pred, 2)
    assert cm.tolist() == [[1, 1], [1, 1]]
    assert macro_f1(y_true, y_pred, 2) == pytest.approx(0.5)


def test_macro_f1_equals_accuracy_for_diagonal_confusion():
    y = np.array([0, 0, 1, 1, 2, 2])
    assert macro_f1(y, y, 3) == accuracy_score(y, y)


def test_absent_class_scores_zero_with_warning():
    y_true = np.array([0, 0, 1, 1])
    y_pred = np.array([0, 0, 1, 1])
    with pytest.warns(UserWarning, match="absent"):
        score = macro_f1(y_true, y_pred, 3)
    assert score == pytest.approx(2.0 / 3.0)


def test_uniform_random_predictor_near_chance(rng):
    """Accuracy of random guessing on balanced classes ~ 1/K within
    3 binomial sigmas."""
    k, n = 4, 4000
    y_true = np.repeat(np.arange(k), n // k)
    y_pred = rng.integers(0, k, size=n)
    acc = accuracy_score(y_true, y_pred)
    sigma = np.sqrt((1 / k) * (1 - 1 / k) / n)
    assert abs(acc - 1 / k) < 3 * sigma


@pytest.mark.parametrize("seed", range(10))
def test_matches_bruteforce_on_random_instances(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 6))
    n = int(rng.integers(10, 200))
    y_true = rng.integers(0, k, size=n)
    y_pred = rng.integers(0, k, size=n)
    assert accuracy_score(y_true, y_pred) == pytest.approx(
        accuracy_bruteforce(y_true.tolist(), y_pred.tolist()), abs=1e-12)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ours = macro_f1(y_true, y_pred, k)
    assert ours == pytest.approx(
        macro_f1_bruteforce(y_true.tolist(), y_pred.tolist(), k), abs=1e-12)
