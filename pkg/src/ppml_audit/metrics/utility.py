"""Utility metrics: accuracy, macro F1, and the train-test accuracy gap."""

import warnings
from dataclasses import dataclass

import numpy as np

from ..data.preprocess import PreparedData
from ..dp.training import predict_probabilities
from ..errors import InputError
from ..nn.params import ModelParams


@dataclass(frozen=True)
class UtilityReport:
    accuracy: float
    f1_macro: float
    train_accuracy: float
    test_accuracy: float

    @property
    def train_test_gap(self) -> float:
        return self.train_accuracy - self.test_accuracy

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "f1_macro": self.f1_macro,
            "train_accuracy": self.train_accuracy,
            "test_accuracy": self.test_accuracy,
            "train_test_gap": self.train_test_gap,
        }


def accuracy_score(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    if y_true.shape[0] == 0:
        raise InputError("cannot score an empty label set")
    return float(np.mean(y_true == y_pred))


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray,
                     num_classes: int) -> np.ndarray:
    cm = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


def macro_f1(y_true: np.ndarray, y_pred: np.ndarray, num_classes: int) -> float:
    """Unweighted mean of per-class F1. A class absent from the true labels
    contributes an F1 of 0 (with a warning) so minority failure is punished
    rather than hidden."""
    cm = confusion_matrix(y_true, y_pred, num_classes)
    scores = []
    for cls in range(num_classes):
        tp = cm[cls, cls]
        fp = cm[:, cls].sum() - tp
        fn = cm[cls, :].sum() - tp
        if tp + fn == 0:
            warnings.warn(f"class {cls} absent from the true labels; "
                          "its F1 term is 0")
            scores.append(0.0)
            continue
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return float(np.mean(scores))


def evaluate_utility(params: ModelParams, data: PreparedData) -> UtilityReport:
    """Accuracy and macro F1 on the test split; the gap uses train accuracy."""
    if data.test_x.shape[0] == 0:
        raise InputError("utility evaluation needs a non-empty test split")
    test_pred = predict_probabilities(params, data.test_x).argmax(axis=1)
    train_pred = predict_probabilities(params, data.train_x).argmax(axis=1)
    test_acc = accuracy_score(data.test_y, test_pred)
    return UtilityReport(
        accuracy=test_acc,
        f1_macro=macro_f1(data.test_y, test_pred, params.config.num_classes),
        train_accuracy=accuracy_score(data.train_y, train_pred),
        test_accuracy=test_acc,
    )
