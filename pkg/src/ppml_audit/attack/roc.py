"""ROC evaluation: threshold-sweep curve, trapezoidal AUC, and TPR at
fixed low false-positive rates."""

from dataclasses import dataclass

import numpy as np

from ..errors import EvaluationError

FPR_TARGETS = (0.1, 0.001)


@dataclass(frozen=True)
class AttackReport:
    """ROC points run from (0, 0) to (1, 1), monotone in both coordinates."""

    roc_fpr: np.ndarray
    roc_tpr: np.ndarray
    auc: float
    tpr_at_fpr_0_1: float
    tpr_at_fpr_0_001: float

    def to_dict(self) -> dict:
        return {
            "auc": self.auc,
            "tpr_at_fpr_0_1": self.tpr_at_fpr_0_1,
            "tpr_at_fpr_0_001": self.tpr_at_fpr_0_001,
            "roc": [[float(f), float(t)]
                    for f, t in zip(self.roc_fpr, self.roc_tpr)],
        }


def roc_curve(scores: np.ndarray, truths: np.ndarray):
    """Sweep thresholds over the distinct score values (descending); tied
    scores advance TP and FP together. Returns (fpr, tpr) arrays."""
    scores = np.asarray(scores, dtype=np.float64)
    truths = np.asarray(truths, dtype=bool)
    pos = int(truths.sum())
    neg = truths.size - pos
    if pos == 0 or neg == 0:
        raise EvaluationError("ROC needs at least one member and one non-member")
    order = np.argsort(-scores, kind="stable")
    sorted_truth = truths[order]
    sorted_scores = scores[order]
    tp = np.cumsum(sorted_truth)
    fp = np.cumsum(~sorted_truth)
    # keep only the last index of each tied block
    distinct = np.flatnonzero(np.diff(sorted_scores) != 0)
    cut = np.append(distinct, truths.size - 1)
    fpr = np.concatenate([[0.0], fp[cut] / neg])
    tpr = np.concatenate([[0.0], tp[cut] / pos])
    return fpr, tpr


def auc_trapezoid(fpr: np.ndarray, tpr: np.ndarray) -> float:
    return float(np.trapz(tpr, fpr))


def tpr_at_fpr(fpr: np.ndarray, tpr: np.ndarray, target: float) -> float:
    """Linear interpolation of the curve at the requested FPR."""
    return float(np.interp(target, fpr, tpr))


def evaluate_attack(scores: np.ndarray, truths: np.ndarray) -> AttackReport:
    fpr, tpr = roc_curve(scores, truths)
    return AttackReport(
        roc_fpr=fpr,
        roc_tpr=tpr,
        auc=auc_trapezoid(fpr, tpr),
        tpr_at_fpr_0_1=tpr_at_fpr(fpr, tpr, 0.1),
        tpr_at_fpr_0_001=tpr_at_fpr(fpr, tpr, 0.001),
    )
