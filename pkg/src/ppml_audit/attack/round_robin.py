"""Round-robin evaluation: every ensemble member takes a turn as the attack
target while the remaining models supply the OUT statistics, and the final
report averages the per-target metrics."""

import csv
from dataclasses import dataclass

import numpy as np

from ..data.preprocess import PreparedData
from ..dp.training import predict_probabilities
from ..errors import EvaluationError, InputError
from ..nn.params import ModelParams
from .roc import AttackReport, evaluate_attack
from .scoring import fit_out_gaussian, lira_score, logit_scale
from .shadows import ShadowEnsemble, member_confidences

# common grid for vertical ROC averaging; contains the reported FPR knots
FPR_GRID = np.linspace(0.0, 1.0, 1001)


@dataclass
class RoundRobinResult:
    averaged: AttackReport
    per_target: list
    scores: np.ndarray  # (N, S) membership scores per target model
    masks: np.ndarray


def _average_reports(reports: list) -> AttackReport:
    grid_tpr = np.mean(
        [np.interp(FPR_GRID, r.roc_fpr, r.roc_tpr) for r in reports], axis=0)
    return AttackReport(
        roc_fpr=FPR_GRID.copy(),
        roc_tpr=grid_tpr,
        auc=float(np.mean([r.auc for r in reports])),
        tpr_at_fpr_0_1=float(np.mean([r.tpr_at_fpr_0_1 for r in reports])),
        tpr_at_fpr_0_001=float(np.mean([r.tpr_at_fpr_0_001 for r in reports])),
    )


def round_robin_attack(ensemble: ShadowEnsemble, data: PreparedData) -> RoundRobinResult:
    """Average attack result over all ensemble members as targets.

    Evaluation failures propagate annotated with the target index."""
    if ensemble.num_models < 3:
        raise InputError("round-robin attack needs at least 3 models")
    conf = member_confidences(ensemble, data)
    logits = logit_scale(conf)
    reports = []
    all_scores = np.empty_like(conf)
    for target in range(ensemble.num_models):
        mu, sigma = fit_out_gaussian(logits, ensemble.masks, target)
        scores = lira_score(conf[target], mu, sigma)
        all_scores[target] = scores
        try:
            reports.append(evaluate_attack(scores, ensemble.masks[target]))
        except EvaluationError as exc:
            raise EvaluationError(f"target model {target}: {exc}") from exc
    return RoundRobinResult(averaged=_average_reports(reports),
                            per_target=reports, scores=all_scores,
                            masks=ensemble.masks.copy())


def attack_target(target_params: ModelParams, target_membership: np.ndarray,
                  ensemble: ShadowEnsemble, data: PreparedData) -> AttackReport:
    """Variant: attack an externally supplied model using the whole ensemble
    as shadows. `target_membership` is the ground truth for scoring."""
    logits = logit_scale(member_confidences(ensemble, data))
    mu, sigma = fit_out_gaussian(logits, ensemble.masks, exclude_model=None)
    probs = predict_probabilities(target_params, data.train_x)
    conf = probs[np.arange(data.train_x.shape[0]), data.train_y]
    scores = lira_score(conf, mu, sigma)
    return evaluate_attack(scores, np.asarray(target_membership, dtype=bool))


def dump_scores_csv(path, result: RoundRobinResult):
    """Per-sample score dump: sample_id, target_model, score, is_member."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "target_model", "score", "is_member"])
        num_models, size = result.scores.shape
        for target in range(num_models):
            for sample in range(size):
                writer.writerow([
                    sample, target,
                    f"{result.scores[target, sample]:.6f}",
                    int(result.masks[target, sample]),
                ])
