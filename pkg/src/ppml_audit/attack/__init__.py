from .masks import sample_membership_masks
from .roc import (AttackReport, auc_trapezoid, evaluate_attack, roc_curve,
                  tpr_at_fpr)
from .round_robin import (FPR_GRID, RoundRobinResult, attack_target,
                          dump_scores_csv, round_robin_attack)
from .scoring import fit_out_gaussian, lira_score, logit_scale
from .shadows import ShadowEnsemble, member_confidences, train_shadows

__all__ = [
    "sample_membership_masks",
    "ShadowEnsemble",
    "train_shadows",
    "member_confidences",
    "logit_scale",
    "fit_out_gaussian",
    "lira_score",
    "AttackReport",
    "roc_curve",
    "auc_trapezoid",
    "tpr_at_fpr",
    "evaluate_attack",
    "RoundRobinResult",
    "round_robin_attack",
    "attack_target",
    "dump_scores_csv",
    "FPR_GRID",
]
