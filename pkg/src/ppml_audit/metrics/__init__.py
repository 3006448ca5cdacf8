from .complexity import (compression_ratio, dataset_compression_ratios,
                         dataset_entropy, shannon_entropy)
from .separability import (fdr, fdr_from_features, in_class_std,
                           in_class_std_from_features)
from .utility import (UtilityReport, accuracy_score, confusion_matrix,
                      evaluate_utility, macro_f1)

__all__ = [
    "shannon_entropy",
    "dataset_entropy",
    "compression_ratio",
    "dataset_compression_ratios",
    "fdr",
    "fdr_from_features",
    "in_class_std",
    "in_class_std_from_features",
    "UtilityReport",
    "accuracy_score",
    "confusion_matrix",
    "macro_f1",
    "evaluate_utility",
]
