"""Likelihood scoring against OUT-model confidence distributions.

The offline attack fits a Gaussian to the logit-scaled true-class
confidences of the models that did NOT train on a sample, and scores a
target confidence by its upper-tail probability under that fit. IN-model
statistics are never consumed.
"""

import numpy as np
from scipy.special import ndtr

from ..errors import InputError

CONFIDENCE_CLAMP = 1e-7
VARIANCE_FLOOR = 1e-3  # applied to the standard deviation


def logit_scale(p) -> np.ndarray:
    """log(p / (1-p)) with p clamped into [1e-7, 1 - 1e-7], so exact 0/1
    confidences stay finite."""
    p = np.clip(np.asarray(p, dtype=np.float64), CONFIDENCE_CLAMP,
                1.0 - CONFIDENCE_CLAMP)
    return np.log(p / (1.0 - p))


def fit_out_gaussian(logits: np.ndarray, masks: np.ndarray,
                     exclude_model: int | None = None):
    """Per-sample OUT statistics for one attack target.

    logits: (N, S) logit-scaled true-class confidences of every ensemble
    model on every sample; masks: (N, S) membership. Row `exclude_model`
    (the target under attack, None when the target is external to the
    ensemble) is never used. Samples with fewer than two OUT observations
    fall back to the global OUT mean/std; standard deviations are floored at
    1e-3 to avoid degenerate fits.

    Returns (mu, sigma), each of shape (S,).
    """
    num_models, size = logits.shape
    if masks.shape != logits.shape:
        raise InputError("logits and masks must align")
    out = ~masks
    if exclude_model is not None:
        if not 0 <= exclude_model < num_models:
            raise InputError("exclude_model out of range")
        out[exclude_model, :] = False

    counts = out.sum(axis=0)
    z = np.where(out, logits, 0.0)
    sums = z.sum(axis=0)
    sq_sums = (z * z).sum(axis=0)

    all_out = logits[out]
    if all_out.size < 2:
        raise InputError("ensemble offers fewer than 2 OUT observations")
    global_mu = float(all_out.mean())
    global_sigma = float(all_out.std(ddof=1))

    safe_counts = np.maximum(counts, 1)
    mu = np.where(counts >= 1, sums / safe_counts, global_mu)
    # unbiased variance; guarded for counts < 2
    denom = np.maximum(counts - 1, 1)
    var = np.maximum(sq_sums - safe_counts * mu * mu, 0.0) / denom
    sigma = np.where(counts >= 2, np.sqrt(var), global_sigma)
    sigma = np.maximum(sigma, VARIANCE_FLOOR)
    return mu, sigma


def lira_score(target_conf, mu_out, sigma_out) -> np.ndarray:
    """Membership score 1 - Phi((mu_out - logit(conf)) / sigma_out), i.e. the
    upper-tail mass of the OUT fit below the target's logit confidence.

    Higher means the target's confidence sits further above the OUT
    distribution, i.e. more likely a member: a logit one OUT standard
    deviation above the OUT mean scores Phi(1) ~ 0.8413. Monotone increasing
    in the target confidence."""
    z = logit_scale(target_conf)
    return ndtr((z - mu_out) / np.maximum(sigma_out, VARIANCE_FLOOR))
