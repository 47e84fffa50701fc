"""
Pairwise BPR probability and loss.

The ranking probability is sigma(y_pos - y_neg): it increases with the
positive score. Training minimises the mean of -log sigma(y_pos - y_neg).
"""
import math

import numpy as np
from scipy.special import expit, log_expit

PROBABILITY_FLOOR = 1e-12
LOG_FLOOR = math.log(PROBABILITY_FLOOR)
LOG_CEILING = math.log1p(-PROBABILITY_FLOOR)


def pairwise_probability(y_pos, y_neg):
    """P(pos ranked above neg) = 1 / (1 + exp(-(y_pos - y_neg)))."""
    result = expit(np.subtract(y_pos, y_neg, dtype=np.float64))
    if np.ndim(result) == 0:
        return float(result)
    return result


def bpr_data_term(margin):
    """Mean BPR loss over margins ``y_pos - y_neg`` and its gradient.

    Returns ``(loss, dloss/dmargin)``; the gradient is already divided by
    the batch size. The log-sigmoid is clamped to
    ``[log 1e-12, log(1 - 1e-12)]``; where the clamp is active the
    loss is flat and the gradient is zero.
    """
    margin = np.asarray(margin, dtype=np.float64)
    size = margin.shape[0]
    raw = log_expit(margin)
    log_prob = np.clip(raw, LOG_FLOOR, LOG_CEILING)
    loss = -float(np.sum(log_prob)) / size
    grad = np.where(raw == log_prob, -expit(-margin) / size, 0.0)
    return loss, grad
