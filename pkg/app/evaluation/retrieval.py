"""
First stage of the evaluation protocol: candidate retrieval with MF.
"""
import numpy as np


def rank_by_score(items, scores):
    """``items`` ordered by descending score, ties by ascending index."""
    items = np.asarray(items, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    return items[np.lexsort((items, -scores))]


def retrieve_top_m(retrieval_model, user, M, train_exclusions=()):
    """The ``M`` best-scored items the user has not interacted with.

    Returns every remaining item when fewer than ``M`` exist.
    """
    if M < 1:
        raise ValueError('M must be at least 1')
    scores = retrieval_model.score_items(user)
    keep = np.ones(len(scores), dtype=bool)
    excluded = np.fromiter(train_exclusions, dtype=np.int64)
    keep[excluded] = False
    candidates = np.flatnonzero(keep)
    return rank_by_score(candidates, scores[candidates])[:M]
