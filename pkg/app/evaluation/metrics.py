"""
Top-K ranking metrics.
"""
import numpy as np

from core.exceptions import ConfigurationError


def _check(test_items, K):
    if K <= 0:
        raise ConfigurationError(f'K must be positive, got {K}')
    if not test_items:
        raise ValueError('User has no test items')


def hit_rate_at_k(ranked, test_items, K, any_hit=False):
    """Share of the user's test items found in the top ``K``.

    With ``any_hit`` the result is 1.0 if at least one test item is in
    the top ``K`` and 0.0 otherwise.
    """
    _check(test_items, K)
    hits = sum(1 for item in list(ranked)[:K] if item in test_items)
    if any_hit:
        return 1.0 if hits else 0.0
    return hits / len(test_items)


def ndcg_at_k(ranked, test_items, K):
    """Binary-relevance nDCG over the top ``K`` positions."""
    _check(test_items, K)
    dcg = sum(
        1.0 / np.log2(position + 1)
        for position, item in enumerate(list(ranked)[:K], start=1)
        if item in test_items
    )
    ideal = sum(
        1.0 / np.log2(position + 1)
        for position in range(1, min(len(test_items), K) + 1)
    )
    return float(dcg / ideal)
