"""
k-core filtering of the user-item interaction graph.
"""
import logging
from collections import Counter

from ingest.records import Dataset

logger = logging.getLogger(__name__)


def k_core_filter(ds, k):
    """Prune users and items with fewer than ``k`` interactions.

    Pruning repeats until no user or item falls below ``k``, so the result
    is the graph k-core and applying the filter again changes nothing.
    ``k = 0`` returns the dataset unchanged.
    """
    if k < 0:
        raise ValueError('k must be non-negative')
    if k == 0:
        return ds

    interactions = list(ds.interactions)
    rounds = 0
    while True:
        user_counts = Counter(x.user for x in interactions)
        item_counts = Counter(x.item for x in interactions)
        kept = [
            x for x in interactions
            if user_counts[x.user] >= k and item_counts[x.item] >= k
        ]
        rounds += 1
        if len(kept) == len(interactions):
            break
        interactions = kept

    users = {x.user for x in interactions}
    items = {x.item for x in interactions}
    result = Dataset(
        interactions=interactions,
        users=[user for user in ds.users if user in users],
        items=[item for item in ds.items if item in items],
    )
    logger.info(
        '%d-core: %d -> %d interactions after %d rounds',
        k, len(ds), len(result), rounds,
    )
    return result
