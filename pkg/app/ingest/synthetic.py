"""
Synthetic block-structured review datasets.

Users and items are cut into contiguous clusters. Users interact with
items of their own cluster, and every review mixes words that name the
item's cluster with shared filler words, so both the interaction matrix
and the review text carry the cluster structure.
"""
from dataclasses import dataclass

import numpy as np

from ingest.records import Interaction

FILLER_WORDS = (
    'good', 'bought', 'works', 'price', 'quality', 'nice',
    'recommend', 'using', 'week', 'package',
)
BASE_TIMESTAMP = 1_400_000_000


@dataclass(frozen=True)
class ToySpec:
    """Shape of a generated dataset."""
    n_users: int = 200
    n_items: int = 100
    n_clusters: int = 10
    per_user: int = 0
    noise: float = 0.0
    cluster_words: int = 5
    words_per_review: int = 12
    seed: int = 0

    @classmethod
    def cold_start(cls, seed=0, **overrides):
        """Users with four interactions each: three train, one test."""
        params = {
            'n_users': 200, 'n_items': 300, 'n_clusters': 10,
            'per_user': 4, 'seed': seed,
        }
        params.update(overrides)
        return cls(**params)


def cluster_of(index, count, n_clusters):
    """Contiguous block assignment of ``index`` out of ``count``."""
    return index * n_clusters // count


def cluster_word(cluster, j):
    return f'topic{cluster}word{j}'


def _review(rng, cluster, spec):
    n_cluster = max(1, spec.words_per_review // 2)
    cluster_part = [
        cluster_word(cluster, j)
        for j in rng.integers(0, spec.cluster_words, size=n_cluster)
    ]
    filler = [
        FILLER_WORDS[j] for j in rng.integers(
            0, len(FILLER_WORDS), size=spec.words_per_review - n_cluster,
        )
    ]
    words = cluster_part + filler
    rng.shuffle(words)
    return 'This ' + ' '.join(words) + '.'


def generate_interactions(spec):
    """Generate interactions with reviews for ``spec``.

    ``per_user = 0`` means every item of the user's cluster. ``noise`` is
    the probability of one extra out-of-cluster interaction per user.
    """
    rng = np.random.default_rng(spec.seed)
    items_by_cluster = [[] for _ in range(spec.n_clusters)]
    for item in range(spec.n_items):
        items_by_cluster[
            cluster_of(item, spec.n_items, spec.n_clusters)
        ].append(item)

    interactions = []
    for user in range(spec.n_users):
        cluster = cluster_of(user, spec.n_users, spec.n_clusters)
        pool = items_by_cluster[cluster]
        if spec.per_user and spec.per_user < len(pool):
            chosen = sorted(
                rng.choice(pool, size=spec.per_user, replace=False).tolist()
            )
        else:
            chosen = list(pool)
        if spec.noise and rng.random() < spec.noise:
            outside = [i for i in range(spec.n_items) if i not in pool]
            if outside:
                chosen.append(int(rng.choice(outside)))
        for item in chosen:
            item_cluster = cluster_of(item, spec.n_items, spec.n_clusters)
            rating = 5.0 if item_cluster == cluster else 2.0
            interactions.append(Interaction(
                user=f'U{user:05d}',
                item=f'I{item:05d}',
                rating=rating,
                review=_review(rng, item_cluster, spec),
                timestamp=BASE_TIMESTAMP + int(rng.integers(0, 10_000_000)),
            ))
    return interactions
