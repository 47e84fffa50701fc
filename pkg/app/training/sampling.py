"""
Positive/negative pair sampling for BPR.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import DegenerateUserError


@dataclass(frozen=True, eq=False)
class PairBatch:
    """Aligned (user, positive item, negative item) index arrays."""
    users: np.ndarray
    pos: np.ndarray
    neg: np.ndarray

    def __post_init__(self):
        for name in ('users', 'pos', 'neg'):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.int64),
            )
        if not len(self.users) == len(self.pos) == len(self.neg):
            raise ValueError('Batch arrays must have equal length')

    def __len__(self):
        return len(self.users)

    def __getitem__(self, index):
        return PairBatch(self.users[index], self.pos[index], self.neg[index])


def sample_negatives(user, positives, n_items, count, rng):
    """Draw ``count`` items uniformly from the items ``user`` never touched.

    Rejected draws are resampled; the same negative may repeat.
    """
    if len(positives) >= n_items:
        raise DegenerateUserError(
            f'User {user} interacted with every item; no negative exists'
        )
    result = []
    while len(result) < count:
        candidate = int(rng.integers(n_items))
        if candidate not in positives:
            result.append(candidate)
    return result


class PairSampler:
    """Draws an epoch of BPR triples from a training dataset.

    Each positive (u, i) yields ``negatives_per_positive`` triples with
    fresh negatives every epoch; positives are shuffled with the run rng.
    """

    def __init__(self, train, negatives_per_positive=5):
        self.n_items = train.n_items
        self.negatives_per_positive = negatives_per_positive
        users, items = [], []
        for interaction in train.interactions:
            users.append(train.user_index[interaction.user])
            items.append(train.item_index[interaction.item])
        self.users = np.asarray(users, dtype=np.int64)
        self.items = np.asarray(items, dtype=np.int64)
        self.positive_keys = np.unique(self.users * self.n_items + self.items)
        counts = np.bincount(self.users, minlength=train.n_users)
        degenerate = np.flatnonzero(counts >= self.n_items)
        if degenerate.size:
            raise DegenerateUserError(
                f'User {train.users[degenerate[0]]!r} interacted with every '
                'item; no negative exists'
            )

    def __len__(self):
        return len(self.users) * self.negatives_per_positive

    def is_positive(self, users, items):
        keys = users * self.n_items + items
        idx = np.searchsorted(self.positive_keys, keys)
        idx = np.minimum(idx, len(self.positive_keys) - 1)
        return self.positive_keys[idx] == keys

    def epoch(self, rng):
        """All triples of one epoch, shuffled."""
        order = rng.permutation(len(self.users))
        users = np.repeat(self.users[order], self.negatives_per_positive)
        pos = np.repeat(self.items[order], self.negatives_per_positive)
        neg = rng.integers(self.n_items, size=len(users))
        rejected = np.flatnonzero(self.is_positive(users, neg))
        while rejected.size:
            neg[rejected] = rng.integers(self.n_items, size=rejected.size)
            rejected = rejected[self.is_positive(users[rejected],
                                                 neg[rejected])]
        return PairBatch(users, pos, neg)

    def batches(self, rng, batch_size):
        triples = self.epoch(rng)
        for start in range(0, len(triples), batch_size):
            yield triples[start:start + batch_size]
