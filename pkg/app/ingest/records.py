"""
Interaction records, datasets and train/test splits.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

RATING_MIN = 1.0
RATING_MAX = 5.0


@dataclass(frozen=True)
class Interaction:
    """One user-item interaction with its rating and review."""
    user: str
    item: str
    rating: float
    review: str = ''
    timestamp: Optional[int] = None

    def __post_init__(self):
        if not self.user or not self.item:
            raise ValueError('Interactions need a user and an item id')
        if not RATING_MIN <= self.rating <= RATING_MAX:
            raise ValueError(
                f'Rating {self.rating} outside [{RATING_MIN}, {RATING_MAX}]'
            )

    @property
    def pair(self):
        return (self.user, self.item)

    @property
    def sort_time(self):
        """Timestamp used for ordering; missing timestamps sort first."""
        return self.timestamp if self.timestamp is not None else 0


@dataclass(frozen=True)
class Dataset:
    """A deduplicated interaction corpus with ordered user and item sets.

    ``users`` and ``items`` default to the ids seen in ``interactions``
    in first-appearance order.
    """
    interactions: tuple = ()
    users: tuple = None
    items: tuple = None

    def __post_init__(self):
        interactions = tuple(self.interactions)
        object.__setattr__(self, 'interactions', interactions)
        if self.users is None:
            users = dict.fromkeys(x.user for x in interactions)
            object.__setattr__(self, 'users', tuple(users))
        else:
            object.__setattr__(self, 'users', tuple(self.users))
        if self.items is None:
            items = dict.fromkeys(x.item for x in interactions)
            object.__setattr__(self, 'items', tuple(items))
        else:
            object.__setattr__(self, 'items', tuple(self.items))

        if len(self.user_index) != len(self.users):
            raise ValueError('Duplicate user ids')
        if len(self.item_index) != len(self.items):
            raise ValueError('Duplicate item ids')
        seen = set()
        for interaction in interactions:
            if interaction.user not in self.user_index:
                raise ValueError(f'Unknown user {interaction.user!r}')
            if interaction.item not in self.item_index:
                raise ValueError(f'Unknown item {interaction.item!r}')
            if interaction.pair in seen:
                raise ValueError(f'Duplicate pair {interaction.pair!r}')
            seen.add(interaction.pair)

    @cached_property
    def user_index(self):
        return {user: idx for idx, user in enumerate(self.users)}

    @cached_property
    def item_index(self):
        return {item: idx for idx, item in enumerate(self.items)}

    @cached_property
    def by_user(self):
        """Interactions grouped per user, in corpus order."""
        grouped = {user: [] for user in self.users}
        for interaction in self.interactions:
            grouped[interaction.user].append(interaction)
        return grouped

    @cached_property
    def by_item(self):
        """Interactions grouped per item, in corpus order."""
        grouped = {item: [] for item in self.items}
        for interaction in self.interactions:
            grouped[interaction.item].append(interaction)
        return grouped

    @cached_property
    def positives(self):
        """Item indices each user index interacted with."""
        result = [set() for _ in self.users]
        for interaction in self.interactions:
            result[self.user_index[interaction.user]].add(
                self.item_index[interaction.item]
            )
        return result

    @property
    def n_users(self):
        return len(self.users)

    @property
    def n_items(self):
        return len(self.items)

    def __len__(self):
        return len(self.interactions)


@dataclass(frozen=True)
class Split:
    """A user-level train/test partition of a dataset.

    ``train`` keeps the full user and item universe of the source
    dataset so indices line up between train and test.
    """
    train: Dataset
    test: tuple
    seed: int
    train_fraction: float = 0.7

    def __post_init__(self):
        object.__setattr__(self, 'test', tuple(self.test))
        train_pairs = {x.pair for x in self.train.interactions}
        train_users = {x.user for x in self.train.interactions}
        for pair in self.test:
            if pair in train_pairs:
                raise ValueError(f'Pair {pair!r} is in train and test')
            if pair[0] not in train_users:
                raise ValueError(f'Test user {pair[0]!r} has no train data')

    @cached_property
    def test_by_user(self):
        """Test item indices per user index."""
        result = {}
        for user, item in self.test:
            uidx = self.train.user_index[user]
            result.setdefault(uidx, set()).add(self.train.item_index[item])
        return result

    @property
    def n_users(self):
        return self.train.n_users

    @property
    def n_items(self):
        return self.train.n_items
