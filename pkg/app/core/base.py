"""
The scorer contract shared by every recommender.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import ConfigurationError, CorruptIndexError

INIT_RANGE = 0.1

INTERACTION_BASED = 'interaction-based'
TEXT_AS_REGULARIZER = 'text-as-regularizer'
TEXT_AS_FEATURE = 'text-as-feature'


@dataclass(frozen=True, eq=False)
class TextContext:
    """Review documents (and optional pretrained vectors) a model reads."""
    documents: object
    embeddings: object = None


class Recommender:
    """Base class for models scored as ``y(u, i)``.

    Parameters live in ``self.params``, a dict of float64 arrays that
    optimizers update in place. Subclasses implement ``score_pairs`` and
    ``objective``; ``objective`` returns the full training loss of a
    batch and its gradient for every parameter.
    """
    kind = None
    category = None
    needs_text = False
    HYPERPARAMETERS = ('latent_dim',)

    def __init__(self, params, hyper, n_users, n_items, context=None):
        self.params = params
        self.hyper = dict(hyper)
        self.n_users = n_users
        self.n_items = n_items
        self.context = context
        self.version = 0
        if self.needs_text and context is None:
            raise ConfigurationError(f'{self.kind} needs review documents')

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        """Create a model with freshly initialised parameters."""
        raise NotImplementedError

    @property
    def latent_dim(self):
        return int(self.hyper['latent_dim'])

    def check_indices(self, users, items):
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        if users.size and (users.min() < 0 or users.max() >= self.n_users):
            raise CorruptIndexError(
                f'User index outside [0, {self.n_users}); '
                'the id mapping does not match the model'
            )
        if items.size and (items.min() < 0 or items.max() >= self.n_items):
            raise CorruptIndexError(
                f'Item index outside [0, {self.n_items}); '
                'the id mapping does not match the model'
            )
        return users, items

    def score_pairs(self, users, items):
        """Scores for aligned arrays of user and item indices."""
        raise NotImplementedError

    def score(self, user, item):
        return float(self.score_pairs([user], [item])[0])

    def score_items(self, user, items=None):
        """Scores of one user against ``items`` (all items by default)."""
        if items is None:
            items = np.arange(self.n_items)
        items = np.asarray(items, dtype=np.int64)
        users = np.full(items.shape, user, dtype=np.int64)
        return self.score_pairs(users, items)

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        """Return ``(loss, grads)`` of the full training objective."""
        raise NotImplementedError

    def end_epoch(self, epoch, rng):
        """Hook run by the training engine after each epoch."""

    def mark_updated(self):
        self.version += 1

    def hyperparameters(self):
        return dict(self.hyper)

    def zero_grads(self):
        return {name: np.zeros_like(value) for name, value in
                self.params.items()}


def uniform_init(rng, shape):
    """Seeded uniform(-0.1, 0.1) initialisation."""
    return rng.uniform(-INIT_RANGE, INIT_RANGE, size=shape)


def pick_hyperparameters(model_class, values):
    """Select the hyperparameters ``model_class`` declares from ``values``."""
    missing = [k for k in model_class.HYPERPARAMETERS if k not in values]
    if missing:
        raise ConfigurationError(
            f'{model_class.kind} is missing hyperparameters: '
            f'{", ".join(missing)}'
        )
    return {key: values[key] for key in model_class.HYPERPARAMETERS}
