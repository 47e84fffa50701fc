"""
Precomputed user and item representations for the text-feature model.
"""
import hashlib
import logging

import numpy as np

from core.exceptions import StaleCacheError

logger = logging.getLogger(__name__)


def parameter_digest(params):
    """blake2b over every parameter array, in name order."""
    digest = hashlib.blake2b(digest_size=16)
    for name in sorted(params):
        digest.update(name.encode())
        digest.update(np.ascontiguousarray(params[name]).tobytes())
    return digest.hexdigest()


class RepresentationCache:
    """Scores pairs as bias + dot product over cached encodings.

    Acts as a scorer wherever a model is accepted. Any parameter update
    recorded through ``mark_updated`` after caching makes scoring raise
    ``StaleCacheError``.
    """

    def __init__(self, model, user_reps, item_reps):
        self.model = model
        self.user_reps = user_reps
        self.item_reps = item_reps
        self.version = model.version
        self.digest = parameter_digest(model.params)

    @property
    def kind(self):
        return f'{self.model.kind}-cached'

    @property
    def category(self):
        return self.model.category

    @property
    def n_users(self):
        return self.model.n_users

    @property
    def n_items(self):
        return self.model.n_items

    def is_stale(self):
        return (self.model.version != self.version
                or parameter_digest(self.model.params) != self.digest)

    def _check_fresh(self):
        if self.model.version != self.version:
            raise StaleCacheError(
                'Model parameters changed after the representations were '
                'cached; call precompute_representations again'
            )

    def score_pairs(self, users, items):
        self._check_fresh()
        users, items = self.model.check_indices(users, items)
        return self.model.item_bias[items] + np.einsum(
            'ij,ij->i', self.user_reps[users], self.item_reps[items],
        )

    def score_items(self, user, items=None):
        self._check_fresh()
        if items is None:
            self.model.check_indices([user], [])
            return self.model.item_bias + self.item_reps @ self.user_reps[user]
        items = np.asarray(items, dtype=np.int64)
        return self.score_pairs(np.full(len(items), user), items)


def precompute_representations(model, documents=None):
    """Encode every user and item document once, dropout off."""
    documents = documents or model.documents
    user_reps = np.array([
        model.user_encoder.forward(doc.ids)[0] for doc in documents.users
    ]).reshape(len(documents.users), model.latent_dim)
    item_reps = np.array([
        model.item_encoder.forward(doc.ids)[0] for doc in documents.items
    ]).reshape(len(documents.items), model.latent_dim)
    logger.info('Cached %d user and %d item representations',
                len(user_reps), len(item_reps))
    return RepresentationCache(model, user_reps, item_reps)
