"""
Text-as-feature recommender: two convolutional encoders over review
documents, scored by inner product plus an item bias.

y(u, i) = b_i + <f_u(doc_u), f_i(doc_i)>
"""
import numpy as np

from core.base import TEXT_AS_FEATURE, Recommender
from core.exceptions import ConfigurationError
from core.factors import l2_penalty
from textfeat.encoder import ConvEncoder
from training.bpr import bpr_data_term

USER_PREFIX = 'user'
ITEM_PREFIX = 'item'

DEFAULT_WORD_DIM = 64
DEFAULT_WINDOW = 3
DEFAULT_FILTERS = 100
DEFAULT_DROPOUT = 0.5


def _initial_embedding(context, vocab_size, word_dim):
    table = context.embeddings
    if table is None or table.dim < word_dim:
        return None
    if len(table) != vocab_size:
        raise ConfigurationError(
            'Pretrained embeddings do not match the vocabulary size'
        )
    return np.array(table.matrix[:, :word_dim], dtype=np.float64)


class TextFeatureModel(Recommender):
    kind = 'text-cnn'
    category = TEXT_AS_FEATURE
    needs_text = True
    HYPERPARAMETERS = ('latent_dim', 'word_dim', 'window', 'n_filters',
                       'dropout')

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        if context is None:
            raise ConfigurationError(f'{cls.kind} needs review documents')
        window = int(hyper.get('window', DEFAULT_WINDOW))
        word_dim = int(hyper.get('word_dim', DEFAULT_WORD_DIM))
        n_filters = int(hyper.get('n_filters', DEFAULT_FILTERS))
        latent_dim = int(hyper['latent_dim'])
        if window < 1 or n_filters < 1 or word_dim < 1 or latent_dim < 1:
            raise ConfigurationError(
                'window, n_filters, word_dim and latent_dim must be >= 1'
            )
        vocab_size = context.documents.vocab_size
        params = {}
        for prefix in (USER_PREFIX, ITEM_PREFIX):
            params.update(ConvEncoder.initialize(
                rng, prefix, vocab_size, word_dim, window, n_filters,
                latent_dim,
                embedding=_initial_embedding(context, vocab_size, word_dim),
            ))
        params['item_bias'] = np.zeros(n_items)
        return cls(params, hyper, n_users, n_items, context=context)

    def __init__(self, params, hyper, n_users, n_items, context=None):
        super().__init__(params, hyper, n_users, n_items, context=context)
        window = int(self.hyper.get('window', DEFAULT_WINDOW))
        dropout = float(self.hyper.get('dropout', DEFAULT_DROPOUT))
        if not 0 <= dropout < 1:
            raise ConfigurationError('dropout must be in [0, 1)')
        self.user_encoder = ConvEncoder(params, USER_PREFIX, window, dropout)
        self.item_encoder = ConvEncoder(params, ITEM_PREFIX, window, dropout)
        for encoder in (self.user_encoder, self.item_encoder):
            if encoder.out_dim != self.latent_dim:
                raise ConfigurationError(
                    f'{encoder.prefix} encoder outputs {encoder.out_dim} '
                    f'dimensions, expected {self.latent_dim}'
                )

    @property
    def documents(self):
        return self.context.documents

    @property
    def item_bias(self):
        return self.params['item_bias']

    def encode_user(self, user):
        return self.user_encoder.forward(self.documents.user(user).ids)[0]

    def encode_item(self, item):
        return self.item_encoder.forward(self.documents.item(item).ids)[0]

    def score_pairs(self, users, items):
        """Encode both documents for every pair; no caching."""
        users, items = self.check_indices(users, items)
        scores = np.empty(len(users))
        for idx, (u, i) in enumerate(zip(users, items)):
            scores[idx] = self.item_bias[i] + \
                self.encode_user(u) @ self.encode_item(i)
        return scores

    def score_items(self, user, items=None):
        if items is None:
            items = np.arange(self.n_items)
        return self.score_pairs(np.full(len(items), user), items)

    def near_kink(self, batch, tol=1e-4):
        """True if an encoder pass of the batch sits on a relu kink or a
        max-pool tie."""
        users = np.unique(batch.users)
        items = np.unique(np.concatenate([batch.pos, batch.neg]))
        return any(
            self.user_encoder.near_kink(self.documents.user(k).ids, tol)
            for k in users
        ) or any(
            self.item_encoder.near_kink(self.documents.item(k).ids, tol)
            for k in items
        )

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        u, i, j = batch.users, batch.pos, batch.neg
        size = len(u)
        users, user_slot = np.unique(u, return_inverse=True)
        items, item_slot = np.unique(np.concatenate([i, j]),
                                     return_inverse=True)
        pos_slot, neg_slot = item_slot[:size], item_slot[size:]

        user_passes = [
            self.user_encoder.forward(self.documents.user(k).ids,
                                      train_mode=train_mode, rng=rng)
            for k in users
        ]
        item_passes = [
            self.item_encoder.forward(self.documents.item(k).ids,
                                      train_mode=train_mode, rng=rng)
            for k in items
        ]
        R_u = np.array([out for out, _ in user_passes])
        R_i = np.array([out for out, _ in item_passes])
        b = self.item_bias
        ru, ri, rj = R_u[user_slot], R_i[pos_slot], R_i[neg_slot]
        margin = b[i] - b[j] + np.einsum('ij,ij->i', ru, ri - rj)
        loss, dmargin = bpr_data_term(margin)

        grads = self.zero_grads()
        np.add.at(grads['item_bias'], i, dmargin)
        np.add.at(grads['item_bias'], j, -dmargin)
        loss += l2_penalty(self.params, grads, l2, {'item_bias': items})

        d = dmargin[:, None]
        d_users = np.zeros_like(R_u)
        d_items = np.zeros_like(R_i)
        np.add.at(d_users, user_slot, d * (ri - rj))
        np.add.at(d_items, pos_slot, d * ru)
        np.add.at(d_items, neg_slot, -d * ru)
        for (_, cache), upstream in zip(user_passes, d_users):
            self.user_encoder.backward(cache, upstream, grads)
        for (_, cache), upstream in zip(item_passes, d_items):
            self.item_encoder.backward(cache, upstream, grads)

        for encoder in (self.user_encoder, self.item_encoder):
            for short in ('conv_weight', 'proj_weight'):
                weight = self.params[encoder.name(short)]
                loss += l2 * float(np.sum(weight * weight))
                grads[encoder.name(short)] += 2.0 * l2 * weight
        return loss, grads


def score_text(model, u_doc, i_doc, item):
    """b_item + <f_u(u_doc), f_i(i_doc)> with dropout off."""
    user_rep = model.user_encoder.forward(u_doc.ids)[0]
    item_rep = model.item_encoder.forward(i_doc.ids)[0]
    return float(model.item_bias[item] + user_rep @ item_rep)
