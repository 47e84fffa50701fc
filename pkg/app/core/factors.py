"""
Latent factor model: BPR-MF.

y(u, i) = b_i + <p_u, q_i>
"""
import numpy as np

from core.base import INTERACTION_BASED, Recommender, uniform_init
from training.bpr import bpr_data_term


class LatentFactorModel(Recommender):
    """User and item factor tables plus item biases."""
    kind = 'bpr-mf'
    category = INTERACTION_BASED

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        d = int(hyper['latent_dim'])
        if d < 1:
            raise ValueError('latent_dim must be at least 1')
        params = {
            'user_factors': uniform_init(rng, (n_users, d)),
            'item_factors': uniform_init(rng, (n_items, d)),
            'item_bias': np.zeros(n_items),
        }
        return cls(params, hyper, n_users, n_items, context=context)

    @property
    def user_factors(self):
        return self.params['user_factors']

    @property
    def item_factors(self):
        return self.params['item_factors']

    @property
    def item_bias(self):
        return self.params['item_bias']

    def score_pairs(self, users, items):
        users, items = self.check_indices(users, items)
        return self.item_bias[items] + np.einsum(
            'ij,ij->i', self.user_factors[users], self.item_factors[items],
        )

    def score_items(self, user, items=None):
        # one matrix-vector product instead of gathering user rows
        if items is None:
            self.check_indices([user], [])
            return self.item_bias + self.item_factors @ self.user_factors[user]
        return super().score_items(user, items)

    def factor_objective(self, batch, l2, margin_extra=None):
        """BPR loss and gradients of the factor tables for ``batch``.

        ``margin_extra`` is added to the factor margin; subclasses use it
        for scores that are not a plain dot product.
        """
        u, i, j = batch.users, batch.pos, batch.neg
        P, Q, b = self.user_factors, self.item_factors, self.item_bias
        pu, qi, qj = P[u], Q[i], Q[j]
        margin = b[i] - b[j]
        if margin_extra is None:
            margin = margin + np.einsum('ij,ij->i', pu, qi - qj)
        else:
            margin = margin + margin_extra
        loss, dmargin = bpr_data_term(margin)

        grads = self.zero_grads()
        np.add.at(grads['item_bias'], i, dmargin)
        np.add.at(grads['item_bias'], j, -dmargin)
        items = np.unique(np.concatenate([i, j]))
        loss += l2_penalty(self.params, grads, l2, {
            'user_factors': np.unique(u),
            'item_factors': items,
            'item_bias': items,
        })
        if margin_extra is None:
            d = dmargin[:, None]
            np.add.at(grads['user_factors'], u, d * (qi - qj))
            np.add.at(grads['item_factors'], i, d * pu)
            np.add.at(grads['item_factors'], j, -d * pu)
        return loss, grads, dmargin

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        loss, grads, _ = self.factor_objective(batch, l2)
        return loss, grads


def score_mf(model, u, i):
    """b_i + <p_u, q_i> for one user and item index."""
    model.check_indices([u], [i])
    return float(
        model.item_bias[i]
        + model.user_factors[u] @ model.item_factors[i]
    )


def l2_penalty(params, grads, l2, touched):
    """l2 * sum of squared touched rows, each row counted once.

    ``touched`` maps a parameter name to the row indices the batch used;
    the penalty gradient is added to ``grads`` in place.
    """
    penalty = 0.0
    for name, rows in touched.items():
        values = params[name][rows]
        penalty += float(np.sum(values * values))
        grads[name][rows] += 2.0 * l2 * values
    return l2 * penalty
