"""
JRL-style model: user and item factors double as paragraph vectors.

The text loss reads and writes the same factor rows BPR uses. With
lambda_text = 0 the text loss is never evaluated and no random numbers
are drawn for it, so training follows the BPR-MF trajectory exactly.
"""
import numpy as np

from core.base import TEXT_AS_REGULARIZER, uniform_init
from core.exceptions import ConfigurationError
from core.factors import LatentFactorModel
from textreg.coupling import GenerativeCoupling, joint_objective
from textreg.paragraph import NoiseDistribution, pv_text_loss


def project_pretrained(table, latent_dim, rng):
    """Map a pretrained table to ``latent_dim`` with a seeded projection."""
    matrix = np.asarray(table.matrix)
    projection = rng.normal(0.0, 1.0 / np.sqrt(matrix.shape[1]),
                            size=(matrix.shape[1], latent_dim))
    return matrix @ projection


class JointReviewModel(LatentFactorModel):
    kind = 'jrl'
    category = TEXT_AS_REGULARIZER
    needs_text = True
    HYPERPARAMETERS = ('latent_dim', 'lambda_text', 'text_negatives')

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        if context is None:
            raise ConfigurationError(f'{cls.kind} needs review documents')
        # factor tables first, so they match BPR-MF under the same seed
        base = LatentFactorModel.initialize(n_users, n_items, hyper, rng)
        d = int(hyper['latent_dim'])
        vocab_size = context.documents.vocab_size
        if context.embeddings is not None:
            if len(context.embeddings) != vocab_size:
                raise ConfigurationError(
                    'Pretrained embeddings do not match the vocabulary size'
                )
            embeddings = project_pretrained(context.embeddings, d, rng)
        else:
            embeddings = uniform_init(rng, (vocab_size, d))
        params = dict(base.params)
        params['word_embeddings'] = embeddings
        return cls(params, hyper, n_users, n_items, context=context)

    def __init__(self, params, hyper, n_users, n_items, context=None):
        super().__init__(params, hyper, n_users, n_items, context=context)
        self.coupling = GenerativeCoupling.from_hyper(self.hyper)
        if self.params['word_embeddings'].shape[1] != self.latent_dim:
            raise ConfigurationError(
                'word_embeddings must have latent_dim columns'
            )
        self.noise = NoiseDistribution(
            self.documents.unigram if self.documents.unigram is not None
            else np.zeros(self.documents.vocab_size)
        )

    @property
    def documents(self):
        return self.context.documents

    def text_objective(self, users, items, rng):
        """Per-token paragraph loss of the given users' and items' documents.

        Returns ``(loss, grads)`` for the factor tables and the word
        embeddings; gradients are unscaled by lambda.
        """
        E = self.params['word_embeddings']
        grads = {
            'user_factors': np.zeros_like(self.user_factors),
            'item_factors': np.zeros_like(self.item_factors),
            'word_embeddings': np.zeros_like(E),
        }
        owners = (
            [('user_factors', u, self.documents.user(u)) for u in users]
            + [('item_factors', i, self.documents.item(i)) for i in items]
        )
        n_tokens = sum(len(doc) for _, _, doc in owners)
        if not n_tokens:
            return 0.0, grads
        total = 0.0
        for table, index, doc in owners:
            if not len(doc):
                continue
            loss, pv_grads = pv_text_loss(
                self.params[table][index], doc, E,
                self.coupling.negatives_per_token, rng, noise=self.noise,
            )
            total += loss
            grads[table][index] += pv_grads.owner / n_tokens
            np.add.at(grads['word_embeddings'], pv_grads.word_ids,
                      pv_grads.word_rows / n_tokens)
        return total / n_tokens, grads

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        bpr_loss, grads, _ = self.factor_objective(batch, l2)
        grads['word_embeddings'] = np.zeros_like(
            self.params['word_embeddings'])
        if not self.coupling.active:
            return bpr_loss, grads
        if rng is None:
            rng = np.random.default_rng()
        text_loss, text_grads = self.text_objective(
            np.unique(batch.users), np.unique(batch.pos), rng,
        )
        lam = self.coupling.lambda_text
        for name, grad in text_grads.items():
            grads[name] += lam * grad
        # factor_objective already folds L2 into bpr_loss
        return joint_objective(bpr_loss, text_loss, lam, 0.0), grads
