"""
BPR-HFT: item factors regularised by a topic model over item reviews.

Scores are plain BPR-MF scores. During training the loss adds
lambda_text times the per-token negative log-likelihood of the batch's
item documents under their current topic assignments; every
``topic_epochs`` epochs the assignments are resampled and the topic-word
distributions re-estimated from counts.
"""
import logging

import numpy as np
from scipy.special import log_softmax, softmax

from core.base import TEXT_AS_REGULARIZER
from core.exceptions import ConfigurationError
from core.factors import LatentFactorModel
from textreg.coupling import GenerativeCoupling
from textreg.topics import (
    DEFAULT_SMOOTHING,
    TopicState,
    document_topic_counts,
    gibbs_resample_assignments,
    item_topic_distribution,
    reestimate_phi,
    topic_word_counts,
)

logger = logging.getLogger(__name__)

DEFAULT_TOPIC_EPOCHS = 1
INITIAL_KAPPA = 1.0
RESUME_SEED = 0


class TopicRegularizedModel(LatentFactorModel):
    kind = 'bpr-hft'
    category = TEXT_AS_REGULARIZER
    needs_text = True
    HYPERPARAMETERS = ('latent_dim', 'lambda_text', 'topic_smoothing',
                       'topic_epochs')

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        if context is None:
            raise ConfigurationError(f'{cls.kind} needs review documents')
        base = LatentFactorModel.initialize(n_users, n_items, hyper, rng)
        n_topics = int(hyper['latent_dim'])
        documents = context.documents
        assignments = tuple(
            rng.integers(0, n_topics, size=len(doc)).astype(np.int64)
            for doc in documents.items
        )
        phi = reestimate_phi(
            assignments, documents.items, n_topics, documents.vocab_size,
            float(hyper.get('topic_smoothing', DEFAULT_SMOOTHING)),
        )
        params = dict(base.params)
        params['kappa'] = np.array([INITIAL_KAPPA])
        params['topic_logits'] = np.log(phi)
        return cls(params, hyper, n_users, n_items, context=context,
                   assignments=assignments)

    def __init__(self, params, hyper, n_users, n_items, context=None,
                 assignments=None):
        super().__init__(params, hyper, n_users, n_items, context=context)
        self.coupling = GenerativeCoupling.from_hyper(self.hyper)
        expected = (self.latent_dim, self.documents.vocab_size)
        if self.params['topic_logits'].shape != expected:
            raise ConfigurationError(
                f'topic_logits has shape {self.params["topic_logits"].shape}'
                f', expected {expected}'
            )
        if assignments is None:
            # assignments are not checkpointed; draw them from the
            # restored topics
            assignments = gibbs_resample_assignments(
                self._bare_state(()), self.documents.items,
                self.item_thetas(), np.random.default_rng(RESUME_SEED),
            ).assignments
        self.assignments = tuple(assignments)

    @property
    def documents(self):
        return self.context.documents

    @property
    def kappa(self):
        return float(self.params['kappa'][0])

    @property
    def smoothing(self):
        return float(self.hyper.get('topic_smoothing', DEFAULT_SMOOTHING))

    @property
    def topic_epochs(self):
        return max(1, int(self.hyper.get('topic_epochs',
                                         DEFAULT_TOPIC_EPOCHS)))

    def phi(self):
        return softmax(self.params['topic_logits'], axis=1)

    def item_thetas(self, items=None):
        factors = self.item_factors if items is None else \
            self.item_factors[items]
        return item_topic_distribution(factors, self.kappa)

    def _bare_state(self, assignments):
        return TopicState(phi=self.phi(), kappa=self.kappa,
                          assignments=assignments)

    @property
    def topic_state(self):
        return self._bare_state(self.assignments)

    def text_objective(self, items):
        """Per-token completed-data NLL of ``items``' documents.

        Returns ``(loss, grads)`` for item_factors, kappa and
        topic_logits; gradients are unscaled by lambda.
        """
        items = np.array(
            [k for k in items if len(self.documents.item(k))],
            dtype=np.int64,
        )
        grads = {
            'item_factors': np.zeros_like(self.item_factors),
            'kappa': np.zeros(1),
            'topic_logits': np.zeros_like(self.params['topic_logits']),
        }
        if not len(items):
            return 0.0, grads
        docs = [self.documents.item(k) for k in items]
        assignments = [self.assignments[k] for k in items]
        n_topics, vocab_size = self.params['topic_logits'].shape
        n_tokens = float(sum(len(doc) for doc in docs))

        factors = self.item_factors[items]
        kappa = self.kappa
        log_theta = log_softmax(kappa * factors, axis=1)
        theta = np.exp(log_theta)
        log_phi = log_softmax(self.params['topic_logits'], axis=1)
        doc_counts = document_topic_counts(assignments, n_topics)
        word_counts = topic_word_counts(assignments, docs, n_topics,
                                        vocab_size)

        loss = -(float(np.sum(doc_counts * log_theta))
                 + float(np.sum(word_counts * log_phi))) / n_tokens

        residual = doc_counts - doc_counts.sum(axis=1, keepdims=True) * theta
        grads['item_factors'][items] = -kappa * residual / n_tokens
        grads['kappa'][0] = -float(np.sum(factors * residual)) / n_tokens
        topic_totals = word_counts.sum(axis=1, keepdims=True)
        grads['topic_logits'] = -(
            word_counts - topic_totals * np.exp(log_phi)) / n_tokens
        return loss, grads

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        loss, grads, _ = self.factor_objective(batch, l2)
        grads['kappa'] = np.zeros(1)
        grads['topic_logits'] = np.zeros_like(self.params['topic_logits'])
        lam = self.coupling.lambda_text
        if not self.coupling.active:
            return loss, grads
        items = np.unique(np.concatenate([batch.pos, batch.neg]))
        text_loss, text_grads = self.text_objective(items)
        for name, grad in text_grads.items():
            grads[name] += lam * grad
        return loss + lam * text_loss, grads

    def end_epoch(self, epoch, rng):
        """Resample assignments and re-estimate topics every few epochs."""
        if epoch % self.topic_epochs:
            return
        state = gibbs_resample_assignments(
            self.topic_state, self.documents.items, self.item_thetas(), rng,
            workers=int(self.hyper.get('workers', 1)),
        )
        self.assignments = state.assignments
        n_topics, vocab_size = self.params['topic_logits'].shape
        phi = reestimate_phi(self.assignments, self.documents.items,
                             n_topics, vocab_size, self.smoothing)
        self.params['topic_logits'][...] = np.log(phi)
        self.mark_updated()
        logger.debug('epoch %d: topic assignments resampled', epoch)

    def top_words(self, vocab, count=10):
        """The ``count`` most probable tokens of every topic."""
        phi = self.phi()
        order = np.argsort(-phi, axis=1, kind='stable')[:, :count]
        return [[vocab.tokens[w] for w in row] for row in order]
