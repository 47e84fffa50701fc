"""
Paragraph-vector style generative loss over review documents.

The owner's factor vector plays the paragraph vector: every token of the
owner's document should score high against it and sampled noise words
low.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit


class NoiseDistribution:
    """Draws negative word ids from the training unigram distribution.

    A corpus with no counts falls back to uniform over the non-OOV ids.
    """

    def __init__(self, unigram):
        unigram = np.asarray(unigram, dtype=np.float64)
        if unigram.sum() <= 0:
            unigram = np.ones_like(unigram)
            if len(unigram) > 1:
                unigram[0] = 0.0
        self.cdf = np.cumsum(unigram / unigram.sum())
        self.cdf[-1] = 1.0

    @classmethod
    def uniform(cls, vocab_size):
        return cls(np.zeros(vocab_size))

    def sample(self, rng, shape):
        ids = np.searchsorted(self.cdf, rng.random(shape), side='right')
        return np.minimum(ids, len(self.cdf) - 1).astype(np.int64)


@dataclass(frozen=True, eq=False)
class ParagraphGradients:
    """Gradient w.r.t. the owner vector plus sparse embedding rows.

    ``word_ids`` may repeat; rows for the same id must be summed.
    """
    owner: np.ndarray
    word_ids: np.ndarray
    word_rows: np.ndarray

    def dense(self, vocab_size):
        grad = np.zeros((vocab_size, len(self.owner)))
        np.add.at(grad, self.word_ids, self.word_rows)
        return grad


def pv_text_loss(owner_factor, doc, word_embeddings, negatives_per_token,
                 rng, noise=None):
    """Negative-sampling loss of ``doc`` given its owner's vector.

    loss = -sum_w [log sigma(v.e_w) + sum_neg log sigma(-v.e_neg)]

    Returns ``(loss, ParagraphGradients)``. An empty document costs
    nothing and draws no noise.
    """
    E = np.asarray(getattr(word_embeddings, 'matrix', word_embeddings))
    v = np.asarray(owner_factor, dtype=np.float64)
    if E.shape[1] != v.shape[0]:
        raise ValueError(
            f'Embedding dimension {E.shape[1]} does not match the owner '
            f'factor dimension {v.shape[0]}'
        )
    if not len(doc.tokens):
        return 0.0, ParagraphGradients(
            owner=np.zeros_like(v),
            word_ids=np.zeros(0, dtype=np.int64),
            word_rows=np.zeros((0, len(v))),
        )
    if noise is None:
        noise = NoiseDistribution.uniform(E.shape[0])
    words = doc.ids
    negatives = noise.sample(rng, (len(words), negatives_per_token))

    e_pos = E[words]
    e_neg = E[negatives]
    s_pos = e_pos @ v
    s_neg = e_neg @ v
    loss = -float(np.sum(log_expit(s_pos)) + np.sum(log_expit(-s_neg)))

    d_pos = -expit(-s_pos)
    d_neg = expit(s_neg)
    grad_owner = e_pos.T @ d_pos + np.einsum('tn,tnd->d', d_neg, e_neg)
    word_ids = np.concatenate([words, negatives.reshape(-1)])
    word_rows = np.vstack([
        d_pos[:, None] * v,
        d_neg.reshape(-1)[:, None] * v,
    ])
    return loss, ParagraphGradients(grad_owner, word_ids, word_rows)
