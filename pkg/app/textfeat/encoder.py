"""
Convolutional document encoder.

embed -> valid convolution of width c -> relu -> max-pool over positions
-> dropout (training only) -> linear projection to d.
"""
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from text.vocabulary import OOV_ID

PARAMETER_NAMES = ('embedding', 'conv_weight', 'conv_bias', 'proj_weight',
                   'proj_bias')


@dataclass
class EncoderCache:
    ids: np.ndarray
    windows: np.ndarray
    preactivation: np.ndarray
    argmax: np.ndarray
    mask: np.ndarray
    hidden: np.ndarray


class ConvEncoder:
    """A view over one encoder's arrays in a model parameter dict.

    Arrays are named ``{prefix}.embedding`` (V x d_w),
    ``{prefix}.conv_weight`` (F x c*d_w), ``{prefix}.conv_bias`` (F),
    ``{prefix}.proj_weight`` (F x d) and ``{prefix}.proj_bias`` (d).
    """

    def __init__(self, params, prefix, window, dropout=0.0):
        self.params = params
        self.prefix = prefix
        self.window = int(window)
        self.dropout = float(dropout)
        if self.conv_weight.shape[1] != self.window * self.word_dim:
            raise ValueError(
                f'{prefix}: conv_weight width {self.conv_weight.shape[1]} '
                f'!= window {self.window} x word_dim {self.word_dim}'
            )

    @classmethod
    def initialize(cls, rng, prefix, vocab_size, word_dim, window,
                   n_filters, out_dim, init_range=0.1, embedding=None):
        """Fresh parameters, returned as a name -> array dict."""
        if embedding is None:
            embedding = rng.uniform(-init_range, init_range,
                                    size=(vocab_size, word_dim))
        return {
            f'{prefix}.embedding': embedding,
            f'{prefix}.conv_weight': rng.uniform(
                -init_range, init_range, size=(n_filters, window * word_dim)),
            f'{prefix}.conv_bias': np.zeros(n_filters),
            f'{prefix}.proj_weight': rng.uniform(
                -init_range, init_range, size=(n_filters, out_dim)),
            f'{prefix}.proj_bias': np.zeros(out_dim),
        }

    def name(self, short):
        return f'{self.prefix}.{short}'

    def __getattr__(self, short):
        if short in PARAMETER_NAMES:
            return self.params[f'{self.prefix}.{short}']
        raise AttributeError(short)

    @property
    def word_dim(self):
        return self.embedding.shape[1]

    @property
    def out_dim(self):
        return self.proj_weight.shape[1]

    def padded(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        if len(ids) < self.window:
            ids = np.concatenate([
                ids, np.full(self.window - len(ids), OOV_ID, dtype=np.int64),
            ])
        return ids

    def pooled(self, ids):
        """Max-pooled relu features, before dropout and projection."""
        return self.forward(ids)[1].hidden

    def forward(self, ids, train_mode=False, rng=None):
        ids = self.padded(ids)
        embedded = self.embedding[ids]
        windows = sliding_window_view(
            embedded, (self.window, self.word_dim),
        )[:, 0].reshape(-1, self.window * self.word_dim)
        preactivation = windows @ self.conv_weight.T + self.conv_bias
        activated = np.maximum(preactivation, 0.0)
        argmax = np.argmax(activated, axis=0)
        pooled = activated[argmax, np.arange(activated.shape[1])]
        if train_mode and self.dropout > 0:
            keep = 1.0 - self.dropout
            mask = (rng.random(pooled.shape) < keep) / keep
        else:
            mask = np.ones_like(pooled)
        hidden = pooled * mask
        out = hidden @ self.proj_weight + self.proj_bias
        return out, EncoderCache(ids, windows, preactivation, argmax, mask,
                                 hidden)

    def near_kink(self, ids, tol=1e-4):
        """True if a pre-activation is within ``tol`` of zero, or a
        filter's two largest activations come from different windows
        and are within ``tol`` of each other."""
        cache = self.forward(ids)[1]
        preactivation = cache.preactivation
        if np.any(np.abs(preactivation) < tol):
            return True
        if preactivation.shape[0] < 2:
            return False
        order = np.argsort(-preactivation, axis=0)[:2]
        filters = np.arange(preactivation.shape[1])
        first = preactivation[order[0], filters]
        second = preactivation[order[1], filters]
        windows = cache.ids[order[:, :, None] + np.arange(self.window)]
        distinct = np.any(windows[0] != windows[1], axis=1)
        return bool(np.any(
            (first > 0) & (first - second < tol) & distinct
        ))

    def backward(self, cache, upstream, grads):
        """Accumulate gradients of ``upstream . output`` into ``grads``."""
        grads[self.name('proj_weight')] += np.outer(cache.hidden, upstream)
        grads[self.name('proj_bias')] += upstream
        d_pooled = (self.proj_weight @ upstream) * cache.mask
        filters = np.arange(len(cache.argmax))
        selected = cache.preactivation[cache.argmax, filters]
        d_selected = d_pooled * (selected > 0)
        grads[self.name('conv_weight')] += (
            d_selected[:, None] * cache.windows[cache.argmax])
        grads[self.name('conv_bias')] += d_selected
        d_windows = (d_selected[:, None] * self.conv_weight).reshape(
            len(filters), self.window, self.word_dim,
        )
        positions = cache.argmax[:, None] + np.arange(self.window)
        np.add.at(grads[self.name('embedding')], cache.ids[positions],
                  d_windows)


def encode(encoder, doc, train_mode=False, rng=None):
    """d-vector for ``doc``; documents shorter than c are OOV-padded."""
    return encoder.forward(doc.ids, train_mode=train_mode, rng=rng)[0]
