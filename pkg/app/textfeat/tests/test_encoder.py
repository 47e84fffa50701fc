"""
Tests for the convolutional document encoder.
"""
import numpy as np
from django.test import SimpleTestCase

from text.documents import Document
from textfeat.encoder import ConvEncoder, encode


def hand_encoder(window=2):
    """V=5, d_w=2, one filter, d=2."""
    params = {
        'enc.embedding': np.array([
            [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, -1.0],
        ]),
        'enc.conv_weight': np.array([[1.0, -1.0, 0.5, 0.5]])[:, :2 * window],
        'enc.conv_bias': np.zeros(1),
        'enc.proj_weight': np.array([[2.0, -1.0]]),
        'enc.proj_bias': np.array([0.5, 0.0]),
    }
    return ConvEncoder(params, 'enc', window)


def random_encoder(rng, window, vocab_size=12, n_filters=6, dropout=0.0):
    params = ConvEncoder.initialize(rng, 'enc', vocab_size, 4, window,
                                    n_filters, 3, init_range=1.0)
    return ConvEncoder(params, 'enc', window, dropout)


class ConvEncoderTests(SimpleTestCase):
    """Test ConvEncoder.forward."""

    def test_hand_computed(self):
        """Test windows [1, 2] and [2, 3] give pooled 1.5."""
        out = encode(hand_encoder(), Document('u', (1, 2, 3)))

        np.testing.assert_allclose(out, [3.5, -1.5])

    def test_zero_weights(self):
        """Test an all-zero encoder outputs the zero vector."""
        encoder = hand_encoder()
        for value in encoder.params.values():
            value[...] = 0.0

        np.testing.assert_array_equal(
            encode(encoder, Document('u', (1, 4, 2))), [0.0, 0.0])

    def test_empty_document(self):
        """Test an empty document is OOV padded and deterministic."""
        encoder = random_encoder(np.random.default_rng(0), 3)

        first = encode(encoder, Document('u'))
        second = encode(encoder, Document('u'))

        np.testing.assert_array_equal(first, second)
        self.assertTrue(np.all(np.isfinite(first)))

    def test_short_document_padded(self):
        """Test documents shorter than the window are padded to it."""
        encoder = hand_encoder()

        np.testing.assert_array_equal(encoder.padded([3]), [3, 0])
        np.testing.assert_allclose(encode(encoder, Document('u', (3,))),
                                   [0.5, 0.0])

    def test_window_one_ignores_order(self):
        """Test a width-one window is invariant to token order."""
        rng = np.random.default_rng(1)
        encoder = random_encoder(rng, 1)
        ids = rng.integers(0, 12, size=9)

        np.testing.assert_allclose(
            encoder.forward(ids)[0], encoder.forward(ids[::-1])[0])
        np.testing.assert_allclose(
            encoder.forward(ids)[0], encoder.forward(rng.permutation(ids))[0])

    def test_repeated_document_pools_at_least_as_high(self):
        """Test doubling a document never lowers a pooled feature."""
        rng = np.random.default_rng(2)
        encoder = random_encoder(rng, 3)
        for _ in range(20):
            ids = rng.integers(0, 12, size=rng.integers(1, 10))
            doubled = np.concatenate([ids, ids])

            self.assertTrue(np.all(
                encoder.pooled(doubled) >= encoder.pooled(ids)))

    def test_dropout_only_in_training(self):
        """Test dropout changes training passes only."""
        rng = np.random.default_rng(3)
        encoder = random_encoder(rng, 2, n_filters=50, dropout=0.5)
        ids = rng.integers(0, 12, size=8)

        _, cache = encoder.forward(ids, train_mode=True,
                                   rng=np.random.default_rng(4))

        self.assertTrue(set(np.unique(cache.mask)) <= {0.0, 2.0})
        np.testing.assert_array_equal(encoder.forward(ids)[1].mask, 1.0)

    def test_window_width_checked(self):
        """Test conv weights must span window x word_dim inputs."""
        params = hand_encoder().params

        with self.assertRaises(ValueError):
            ConvEncoder(params, 'enc', 3)
