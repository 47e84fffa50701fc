"""
Tests for the paragraph-vector text loss and the joint objective.
"""
import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigurationError
from text.documents import Document
from text.embeddings import EmbeddingTable
from textreg.coupling import GenerativeCoupling, joint_objective
from textreg.paragraph import NoiseDistribution, pv_text_loss
from training.gradcheck import numeric_gradient, relative_error


def doc(*tokens):
    return Document(owner='u', tokens=tuple(tokens))


class PvTextLossTests(SimpleTestCase):
    """Test pv_text_loss."""

    def test_empty_document(self):
        """Test an empty document costs nothing and draws nothing."""
        rng = np.random.default_rng(0)
        before = rng.bit_generator.state

        loss, grads = pv_text_loss(np.ones(3), doc(), np.ones((5, 3)), 5,
                                   rng)

        self.assertEqual(loss, 0.0)
        np.testing.assert_array_equal(grads.owner, 0.0)
        self.assertFalse(grads.dense(5).any())
        self.assertEqual(rng.bit_generator.state, before)

    def test_orthogonal_terms(self):
        """Test zero scores cost 2 log 2 per token with one negative."""
        loss, _ = pv_text_loss(np.zeros(4), doc(1, 2, 3),
                               EmbeddingTable(np.ones((6, 4))), 1,
                               np.random.default_rng(1))

        self.assertAlmostEqual(loss / 3, 2 * math.log(2))

    def test_gradients_match_finite_differences(self):
        """Test owner and embedding gradients on a three-token document."""
        rng = np.random.default_rng(2)
        owner = rng.normal(size=4)
        embeddings = rng.normal(size=(7, 4))
        document = doc(1, 4, 4)

        def loss():
            return pv_text_loss(owner, document, embeddings, 3,
                                np.random.default_rng(11))[0]

        _, grads = pv_text_loss(owner, document, embeddings, 3,
                                np.random.default_rng(11))

        self.assertLess(relative_error(
            grads.owner, numeric_gradient(loss, owner)).max(), 1e-5)
        self.assertLess(relative_error(
            grads.dense(7), numeric_gradient(loss, embeddings)).max(), 1e-5)

    def test_dimension_mismatch(self):
        """Test embeddings of another width are rejected."""
        with self.assertRaises(ValueError):
            pv_text_loss(np.zeros(3), doc(1), np.zeros((4, 2)), 1,
                         np.random.default_rng(0))


class NoiseDistributionTests(SimpleTestCase):
    """Test NoiseDistribution."""

    def test_follows_unigram(self):
        """Test draws follow the unigram and never hit zero-mass ids."""
        noise = NoiseDistribution([0.0, 0.7, 0.0, 0.3])

        draws = noise.sample(np.random.default_rng(0), (20_000,))

        counts = np.bincount(draws, minlength=4)
        self.assertEqual(counts[0] + counts[2], 0)
        self.assertAlmostEqual(counts[1] / 20_000, 0.7, delta=0.02)

    def test_empty_corpus_uniform(self):
        """Test no counts fall back to uniform over non-OOV ids."""
        noise = NoiseDistribution.uniform(4)

        draws = noise.sample(np.random.default_rng(1), (3_000,))

        self.assertNotIn(0, draws)
        self.assertEqual(set(draws.tolist()), {1, 2, 3})


class JointObjectiveTests(SimpleTestCase):
    """Test joint_objective and GenerativeCoupling."""

    def test_zero_weight(self):
        """Test a zero weight keeps only the BPR and L2 terms."""
        self.assertEqual(joint_objective(1.0, 2.0, 0.0, 0.1), 1.1)
        self.assertEqual(joint_objective(1.0, float('nan'), 0.0, 0.1), 1.1)

    def test_weighted_sum(self):
        """Test bpr + lambda * text + l2."""
        self.assertAlmostEqual(joint_objective(1.0, 2.0, 0.5, 0.1), 2.1)

    def test_coupling_validation(self):
        """Test negative or infinite weights are configuration errors."""
        for value in (-1.0, float('inf')):
            with self.assertRaises(ConfigurationError):
                GenerativeCoupling(lambda_text=value)
        with self.assertRaises(ConfigurationError):
            GenerativeCoupling(negatives_per_token=0)

    def test_from_hyper(self):
        """Test coupling reads the model hyperparameters."""
        coupling = GenerativeCoupling.from_hyper(
            {'lambda_text': 0, 'text_negatives': 3})

        self.assertFalse(coupling.active)
        self.assertEqual(coupling.negatives_per_token, 3)
