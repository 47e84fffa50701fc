"""
Tests for model checkpoints and the model registry.
"""
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from core.checkpoint import (
    load_checkpoint,
    read_checkpoint_meta,
    save_checkpoint,
)
from core.exceptions import ArtifactMismatchError, ConfigurationError
from core.gmf import GeneralizedFactorModel
from core.registry import MODEL_KINDS, model_class_for

USERS = ['u0', 'u1', 'u2']
ITEMS = ['i0', 'i1', 'i2', 'i3']


class CheckpointTests(SimpleTestCase):
    """Test saving and loading checkpoints."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = os.path.join(self.tmp.name, 'model.npz')
        self.model = GeneralizedFactorModel.initialize(
            3, 4, {'latent_dim': 2, 'mlp_layers': 1, 'dropout': 0.3},
            np.random.default_rng(0),
        )
        save_checkpoint(self.model, self.path, USERS, ITEMS,
                        config_hash='cfg', split_hash='split')

    def test_round_trip(self):
        """Test a loaded model scores like the saved one."""
        loaded, meta = load_checkpoint(self.path, user_ids=USERS,
                                       item_ids=ITEMS, split_hash='split')

        self.assertIsInstance(loaded, GeneralizedFactorModel)
        self.assertEqual(loaded.hyperparameters(),
                         self.model.hyperparameters())
        self.assertEqual(meta['config_hash'], 'cfg')
        np.testing.assert_array_equal(loaded.score_items(1),
                                      self.model.score_items(1))

    def test_meta_readable_alone(self):
        """Test the meta record reads without loading parameters."""
        meta = read_checkpoint_meta(self.path)

        self.assertEqual(meta['kind'], 'bpr-gmf')
        self.assertEqual((meta['n_users'], meta['n_items']), (3, 4))

    def test_split_mismatch(self):
        """Test loading against another split is refused."""
        with self.assertRaises(ArtifactMismatchError):
            load_checkpoint(self.path, split_hash='other')

    def test_id_mapping_mismatch(self):
        """Test loading against reordered ids is refused."""
        with self.assertRaises(ArtifactMismatchError):
            load_checkpoint(self.path, user_ids=['u1', 'u0', 'u2'])


class RegistryTests(SimpleTestCase):
    """Test model_class_for."""

    def test_known_kinds(self):
        """Test every benchmark model is registered."""
        self.assertEqual(
            set(MODEL_KINDS),
            {'bpr-mf', 'bpr-gmf', 'bpr-hft', 'jrl', 'text-cnn'},
        )
        self.assertIs(model_class_for('bpr-gmf'), GeneralizedFactorModel)

    def test_unknown_kind_lists_choices(self):
        """Test an unknown kind names the valid ones."""
        with self.assertRaisesRegex(ConfigurationError, 'bpr-mf'):
            model_class_for('deepconn')
