"""
Tests for the two-stage evaluation protocol.
"""
import numpy as np
from django.test import SimpleTestCase

from core.factors import LatentFactorModel
from core.tests.factories import toy_split
from evaluation.protocol import (
    build_pool,
    build_pools,
    evaluate,
    full_ranking_report,
)
from training.config import TrainConfig
from training.engine import MODEL_STREAM, train_model


def random_mf(split, seed, latent_dim=4):
    rng = np.random.default_rng(seed)
    params = {
        'user_factors': rng.normal(size=(split.n_users, latent_dim)),
        'item_factors': rng.normal(size=(split.n_items, latent_dim)),
        'item_bias': rng.normal(size=split.n_items),
    }
    return LatentFactorModel(params, {'latent_dim': latent_dim},
                             split.n_users, split.n_items)


class ProtocolTests(SimpleTestCase):
    """Test evaluate and build_pools."""

    def setUp(self):
        self.split = toy_split(seed=0, n_users=30, n_items=24, n_clusters=3,
                               noise=0.3)

    def test_full_pool_equals_full_ranking(self):
        """Test M = |I| matches ranking the whole catalogue."""
        for seed in range(20):
            split = toy_split(seed=seed, n_users=20, n_items=15,
                              n_clusters=3, noise=0.5)
            model = random_mf(split, seed)
            retrieval = random_mf(split, seed + 100)

            two_stage = evaluate(model, split, retrieval, K=5,
                                 M=split.n_items)
            exhaustive = full_ranking_report(model, split, K=5)

            self.assertEqual(two_stage.users, exhaustive.users)
            np.testing.assert_array_equal(two_stage.hit_rates,
                                          exhaustive.hit_rates)
            np.testing.assert_array_equal(two_stage.ndcgs,
                                          exhaustive.ndcgs)

    def test_top_retrieved_test_item(self):
        """Test HR@1 is one when retrieval ranks a test item first."""
        model = random_mf(self.split, 1)
        user = min(self.split.test_by_user)
        target = min(self.split.test_by_user[user])
        model.params['item_bias'][target] = 1e6

        report = evaluate(model, self.split, model, K=1, M=5, any_hit=True)

        self.assertEqual(report.hit_rates[report.users.index(user)], 1.0)

    def test_pools_hold_test_items(self):
        """Test every pool contains the user's test items."""
        retrieval = random_mf(self.split, 2)

        for pool in build_pools(retrieval, self.split, M=1):
            self.assertTrue(pool.test_items)
            self.assertTrue(pool.test_items <= set(pool.candidates.tolist()))
            self.assertFalse(set(pool.candidates.tolist())
                             & self.split.train.positives[pool.user])

    def test_pool_without_duplicates(self):
        """Test retrieved test items are not added twice."""
        retrieval = random_mf(self.split, 3)
        user = min(self.split.test_by_user)

        pool = build_pool(retrieval, self.split, user, self.split.n_items)

        self.assertEqual(len(pool), len(set(pool.candidates.tolist())))

    def test_user_order_irrelevant(self):
        """Test shuffled pools give the same report."""
        model = random_mf(self.split, 4)
        retrieval = random_mf(self.split, 5)
        pools = build_pools(retrieval, self.split, M=6)

        ordered = evaluate(model, self.split, retrieval, K=3, pools=pools)
        shuffled = evaluate(model, self.split, retrieval, K=3,
                            pools=pools[::-1], workers=3)

        self.assertEqual(ordered.users, shuffled.users)
        np.testing.assert_array_equal(ordered.ndcgs, shuffled.ndcgs)

    def test_no_pools(self):
        """Test evaluating nobody is an error."""
        model = random_mf(self.split, 6)

        with self.assertRaises(ValueError):
            evaluate(model, self.split, model, pools=[])

    def test_report_means(self):
        """Test aggregate metrics are per-user means."""
        model = random_mf(self.split, 7)

        report = evaluate(model, self.split, model, K=5, M=10)

        self.assertAlmostEqual(report.hit_rate, report.hit_rates.mean())
        self.assertEqual(report.category, 'interaction-based')
        self.assertEqual(report.model, 'bpr-mf')


class RecoverabilityTests(SimpleTestCase):
    """Test BPR-MF recovers block-structured preferences."""

    def test_mf_recovers_clusters(self):
        """Test BPR-MF reaches HR@10 of 0.8 on clustered users."""
        split = toy_split(seed=0, n_users=200, n_items=100, n_clusters=10)
        model = LatentFactorModel.initialize(
            split.n_users, split.n_items, {'latent_dim': 16},
            np.random.default_rng([0, MODEL_STREAM]),
        )
        config = TrainConfig(learning_rate=0.05, epochs=50, batch_size=512)

        train_model(model, split.train, config)
        report = full_ranking_report(model, split, K=10)

        self.assertGreaterEqual(report.hit_rate, 0.8)
