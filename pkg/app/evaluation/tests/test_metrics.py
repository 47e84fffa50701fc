"""
Tests for HR@K, nDCG@K and candidate retrieval.
"""
import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigurationError
from evaluation.metrics import hit_rate_at_k, ndcg_at_k
from evaluation.retrieval import rank_by_score, retrieve_top_m


class FixedScores:
    """Scores every user the same way."""

    def __init__(self, scores):
        self.scores = np.asarray(scores, dtype=np.float64)

    def score_items(self, user, items=None):
        return self.scores.copy()


def oracle(ranked, test_items, K):
    """HR and nDCG by enumerating positions one at a time."""
    top = list(ranked)[:K]
    hits = [position for position, item in enumerate(top)
            if item in test_items]
    dcg = 0.0
    for position in hits:
        dcg += 1.0 / math.log2(position + 2)
    ideal = 0.0
    for position in range(min(K, len(test_items))):
        ideal += 1.0 / math.log2(position + 2)
    return len(hits) / len(test_items), dcg / ideal


class MetricTests(SimpleTestCase):
    """Test hit_rate_at_k and ndcg_at_k."""

    def test_single_hit_at_top(self):
        """Test one test item ranked first."""
        self.assertEqual(hit_rate_at_k(['a', 'b', 'c'], {'a'}, 10), 1.0)
        self.assertEqual(ndcg_at_k(['a', 'b', 'c'], {'a'}, 10), 1.0)

    def test_single_hit_second(self):
        """Test a test item at rank two costs 1/log2(3)."""
        self.assertAlmostEqual(ndcg_at_k(['b', 'a'], {'a'}, 10),
                               1 / math.log2(3))

    def test_hits_at_one_and_three(self):
        """Test hits at ranks 1 and 3 of two test items."""
        ranked = ['a', 'x', 'b']

        self.assertEqual(hit_rate_at_k(ranked, {'a', 'b'}, 3), 1.0)
        self.assertAlmostEqual(ndcg_at_k(ranked, {'a', 'b'}, 3),
                               1.5 / (1 + 1 / math.log2(3)))
        self.assertAlmostEqual(ndcg_at_k(ranked, {'a', 'b'}, 3), 0.9197,
                               places=4)

    def test_miss(self):
        """Test a test item outside the top K scores zero."""
        self.assertEqual(hit_rate_at_k(['x', 'y', 'a'], {'a'}, 2), 0.0)
        self.assertEqual(ndcg_at_k(['x', 'y', 'a'], {'a'}, 2), 0.0)

    def test_recall_and_any_hit(self):
        """Test recall over several test items versus any-hit."""
        ranked = ['a', 'x', 'y', 'b', 'c']

        self.assertAlmostEqual(hit_rate_at_k(ranked, {'a', 'b', 'c'}, 2),
                               1 / 3)
        self.assertEqual(
            hit_rate_at_k(ranked, {'a', 'b', 'c'}, 2, any_hit=True), 1.0)

    def test_invalid_k(self):
        """Test K must be positive."""
        for K in (0, -1):
            with self.assertRaises(ConfigurationError):
                hit_rate_at_k(['a'], {'a'}, K)
            with self.assertRaises(ConfigurationError):
                ndcg_at_k(['a'], {'a'}, K)

    def test_no_test_items(self):
        """Test users without test items cannot be scored."""
        with self.assertRaises(ValueError):
            ndcg_at_k(['a'], set(), 1)

    def test_matches_enumeration(self):
        """Test both metrics against enumeration on random rankings."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            pool = int(rng.integers(1, 15))
            ranked = list(rng.permutation(pool))
            test_items = set(rng.choice(
                pool, size=rng.integers(1, pool + 1), replace=False).tolist())
            K = int(rng.integers(1, 20))

            hr, ndcg = oracle(ranked, test_items, K)

            self.assertLess(abs(hit_rate_at_k(ranked, test_items, K) - hr),
                            1e-12)
            self.assertLess(abs(ndcg_at_k(ranked, test_items, K) - ndcg),
                            1e-12)
            self.assertLessEqual(ndcg, 1.0 + 1e-12)


class RetrievalTests(SimpleTestCase):
    """Test rank_by_score and retrieve_top_m."""

    def test_ties_by_index(self):
        """Test equal scores keep ascending item order."""
        ranked = rank_by_score([4, 2, 7, 1], [0.5, 0.9, 0.5, 0.5])

        self.assertEqual(ranked.tolist(), [2, 1, 4, 7])

    def test_excludes_train_items(self):
        """Test a train item is never retrieved."""
        scorer = FixedScores([5.0, 1.0])

        self.assertEqual(retrieve_top_m(scorer, 0, 1, {0}).tolist(), [1])

    def test_m_beyond_catalogue(self):
        """Test a large M returns every non-train item."""
        scorer = FixedScores([0.1, 0.4, 0.3, 0.2])

        retrieved = retrieve_top_m(scorer, 0, 100, {1})

        self.assertEqual(retrieved.tolist(), [2, 3, 0])

    def test_matches_sorting(self):
        """Test retrieval against a full sort of random scores."""
        rng = np.random.default_rng(1)
        for _ in range(50):
            scores = rng.integers(0, 5, size=30).astype(float)
            train = set(rng.choice(30, size=8, replace=False).tolist())
            M = int(rng.integers(1, 30))
            expected = sorted(
                (i for i in range(30) if i not in train),
                key=lambda i: (-scores[i], i),
            )[:M]

            self.assertEqual(
                retrieve_top_m(FixedScores(scores), 0, M, train).tolist(),
                expected)

    def test_invalid_m(self):
        """Test M must be at least one."""
        with self.assertRaises(ValueError):
            retrieve_top_m(FixedScores([1.0]), 0, 0)
