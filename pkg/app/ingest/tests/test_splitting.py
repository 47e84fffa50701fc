"""
Tests for the user-level split and its manifest.
"""
import os
import tempfile

from django.test import SimpleTestCase

from core.exceptions import ArtifactMismatchError
from core.tests.factories import dataset
from ingest.splitting import (
    read_manifest,
    read_manifest_header,
    split_user_level,
    train_count,
    write_manifest,
)


def sample_dataset():
    pairs = [('solo', 'i0')]
    pairs += [('ten', f'i{i}') for i in range(10)]
    pairs += [(f'u{u}', f'i{(u + j) % 10}') for u in range(8)
              for j in range(2 + u)]
    return dataset(pairs)


class SplitTests(SimpleTestCase):
    """Test split_user_level."""

    def test_train_counts(self):
        """Test the ceiling rounding of per-user train counts."""
        self.assertEqual(train_count(10, 0.7), 7)
        self.assertEqual(train_count(1, 0.7), 1)
        self.assertEqual(train_count(3, 0.7), 3)
        self.assertEqual(train_count(30, 0.1), 3)

    def test_seven_three(self):
        """Test a ten-interaction user gets 7 train and 3 test pairs."""
        split = split_user_level(sample_dataset(), 0.7, seed=1)

        train = [x for x in split.train.interactions if x.user == 'ten']
        test = [pair for pair in split.test if pair[0] == 'ten']
        self.assertEqual((len(train), len(test)), (7, 3))

    def test_single_interaction_user_only_trains(self):
        """Test a one-interaction user contributes no test pair."""
        split = split_user_level(sample_dataset(), 0.7, seed=1)

        self.assertNotIn('solo', {user for user, _ in split.test})
        self.assertIn(0, split.train.positives[
            split.train.user_index['solo']])

    def test_partition(self):
        """Test train and test are disjoint and cover every pair."""
        ds = sample_dataset()
        split = split_user_level(ds, 0.7, seed=3)

        train_pairs = {x.pair for x in split.train.interactions}
        test_pairs = set(split.test)
        self.assertFalse(train_pairs & test_pairs)
        self.assertEqual(train_pairs | test_pairs,
                         {x.pair for x in ds.interactions})

    def test_deterministic(self):
        """Test the same seed gives the same split."""
        ds = sample_dataset()

        first = split_user_level(ds, 0.7, seed=5)
        second = split_user_level(ds, 0.7, seed=5)

        self.assertEqual(first.test, second.test)
        self.assertEqual(first.train.interactions,
                         second.train.interactions)

    def test_invalid_fraction(self):
        """Test fractions outside (0, 1) are rejected."""
        with self.assertRaises(ValueError):
            split_user_level(sample_dataset(), 1.0)


class ManifestTests(SimpleTestCase):
    """Test writing and reading split manifests."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_byte_identical(self):
        """Test identical splits write identical manifests."""
        ds = sample_dataset()
        write_manifest(split_user_level(ds, 0.7, 2), self.path('a.tsv'), 'h')
        write_manifest(split_user_level(ds, 0.7, 2), self.path('b.tsv'), 'h')

        with open(self.path('a.tsv'), 'rb') as a, \
                open(self.path('b.tsv'), 'rb') as b:
            self.assertEqual(a.read(), b.read())

    def test_round_trip(self):
        """Test a manifest reloads the exact split."""
        ds = sample_dataset()
        split = split_user_level(ds, 0.7, 4)
        write_manifest(split, self.path('split.tsv'), split_hash='abc')

        loaded, header = read_manifest(self.path('split.tsv'), ds)

        self.assertEqual(set(loaded.test), set(split.test))
        self.assertEqual(loaded.seed, 4)
        self.assertEqual(header['split_hash'], 'abc')
        self.assertEqual(read_manifest_header(self.path('split.tsv'))['seed'],
                         '4')

    def test_other_dataset_rejected(self):
        """Test a manifest does not load over a different dataset."""
        split = split_user_level(sample_dataset(), 0.7, 4)
        write_manifest(split, self.path('split.tsv'))

        with self.assertRaises(ArtifactMismatchError):
            read_manifest(self.path('split.tsv'),
                          dataset([('x', 'y'), ('x', 'z')]))
