"""
Tests for review documents and embedding tables.
"""
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from core.tests.factories import interaction, toy_split, toy_text
from ingest.records import Dataset, Split
from text.documents import (
    ITEM,
    build_document,
    build_documents,
    read_documents,
    write_documents,
)
from text.embeddings import load_embeddings, random_embeddings
from text.vocabulary import build_vocab


def words(prefix, count):
    return ' '.join(f'{prefix}{idx}' for idx in range(count))


def manual_split(train, test, users, items):
    return Split(
        train=Dataset(interactions=train, users=users, items=items),
        test=test, seed=0,
    )


class DocumentTests(SimpleTestCase):
    """Test build_document and build_documents."""

    def setUp(self):
        self.train = [
            interaction('u1', 'i1', review=words('first', 600), timestamp=1),
            interaction('u1', 'i3', review=words('second', 600),
                        timestamp=2),
            interaction('u2', 'i1', review='plain words', timestamp=3),
        ]
        self.split = manual_split(
            self.train, [('u2', 'i2')], ('u1', 'u2'), ('i1', 'i2', 'i3'),
        )
        self.vocab = build_vocab(x.review for x in self.train)

    def test_truncated_in_time_order(self):
        """Test two 600-token reviews keep the first and 400 of the second."""
        doc = build_document('u1', self.split, self.vocab, cap=1000)

        expected = self.vocab.encode(
            words('first', 600).split() + words('second', 400).split()
        )
        self.assertEqual(list(doc.tokens), expected)

    def test_test_only_owner_is_empty(self):
        """Test an item reviewed only in the test split has no tokens."""
        doc = build_document('i2', self.split, self.vocab, kind=ITEM)

        self.assertEqual(doc.tokens, ())

    def test_unknown_owner(self):
        """Test a document for an unknown owner raises."""
        with self.assertRaises(KeyError):
            build_document('nobody', self.split, self.vocab)

    def test_test_reviews_never_leak(self):
        """Test tokens only come from train reviews."""
        test_review = interaction('u2', 'i2', review='secretword')
        vocab = build_vocab(
            [x.review for x in self.train] + [test_review.review]
        )

        documents = build_documents(self.split, vocab)

        secret = vocab.lookup('secretword')
        for doc in documents.users + documents.items:
            self.assertNotIn(secret, doc.tokens)

    def test_batch_matches_single(self):
        """Test building all documents agrees with building one."""
        documents = build_documents(self.split, self.vocab, cap=50)

        self.assertEqual(
            documents.user(0),
            build_document('u1', self.split, self.vocab, cap=50),
        )
        self.assertEqual(documents.empty_counts(), (0, 1))

    def test_file_round_trip(self):
        """Test documents read back aligned with the split."""
        split = toy_split(n_users=20, n_items=10, n_clusters=2)
        vocab, documents = toy_text(split, cap=30)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'documents.tsv')
            write_documents(documents, path)
            loaded = read_documents(path, split, vocab)

        self.assertEqual(loaded.users, documents.users)
        self.assertEqual(loaded.items, documents.items)


class EmbeddingTests(SimpleTestCase):
    """Test loading embedding tables."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.vocab = build_vocab(['alpha beta gamma'])

    def write(self, text):
        path = os.path.join(self.tmp.name, 'vectors.txt')
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path

    def test_vectors_aligned_with_vocab(self):
        """Test known tokens get their file vectors."""
        path = self.write('2 3\nbeta 1 2 3\nunrelated 0 0 0\n')

        table = load_embeddings(path, self.vocab)

        self.assertEqual(table.dim, 3)
        self.assertEqual(len(table), len(self.vocab))
        np.testing.assert_array_equal(
            table.matrix[self.vocab.lookup('beta')], [1.0, 2.0, 3.0])

    def test_missing_tokens_seeded(self):
        """Test missing tokens get the same seeded vectors every time."""
        path = self.write('beta 1 2\n')

        first = load_embeddings(path, self.vocab, seed=3)
        second = load_embeddings(path, self.vocab, seed=3)

        np.testing.assert_array_equal(first.matrix, second.matrix)
        self.assertTrue(np.all(np.abs(
            first.matrix[self.vocab.lookup('alpha')]) <= 0.1))

    def test_dimension_mismatch(self):
        """Test a line with the wrong width raises."""
        path = self.write('alpha 1 2\nbeta 1 2 3\n')

        with self.assertRaisesRegex(ValueError, 'expected 2 values'):
            load_embeddings(path, self.vocab)

    def test_random_table_range(self):
        """Test random tables stay within the init range."""
        table = random_embeddings(5, 4, np.random.default_rng(0))

        self.assertEqual(table.matrix.shape, (5, 4))
        self.assertLessEqual(np.abs(table.matrix).max(), 0.1)
