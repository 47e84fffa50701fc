"""
Per-user and per-item review documents built from the train split only.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from text.tokenizer import load_stopwords, tokenize

logger = logging.getLogger(__name__)

DEFAULT_DOC_CAP = 1000
USER = 'user'
ITEM = 'item'


@dataclass(frozen=True)
class Document:
    """Token ids of an owner's concatenated train reviews."""
    owner: str
    tokens: tuple = ()
    kind: str = USER

    @cached_property
    def ids(self):
        ids = np.asarray(self.tokens, dtype=np.int64)
        ids.setflags(write=False)
        return ids

    def __len__(self):
        return len(self.tokens)


def _owner_interactions(owner, split, kind):
    grouped = split.train.by_user if kind == USER else split.train.by_item
    if owner not in grouped:
        raise KeyError(f'Unknown {kind} {owner!r}')
    # sorted() is stable, so equal timestamps keep corpus order
    return sorted(grouped[owner], key=lambda x: x.sort_time)


def _assemble(owner, interactions, encoded, cap, kind):
    tokens = []
    for interaction in interactions:
        if len(tokens) >= cap:
            break
        tokens.extend(encoded(interaction))
    return Document(owner=owner, tokens=tuple(tokens[:cap]), kind=kind)


def build_document(owner, split, vocab, cap=DEFAULT_DOC_CAP, kind=USER,
                   stopwords=None):
    """Concatenate an owner's train reviews into at most ``cap`` token ids.

    Reviews are taken in ascending timestamp order, then corpus order.
    Test-split reviews are never reachable from ``split.train``.
    """
    if stopwords is None:
        stopwords = load_stopwords()

    def encoded(interaction):
        return vocab.encode(tokenize(interaction.review, stopwords))

    interactions = _owner_interactions(owner, split, kind)
    return _assemble(owner, interactions, encoded, cap, kind)


@dataclass(frozen=True, eq=False)
class DocumentSet:
    """User and item documents aligned with the split's index maps."""
    users: tuple
    items: tuple
    vocab_size: int
    unigram: np.ndarray = None

    def user(self, index):
        return self.users[index]

    def item(self, index):
        return self.items[index]

    def empty_counts(self):
        return (
            sum(1 for doc in self.users if not doc.tokens),
            sum(1 for doc in self.items if not doc.tokens),
        )


def build_documents(split, vocab, cap=DEFAULT_DOC_CAP, stopwords=None):
    """Build every user and item document of ``split`` in one pass."""
    if stopwords is None:
        stopwords = load_stopwords()
    cache = {}

    def encoded(interaction):
        if interaction.pair not in cache:
            cache[interaction.pair] = vocab.encode(
                tokenize(interaction.review, stopwords)
            )
        return cache[interaction.pair]

    users = tuple(
        _assemble(
            user, _owner_interactions(user, split, USER), encoded, cap, USER,
        )
        for user in split.train.users
    )
    items = tuple(
        _assemble(
            item, _owner_interactions(item, split, ITEM), encoded, cap, ITEM,
        )
        for item in split.train.items
    )
    documents = DocumentSet(
        users=users, items=items, vocab_size=len(vocab),
        unigram=vocab.unigram(),
    )
    empty_users, empty_items = documents.empty_counts()
    if empty_users or empty_items:
        logger.warning(
            '%d empty user documents and %d empty item documents',
            empty_users, empty_items,
        )
    return documents


def write_documents(documents, path):
    """Write ``kind<TAB>owner<TAB>ids`` lines, users first."""
    with open(path, 'w', encoding='utf-8') as handle:
        for doc in documents.users + documents.items:
            ids = ' '.join(str(token) for token in doc.tokens)
            handle.write(f'{doc.kind}\t{doc.owner}\t{ids}\n')


def read_documents(path, split, vocab):
    """Read a documents file written for ``split``."""
    users, items = {}, {}
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            kind, owner, ids = line.rstrip('\n').split('\t')
            tokens = tuple(int(token) for token in ids.split())
            if any(token >= len(vocab) for token in tokens):
                raise ValueError(f'Token id out of range for {kind} {owner}')
            target = users if kind == USER else items
            target[owner] = Document(owner=owner, tokens=tokens, kind=kind)
    return DocumentSet(
        users=tuple(users[user] for user in split.train.users),
        items=tuple(items[item] for item in split.train.items),
        vocab_size=len(vocab),
        unigram=vocab.unigram(),
    )
