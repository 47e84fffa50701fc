"""
Training vocabulary.
"""
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, partial

import numpy as np

from text.tokenizer import load_stopwords, tokenize

logger = logging.getLogger(__name__)

OOV_TOKEN = '<oov>'
OOV_ID = 0
DEFAULT_VOCAB_SIZE = 50_000


@dataclass(frozen=True)
class Vocabulary:
    """Token ids ``0..size-1``; id 0 is reserved for unknown tokens."""
    tokens: tuple
    counts: tuple
    cap: int = DEFAULT_VOCAB_SIZE

    def __post_init__(self):
        if not self.tokens or self.tokens[0] != OOV_TOKEN:
            raise ValueError(
                'The first vocabulary entry must be the OOV token'
            )
        if len(self.tokens) != len(self.counts):
            raise ValueError('tokens and counts must align')

    @cached_property
    def index(self):
        return {token: idx for idx, token in enumerate(self.tokens)}

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def lookup(self, token):
        return self.index.get(token, OOV_ID)

    def encode(self, tokens):
        """Map tokens to ids; unknown tokens map to the OOV id."""
        return [self.index.get(token, OOV_ID) for token in tokens]

    def unigram(self):
        """Training-corpus unigram distribution over ids, OOV excluded."""
        counts = np.asarray(self.counts, dtype=np.float64)
        counts[OOV_ID] = 0.0
        total = counts.sum()
        if total == 0:
            return counts
        return counts / total

    def write(self, path):
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(f'# cap={self.cap}\n')
            for token, count in zip(self.tokens, self.counts):
                handle.write(f'{token}\t{count}\n')

    @classmethod
    def read(cls, path):
        tokens, counts, cap = [], [], DEFAULT_VOCAB_SIZE
        with open(path, encoding='utf-8') as handle:
            for line in handle:
                if line.startswith('# cap='):
                    cap = int(line.strip().split('=', 1)[1])
                    continue
                token, count = line.rstrip('\n').split('\t')
                tokens.append(token)
                counts.append(int(count))
        return cls(tokens=tuple(tokens), counts=tuple(counts), cap=cap)


def _count_shard(texts, stopwords):
    counter = Counter()
    for text in texts:
        counter.update(tokenize(text, stopwords))
    return counter


def build_vocab(train_reviews, cap=DEFAULT_VOCAB_SIZE, stopwords=None,
                workers=1, shard_size=10_000):
    """Keep the ``cap - 1`` most frequent tokens of the training reviews.

    Ties in frequency are broken lexicographically. With ``workers > 1``
    shards are counted in separate processes and the counters summed,
    which gives the same ranking as a single pass.
    """
    if cap < 1:
        raise ValueError('Vocabulary cap must be at least 1')
    if stopwords is None:
        stopwords = load_stopwords()

    reviews = list(train_reviews)
    counter = Counter()
    if workers > 1 and len(reviews) > shard_size:
        shards = [
            reviews[start:start + shard_size]
            for start in range(0, len(reviews), shard_size)
        ]
        count = partial(_count_shard, stopwords=stopwords)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for shard_counter in pool.map(count, shards):
                counter.update(shard_counter)
    else:
        counter = _count_shard(reviews, stopwords)

    ranked = sorted(counter.items(), key=lambda entry: (-entry[1], entry[0]))
    ranked = ranked[:cap - 1]
    oov_count = sum(counter.values()) - sum(count for _, count in ranked)
    vocab = Vocabulary(
        tokens=(OOV_TOKEN,) + tuple(token for token, _ in ranked),
        counts=(oov_count,) + tuple(count for _, count in ranked),
        cap=cap,
    )
    logger.info(
        'Vocabulary: %d of %d distinct tokens kept (cap %d)',
        len(vocab) - 1, len(counter), cap,
    )
    return vocab
