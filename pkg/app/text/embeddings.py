"""
Word embedding tables.
"""
import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

INIT_RANGE = 0.1


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    """A vocabulary-size by ``dim`` matrix of word vectors."""
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError('Embedding matrix must be two-dimensional')
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError('Embedding matrix has non-finite entries')

    @property
    def dim(self):
        return self.matrix.shape[1]

    def __len__(self):
        return self.matrix.shape[0]


def random_embeddings(vocab_size, dim, rng):
    """Seeded uniform(-0.1, 0.1) table."""
    return EmbeddingTable(
        rng.uniform(-INIT_RANGE, INIT_RANGE, size=(vocab_size, dim))
    )


def _is_word2vec_header(fields):
    return len(fields) == 2 and all(field.isdigit() for field in fields)


def load_embeddings(path, vocab, seed=0):
    """Read ``token v1 ... vd`` lines into a table aligned with ``vocab``.

    The dimension comes from the first vector line and every later line
    must match it. Vocabulary tokens missing from the file keep a seeded
    uniform(-0.1, 0.1) vector. A leading word2vec ``count dim`` header
    line is skipped.
    """
    rng = np.random.default_rng(seed)
    matrix = None
    dim = None
    found = 0
    with open(path, encoding='utf-8', errors='replace') as handle:
        for number, line in enumerate(handle, start=1):
            fields = line.rstrip().split(' ')
            if not line.strip():
                continue
            if number == 1 and _is_word2vec_header(fields):
                continue
            token, values = fields[0], fields[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise ValueError(f'{path}:{number}: no vector values')
                matrix = rng.uniform(
                    -INIT_RANGE, INIT_RANGE, size=(len(vocab), dim),
                )
            elif len(values) != dim:
                raise ValueError(
                    f'{path}:{number}: expected {dim} values, '
                    f'got {len(values)}'
                )
            idx = vocab.index.get(token)
            if idx is None:
                continue
            try:
                matrix[idx] = np.asarray(values, dtype=np.float64)
            except ValueError as exc:
                raise ValueError(f'{path}:{number}: {exc}') from exc
            found += 1
    if matrix is None:
        raise ValueError(f'{path}: no embedding vectors')
    logger.info(
        'Loaded %d-d embeddings for %d of %d vocabulary tokens',
        dim, found, len(vocab),
    )
    return EmbeddingTable(matrix)
