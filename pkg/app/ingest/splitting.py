"""
User-level train/test splitting and the split manifest file.
"""
import logging
import math

import numpy as np

from core.exceptions import ArtifactMismatchError
from ingest.records import Dataset, Split

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1
TRAIN = 'train'
TEST = 'test'


def train_count(n, train_fraction):
    """Number of a user's ``n`` interactions that go to train.

    Rounds up, so every user keeps at least one train interaction. The
    product is rounded first to absorb float noise such as 0.1 * 30.
    """
    return min(n, math.ceil(round(train_fraction * n, 9)))


def split_user_level(ds, train_fraction=0.7, seed=0):
    """Shuffle each user's interactions and cut them train/test.

    Shuffling uses ``numpy.random.default_rng(seed)`` (PCG64), walking users
    in dataset order, so the split is reproducible across runs and
    platforms.
    """
    if not 0 < train_fraction < 1:
        raise ValueError('train_fraction must be in (0, 1)')

    rng = np.random.default_rng(seed)
    train, test = [], []
    for user in ds.users:
        interactions = ds.by_user[user]
        order = rng.permutation(len(interactions))
        cut = train_count(len(interactions), train_fraction)
        train.extend(interactions[idx] for idx in order[:cut])
        test.extend(interactions[idx].pair for idx in order[cut:])

    position = {x.pair: idx for idx, x in enumerate(ds.interactions)}
    train.sort(key=lambda x: position[x.pair])
    test.sort(key=position.__getitem__)
    split = Split(
        train=Dataset(interactions=train, users=ds.users, items=ds.items),
        test=test,
        seed=seed,
        train_fraction=train_fraction,
    )
    logger.info(
        'Split %d interactions into %d train / %d test (seed %d)',
        len(ds), len(train), len(test), seed,
    )
    return split


def write_manifest(split, path, split_hash=''):
    """Write the split as ``user<TAB>item<TAB>partition`` lines.

    Pairs follow the source dataset order so the file is byte-identical
    for identical inputs.
    """
    train_pairs = [x.pair for x in split.train.interactions]
    rows = [(pair, TRAIN) for pair in train_pairs]
    rows += [(pair, TEST) for pair in split.test]
    rows.sort(key=lambda row: (
        split.train.user_index[row[0][0]],
        split.train.item_index[row[0][1]],
    ))
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(f'# recbench split manifest v{MANIFEST_VERSION}\n')
        handle.write(f'# seed={split.seed}\n')
        handle.write(f'# train_fraction={split.train_fraction!r}\n')
        handle.write(
            f'# users={split.n_users} items={split.n_items} '
            f'train={len(train_pairs)} test={len(split.test)}\n'
        )
        handle.write(f'# split_hash={split_hash}\n')
        for (user, item), partition in rows:
            if '\t' in user or '\t' in item:
                raise ValueError(f'Tab in id {(user, item)!r}')
            handle.write(f'{user}\t{item}\t{partition}\n')


def read_manifest_header(path):
    """Return the ``key=value`` pairs from the manifest header."""
    header = {}
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            if not line.startswith('#'):
                break
            for token in line[1:].split():
                if '=' in token:
                    key, value = token.split('=', 1)
                    header[key] = value
    return header


def read_manifest(path, ds):
    """Rebuild the exact split recorded in ``path`` over dataset ``ds``."""
    header = read_manifest_header(path)
    partitions = {}
    with open(path, encoding='utf-8') as handle:
        for number, line in enumerate(handle, start=1):
            if line.startswith('#') or not line.strip():
                continue
            try:
                user, item, partition = line.rstrip('\n').split('\t')
            except ValueError as exc:
                raise ArtifactMismatchError(
                    f'{path}:{number}: expected 3 tab-separated fields'
                ) from exc
            partitions[(user, item)] = partition

    pairs = {x.pair for x in ds.interactions}
    if set(partitions) != pairs:
        raise ArtifactMismatchError(
            f'{path} does not describe the given dataset'
        )
    train = [x for x in ds.interactions if partitions[x.pair] == TRAIN]
    test = [x.pair for x in ds.interactions if partitions[x.pair] == TEST]
    split = Split(
        train=Dataset(interactions=train, users=ds.users, items=ds.items),
        test=test,
        seed=int(header.get('seed', 0)),
        train_fraction=float(header.get('train_fraction', 0.7)),
    )
    return split, header
