"""
Inference latency in seconds per scored entry.
"""
import statistics
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np

DEFAULT_BATCH_SIZE = 512
MIN_REPETITIONS = 5

SpeedResult = namedtuple(
    'SpeedResult', ['sec_per_entry', 'samples', 'entries', 'batch_size',
                    'mode'])


def pool_entries(pools):
    """Flatten pools into aligned user and item index arrays."""
    if not pools:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    users = np.concatenate([
        np.full(len(pool.candidates), pool.user, dtype=np.int64)
        for pool in pools
    ])
    items = np.concatenate([pool.candidates for pool in pools])
    return users, items


def score_in_batches(model, users, items, batch_size=DEFAULT_BATCH_SIZE):
    scores = np.empty(len(users))
    for start in range(0, len(users), batch_size):
        stop = start + batch_size
        scores[start:stop] = model.score_pairs(users[start:stop],
                                               items[start:stop])
    return scores


def speed_benchmark(model, pools, batch_size=DEFAULT_BATCH_SIZE,
                    repetitions=MIN_REPETITIONS):
    """Median single-threaded wall time per entry over the pools.

    One untimed warm-up pass runs first. Retrieval and document
    preprocessing are not timed.
    """
    if repetitions < MIN_REPETITIONS:
        raise ValueError(f'Use at least {MIN_REPETITIONS} repetitions')
    users, items = pool_entries(pools)
    if not len(users):
        raise ValueError('No entries to score')
    score_in_batches(model, users, items, batch_size)
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        score_in_batches(model, users, items, batch_size)
        samples.append((time.perf_counter() - start) / len(users))
    return SpeedResult(statistics.median(samples), tuple(samples),
                       len(users), batch_size, 'single-thread')


def throughput_benchmark(model, pools, batch_size=DEFAULT_BATCH_SIZE,
                         workers=4, repetitions=MIN_REPETITIONS):
    """``speed_benchmark`` with batches scored on ``workers`` threads."""
    users, items = pool_entries(pools)
    if not len(users):
        raise ValueError('No entries to score')
    starts = list(range(0, len(users), batch_size))

    def run(start):
        stop = start + batch_size
        return model.score_pairs(users[start:stop], items[start:stop])

    samples = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, starts))
        for _ in range(repetitions):
            start = time.perf_counter()
            list(pool.map(run, starts))
            samples.append((time.perf_counter() - start) / len(users))
    return SpeedResult(statistics.median(samples), tuple(samples),
                       len(users), batch_size, f'threads={workers}')
