"""
The BPR training loop.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import NonFiniteLossError
from training.optim import make_optimizer
from training.sampling import PairSampler

logger = logging.getLogger(__name__)

# sub-stream ids under the run seed
SAMPLING_STREAM = 0
MODEL_STREAM = 1
WORKER_STREAM = 2


def bpr_step(model, batch, optimizer, l2, rng=None):
    """Objective, gradients and one optimizer update for ``batch``.

    Returns the batch loss. A NaN or infinite loss aborts before the
    parameters are touched.
    """
    if not len(batch):
        raise ValueError('Cannot step on an empty batch')
    loss, grads = model.objective(batch, l2=l2, rng=rng, train_mode=True)
    if not math.isfinite(loss):
        raise NonFiniteLossError(
            f'Loss became {loss}; lower learning_rate (currently '
            f'{optimizer.learning_rate}) or raise l2'
        )
    optimizer.step(model.params, grads)
    model.mark_updated()
    return loss


@dataclass
class TrainingHistory:
    losses: list = field(default_factory=list)
    elapsed_ms: list = field(default_factory=list)

    def log_lines(self):
        return [
            f'{epoch}\t{loss:.6f}\t{elapsed}'
            for epoch, (loss, elapsed) in enumerate(
                zip(self.losses, self.elapsed_ms), start=1)
        ]


class Trainer:
    """Runs BPR epochs over a split's training pairs.

    With ``config.workers == 1`` training is single-threaded and a fixed
    seed reproduces the loss curve bit for bit. With more workers the
    epoch's batches are sharded over threads that update the shared
    parameters without locking; those runs are not reproducible.
    """

    def __init__(self, model, train, config, log_path=None):
        self.model = model
        self.config = config
        self.sampler = PairSampler(train, config.negatives_per_positive)
        self.optimizer = make_optimizer(config.optimizer,
                                        config.learning_rate)
        self.log_path = log_path
        self.sampling_rng = np.random.default_rng(
            [config.seed, SAMPLING_STREAM])
        self.model_rng = np.random.default_rng([config.seed, MODEL_STREAM])
        self.history = TrainingHistory()
        if hasattr(self.optimizer, 'prepare'):
            self.optimizer.prepare(model.params)
        for message in config.range_warnings():
            logger.warning(message)

    def step(self, batch, rng):
        return bpr_step(
            self.model, batch, self.optimizer, self.config.l2, rng,
        )

    def _run_shard(self, batches, rng):
        total = 0.0
        for batch in batches:
            total += self.step(batch, rng) * len(batch)
        return total

    def run_epoch(self, epoch):
        batches = list(self.sampler.batches(
            self.sampling_rng, self.config.batch_size,
        ))
        if self.config.workers <= 1:
            total = self._run_shard(batches, self.model_rng)
        else:
            workers = self.config.workers
            shards = [batches[k::workers] for k in range(workers)]
            rngs = [
                np.random.default_rng(
                    [self.config.seed, WORKER_STREAM, epoch, k])
                for k in range(workers)
            ]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                total = sum(pool.map(self._run_shard, shards, rngs))
        self.model.end_epoch(epoch, self.model_rng)
        return total / max(1, len(self.sampler))

    def fit(self):
        """Train for ``config.epochs`` epochs; returns the history."""
        log = open(self.log_path, 'w') if self.log_path else None
        try:
            for epoch in range(1, self.config.epochs + 1):
                start = time.perf_counter()
                loss = self.run_epoch(epoch)
                elapsed = int(round((time.perf_counter() - start) * 1000))
                self.history.losses.append(loss)
                self.history.elapsed_ms.append(elapsed)
                line = self.history.log_lines()[-1]
                logger.info('epoch %d loss %.6f (%d ms)', epoch, loss,
                            elapsed)
                if log:
                    log.write(line + '\n')
                    log.flush()
        finally:
            if log:
                log.close()
        return self.history


def train_model(model, train, config, log_path=None):
    """Convenience wrapper: fit ``model`` and return its history."""
    return Trainer(model, train, config, log_path=log_path).fit()
