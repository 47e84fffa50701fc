"""
Two-stage evaluation: MF retrieves M candidates per user, the model
under test reranks them together with the user's test items.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from evaluation.metrics import hit_rate_at_k, ndcg_at_k
from evaluation.retrieval import rank_by_score, retrieve_top_m

logger = logging.getLogger(__name__)

DEFAULT_K = 10
DEFAULT_M = 1000


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """Retrieved items followed by any test items retrieval missed."""
    user: int
    candidates: np.ndarray
    test_items: frozenset

    def __len__(self):
        return len(self.candidates)


def build_pool(retrieval_model, split, user, M):
    retrieved = retrieve_top_m(
        retrieval_model, user, M, split.train.positives[user],
    )
    test_items = frozenset(split.test_by_user[user])
    seen = set(int(item) for item in retrieved)
    missing = sorted(item for item in test_items if item not in seen)
    candidates = np.concatenate([
        retrieved, np.asarray(missing, dtype=np.int64),
    ]).astype(np.int64)
    return CandidatePool(user=user, candidates=candidates,
                         test_items=test_items)


def build_pools(retrieval_model, split, M=DEFAULT_M, users=None):
    """One pool per user with at least one test item, in user order."""
    if users is None:
        users = sorted(split.test_by_user)
    return [build_pool(retrieval_model, split, user, M) for user in users]


@dataclass(eq=False)
class EvalReport:
    """Per-user metrics of one model on one split."""
    model: str
    category: str
    K: int
    M: int
    users: tuple
    hit_rates: np.ndarray
    ndcgs: np.ndarray
    any_hit: bool = False
    sec_per_entry: float = None
    config_hash: str = ''
    split_hash: str = ''
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.users = tuple(int(user) for user in self.users)
        self.hit_rates = np.asarray(self.hit_rates, dtype=np.float64)
        self.ndcgs = np.asarray(self.ndcgs, dtype=np.float64)
        if not len(self.users) == len(self.hit_rates) == len(self.ndcgs):
            raise ValueError('Per-user vectors must be aligned')

    @property
    def hit_rate(self):
        return float(self.hit_rates.mean())

    @property
    def ndcg(self):
        return float(self.ndcgs.mean())

    def metric(self, name):
        """Per-user vector for ``'hr'`` or ``'ndcg'``."""
        if name == 'hr':
            return self.hit_rates
        if name == 'ndcg':
            return self.ndcgs
        raise ValueError(f'Unknown metric {name!r}; choose hr or ndcg')

    def aligned_with(self, other):
        return self.users == other.users

    def as_dict(self):
        return {
            'model': self.model,
            'category': self.category,
            'K': self.K,
            'M': self.M,
            'users': list(self.users),
            'hit_rates': self.hit_rates.tolist(),
            'ndcgs': self.ndcgs.tolist(),
            'any_hit': self.any_hit,
            'sec_per_entry': self.sec_per_entry,
            'config_hash': self.config_hash,
            'split_hash': self.split_hash,
            'extra': self.extra,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def rank_pool(model, pool):
    scores = model.score_items(pool.user, pool.candidates)
    return rank_by_score(pool.candidates, scores)


def _evaluate_pool(model, pool, K, any_hit):
    ranked = rank_pool(model, pool)
    return (
        hit_rate_at_k(ranked, pool.test_items, K, any_hit=any_hit),
        ndcg_at_k(ranked, pool.test_items, K),
    )


def evaluate(model, split, retrieval_model, K=DEFAULT_K, M=DEFAULT_M,
             pools=None, workers=1, any_hit=False, model_id=None):
    """Rerank every evaluated user's pool with ``model``.

    Only users with at least one test item are evaluated. Prebuilt
    ``pools`` skip the retrieval stage; they must come from the same
    retrieval model for reports to be comparable.
    """
    if pools is None:
        pools = build_pools(retrieval_model, split, M)
    if not pools:
        raise ValueError('No user has a test item; nothing to evaluate')
    pools = sorted(pools, key=lambda pool: pool.user)

    def run(pool):
        return _evaluate_pool(model, pool, K, any_hit)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, pools))
    else:
        results = [run(pool) for pool in pools]

    report = EvalReport(
        model=model_id or model.kind,
        category=model.category,
        K=K,
        M=M,
        users=[pool.user for pool in pools],
        hit_rates=[hr for hr, _ in results],
        ndcgs=[ndcg for _, ndcg in results],
        any_hit=any_hit,
    )
    logger.info('%s: HR@%d %.4f nDCG@%d %.4f over %d users', report.model,
                K, report.hit_rate, K, report.ndcg, len(pools))
    return report


def full_ranking_report(model, split, K=DEFAULT_K, any_hit=False):
    """Rank every non-train item for every evaluated user."""
    pools = build_pools(model, split, M=split.n_items)
    return evaluate(model, split, model, K=K, M=split.n_items, pools=pools,
                    any_hit=any_hit)
