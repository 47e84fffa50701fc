"""
Topic machinery for the HFT regularizer.

Each latent dimension is one topic (K = d). An item's topic mixture is
theta_i = softmax(kappa * q_i); topic-word rows phi_k live on the simplex;
every token of an item document carries a topic assignment z.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import softmax

logger = logging.getLogger(__name__)

PROBABILITY_FLOOR = 1e-12
DEFAULT_SMOOTHING = 0.01


@dataclass(frozen=True, eq=False)
class TopicState:
    """Topic-word distributions, peakiness and per-token assignments."""
    phi: np.ndarray
    kappa: float
    assignments: tuple

    def __post_init__(self):
        if self.phi.ndim != 2:
            raise ValueError('phi must be a K x V matrix')
        if np.any(self.phi < 0):
            raise ValueError('phi has negative entries')
        if not np.allclose(self.phi.sum(axis=1), 1.0, atol=1e-9, rtol=0):
            raise ValueError('phi rows must sum to one')

    @property
    def n_topics(self):
        return self.phi.shape[0]


def item_topic_distribution(item_factor, kappa):
    """theta = softmax(kappa * factor) along the last axis."""
    return softmax(kappa * np.asarray(item_factor, dtype=np.float64),
                   axis=-1)


def _token_weights(theta, phi, tokens):
    """(tokens, K) matrix of theta_k * phi_k,w."""
    return theta[None, :] * phi[:, tokens].T


def _resample_document(theta, phi, tokens, uniforms, hard):
    if not len(tokens):
        return np.zeros(0, dtype=np.int64)
    weights = _token_weights(theta, phi, tokens)
    if hard:
        return np.argmax(weights, axis=1).astype(np.int64)
    cumulative = np.cumsum(weights, axis=1)
    totals = cumulative[:, -1:]
    # all-zero rows fall back to a uniform draw
    zero = totals[:, 0] <= 0
    if np.any(zero):
        cumulative[zero] = np.arange(1, weights.shape[1] + 1)
        totals = cumulative[:, -1:]
    z = np.sum(cumulative < uniforms[:, None] * totals, axis=1)
    return np.minimum(z, weights.shape[1] - 1).astype(np.int64)


def gibbs_resample_assignments(state, docs, thetas, rng, hard=False,
                               workers=1):
    """Resample every token's topic with probability ∝ theta_k * phi_k,w.

    ``hard=True`` takes the argmax instead. Uniform variates for all tokens
    are drawn up front in document order, so the result does not depend
    on ``workers``.
    """
    lengths = [len(doc.tokens) for doc in docs]
    uniforms = rng.random(sum(lengths)) if not hard else None
    offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(int)

    def resample(idx):
        draws = None
        if uniforms is not None:
            draws = uniforms[offsets[idx]:offsets[idx + 1]]
        return _resample_document(
            thetas[idx], state.phi, docs[idx].ids, draws, hard,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            assignments = tuple(pool.map(resample, range(len(docs))))
    else:
        assignments = tuple(resample(idx) for idx in range(len(docs)))
    return replace(state, assignments=assignments)


def topic_word_counts(assignments, docs, n_topics, vocab_size):
    """K x V counts of (topic, word) over all assigned tokens."""
    counts = np.zeros((n_topics, vocab_size))
    for z, doc in zip(assignments, docs):
        if len(z):
            np.add.at(counts, (z, doc.ids), 1.0)
    return counts


def document_topic_counts(assignments, n_topics):
    """n_docs x K counts of assigned topics per document."""
    counts = np.zeros((len(assignments), n_topics))
    for idx, z in enumerate(assignments):
        if len(z):
            counts[idx] = np.bincount(z, minlength=n_topics)
    return counts


def reestimate_phi(assignments, docs, n_topics, vocab_size,
                   smoothing=DEFAULT_SMOOTHING):
    """Normalised topic-word counts with additive smoothing."""
    counts = topic_word_counts(assignments, docs, n_topics, vocab_size)
    counts += smoothing
    return counts / counts.sum(axis=1, keepdims=True)


def corpus_negative_log_likelihood(docs, thetas, phi, return_floored=False):
    """-sum over tokens of log(sum_k theta_k phi_k,w).

    Tokens whose mixture probability is zero contribute log(1e-12); their
    count is logged, and returned too with ``return_floored=True``.
    """
    total = 0.0
    floored = 0
    for doc, theta in zip(docs, thetas):
        if not len(doc.tokens):
            continue
        mixture = theta @ phi[:, doc.ids]
        floored += int(np.sum(mixture < PROBABILITY_FLOOR))
        total -= float(np.sum(np.log(np.maximum(mixture, PROBABILITY_FLOOR))))
    if floored:
        logger.warning(
            '%d tokens had zero mixture probability; floored at %g',
            floored, PROBABILITY_FLOOR,
        )
    if return_floored:
        return total, floored
    return total


def responsibility_counts(docs, thetas, phi):
    """n_docs x K expected topic counts under the current mixtures.

    Each token spreads one unit over topics in proportion to
    theta_k * phi_k,w.
    """
    counts = np.zeros((len(docs), phi.shape[0]))
    for idx, (doc, theta) in enumerate(zip(docs, thetas)):
        if not len(doc.tokens):
            continue
        weights = _token_weights(theta, phi, doc.ids)
        totals = np.maximum(weights.sum(axis=1, keepdims=True),
                            PROBABILITY_FLOOR)
        counts[idx] = (weights / totals).sum(axis=0)
    return counts


def mixture_gradients(factors, kappa, topic_counts):
    """Gradient of the corpus NLL w.r.t. item factors and kappa.

    ``topic_counts`` holds per-document expected topic counts n_d (see
    ``responsibility_counts``); with theta_d = softmax(kappa * q_d) the
    gradients are -kappa (n_d - N_d theta_d) and
    -sum_d q_d . (n_d - N_d theta_d).
    """
    thetas = item_topic_distribution(factors, kappa)
    residual = (topic_counts
                - topic_counts.sum(axis=1, keepdims=True) * thetas)
    return -kappa * residual, -float(np.sum(factors * residual))


def refine_round(factors, kappa, state, docs, learning_rate=0.1,
                 smoothing=DEFAULT_SMOOTHING, max_halvings=30):
    """One alternating round with deterministic hard assignments.

    A backtracking gradient step on the item factors and kappa, then
    phi re-estimation from the assignments, then hard reassignment.
    Each step is kept only if the corpus NLL does not rise, so the NLL
    never increases across rounds.

    Returns ``(factors, kappa, state, nll)``.
    """
    n_topics, vocab_size = state.phi.shape

    def nll(q, k, phi):
        return corpus_negative_log_likelihood(
            docs, item_topic_distribution(q, k), phi,
        )

    current = nll(factors, kappa, state.phi)
    counts = responsibility_counts(
        docs, item_topic_distribution(factors, kappa), state.phi,
    )
    grad_q, grad_kappa = mixture_gradients(factors, kappa, counts)
    step = learning_rate
    for _ in range(max_halvings):
        trial_q = factors - step * grad_q
        trial_kappa = kappa - step * grad_kappa
        trial = nll(trial_q, trial_kappa, state.phi)
        if trial <= current:
            factors, kappa, current = trial_q, trial_kappa, trial
            break
        step /= 2.0

    phi = reestimate_phi(
        state.assignments, docs, n_topics, vocab_size, smoothing,
    )
    trial = nll(factors, kappa, phi)
    if trial <= current:
        current = trial
    else:
        phi = state.phi
    state = TopicState(phi=phi, kappa=kappa, assignments=state.assignments)

    # the NLL does not depend on z, so reassignment keeps it fixed
    thetas = item_topic_distribution(factors, kappa)
    state = gibbs_resample_assignments(state, docs, thetas, rng=None,
                                       hard=True)
    return factors, kappa, state, current
