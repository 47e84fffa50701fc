"""
The benchmark pipeline behind the management commands.

Stages communicate only through files in the output directory:

    config.txt           the effective experiment config
    dataset.jsonl        the k-core filtered corpus
    split.tsv            split manifest
    vocab.tsv            vocabulary with counts
    documents.tsv        per-user and per-item token ids
    models/<name>.npz    checkpoints; models/retrieval.npz is the shared MF
    logs/<name>.log      training logs
    reports/<name>.tsv   evaluation reports (+ .json per-user sidecar)
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from django.conf import settings

from core.base import TextContext, pick_hyperparameters
from core.checkpoint import load_checkpoint, read_checkpoint_meta, \
    save_checkpoint
from core.exceptions import ArtifactMismatchError, ConfigurationError
from core.registry import model_class_for
from evaluation.protocol import build_pools, evaluate
from evaluation.reports import read_eval_report, read_latency_table, \
    write_comparison, write_eval_report, write_latency_table, write_per_user
from evaluation.speed import speed_benchmark
from ingest.filtering import k_core_filter
from ingest.parsing import ReviewParser, write_reviews
from ingest.records import Dataset
from ingest.splitting import read_manifest, split_user_level, write_manifest
from ingest.stats import dataset_stats
from text.documents import build_documents, read_documents, write_documents
from text.embeddings import load_embeddings
from text.vocabulary import Vocabulary, build_vocab
from textfeat.cache import precompute_representations
from training.engine import MODEL_STREAM, train_model

logger = logging.getLogger(__name__)

RETRIEVAL_NAME = 'retrieval'
SUBCOMMANDS = ('prepare', 'train', 'eval', 'bench', 'report')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_MISMATCH = 4


@dataclass
class PipelineResult:
    status: int
    message: str = ''
    artifacts: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == EXIT_OK


class Workspace:
    """Paths of every artifact under one output directory."""

    def __init__(self, root):
        self.root = Path(root)

    @classmethod
    def for_config(cls, config):
        return cls(config.output_dir or settings.RECBENCH['OUTPUT_DIR'])

    config = property(lambda self: self.root / 'config.txt')
    dataset = property(lambda self: self.root / 'dataset.jsonl')
    manifest = property(lambda self: self.root / 'split.tsv')
    vocab = property(lambda self: self.root / 'vocab.tsv')
    documents = property(lambda self: self.root / 'documents.tsv')

    def checkpoint(self, name):
        return self.root / 'models' / f'{name}.npz'

    def log(self, name):
        return self.root / 'logs' / f'{name}.log'

    def report(self, name):
        return self.root / 'reports' / f'{name}.tsv'

    def per_user(self, name):
        return self.root / 'reports' / f'{name}.users.tsv'

    @property
    def latency(self):
        return self.root / 'reports' / 'latency.tsv'

    @property
    def comparison(self):
        return self.root / 'reports' / 'comparison.tsv'

    def require(self, path, hint):
        if not Path(path).exists():
            raise FileNotFoundError(f'{path} not found; run {hint} first')
        return path

    def ensure_dirs(self):
        for sub in ('models', 'logs', 'reports'):
            (self.root / sub).mkdir(parents=True, exist_ok=True)


@dataclass
class PreparedData:
    """A split with the text artifacts built from its train part."""
    split: object
    split_hash: str
    vocab: object = None
    documents: object = None


def prepare(config, workspace, workers=1):
    """Parse, filter, split and build text artifacts."""
    if not config.dataset:
        raise ConfigurationError('prepare needs a dataset path')
    workspace.root.mkdir(parents=True, exist_ok=True)
    parser = ReviewParser(workers=workers)
    with open(config.dataset, 'rb') as handle:
        interactions = parser.parse(handle)
    ds = k_core_filter(Dataset(interactions=interactions), config.k_core)
    stats = dataset_stats(ds)
    logger.info('Dataset after %d-core filtering: %s', config.k_core, stats)
    split = split_user_level(ds, config.train_fraction, config.split_seed)
    split_hash = config.split_hash()

    write_reviews(ds.interactions, workspace.dataset)
    write_manifest(split, workspace.manifest, split_hash=split_hash)
    vocab = build_vocab(
        (x.review for x in split.train.interactions), cap=config.vocab_size,
        workers=workers,
    )
    vocab.write(workspace.vocab)
    documents = build_documents(split, vocab, cap=config.doc_cap)
    write_documents(documents, workspace.documents)
    config.write(workspace.config)
    return [workspace.dataset, workspace.manifest, workspace.vocab,
            workspace.documents, workspace.config]


def load_prepared(workspace, with_text=False):
    workspace.require(workspace.manifest, 'prepare')
    with open(workspace.require(workspace.dataset, 'prepare'), 'rb') as fh:
        interactions = ReviewParser(strict=True).parse(fh)
    split, header = read_manifest(workspace.manifest,
                                  Dataset(interactions=interactions))
    data = PreparedData(split=split, split_hash=header.get('split_hash', ''))
    if with_text:
        data.vocab = Vocabulary.read(workspace.require(workspace.vocab,
                                                       'prepare'))
        data.documents = read_documents(
            workspace.require(workspace.documents, 'prepare'), split,
            data.vocab,
        )
    return data


def text_context(config, data):
    embeddings = None
    if config.embeddings:
        embeddings = load_embeddings(config.embeddings, data.vocab,
                                     seed=config.seed)
    return TextContext(documents=data.documents, embeddings=embeddings)


def build_model(config, data, kind=None, seed=None):
    """A freshly initialised model of ``kind`` (the config's by default)."""
    model_class = model_class_for(kind or config.model)
    hyper = pick_hyperparameters(model_class, config.model_hyper())
    context = text_context(config, data) if model_class.needs_text else None
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng([seed, MODEL_STREAM])
    return model_class.initialize(data.split.n_users, data.split.n_items,
                                  hyper, rng, context=context)


def train(config, workspace, retrieval=False):
    """Train the configured model, or the shared retrieval MF."""
    workspace.ensure_dirs()
    if retrieval:
        kind, name = 'bpr-mf', RETRIEVAL_NAME
        seed = settings.RECBENCH['RETRIEVAL_SEED']
    else:
        kind, name, seed = config.model, config.model, config.seed
    model_class = model_class_for(kind)
    data = load_prepared(workspace, with_text=model_class.needs_text)
    model = build_model(config, data, kind=kind, seed=seed)
    train_model(model, data.split.train, config.train_config(seed=seed),
                log_path=workspace.log(name))
    save_checkpoint(
        model, workspace.checkpoint(name), data.split.train.users,
        data.split.train.items, config_hash=config.config_hash(),
        split_hash=data.split_hash,
    )
    return [workspace.checkpoint(name), workspace.log(name)]


def load_model(config, workspace, data, name):
    path = workspace.require(workspace.checkpoint(name), f'train {name}')
    meta = read_checkpoint_meta(path)
    context = None
    if model_class_for(meta['kind']).needs_text:
        if data.documents is None:
            data = load_prepared(workspace, with_text=True)
        context = text_context(config, data)
    model, meta = load_checkpoint(
        path, context=context, user_ids=data.split.train.users,
        item_ids=data.split.train.items, split_hash=data.split_hash,
    )
    return model


def check_model_config(model, config):
    if model.latent_dim != config.latent_dim:
        raise ArtifactMismatchError(
            f'{model.kind} checkpoint has latent_dim {model.latent_dim}, '
            f'config says {config.latent_dim}'
        )


def evaluate_model(config, workspace, per_user=False, register=False):
    data = load_prepared(workspace)
    model = load_model(config, workspace, data, config.model)
    check_model_config(model, config)
    retrieval = load_model(config, workspace, data, RETRIEVAL_NAME)
    report = evaluate(
        model, data.split, retrieval, K=config.K, M=config.M,
        workers=1 if config.deterministic else config.workers,
        any_hit=config.any_hit, model_id=config.model,
    )
    report.config_hash = config.config_hash()
    report.split_hash = data.split_hash
    path = workspace.report(config.model)
    write_eval_report(report, path,
                      precision=settings.RECBENCH['REPORT_PRECISION'])
    artifacts = [path]
    if per_user:
        write_per_user(report, workspace.per_user(config.model),
                       data.split.train.users)
        artifacts.append(workspace.per_user(config.model))
    if register:
        from core.models import Experiment
        Experiment.objects.record_evaluation(config, report)
    return artifacts


def benchmark(config, workspace, models, batch_size=512, repetitions=5):
    """Latency rows for ``models``; text-cnn also gets a cached row."""
    data = load_prepared(workspace)
    retrieval = load_model(config, workspace, data, RETRIEVAL_NAME)
    pools = build_pools(retrieval, data.split, config.M)
    results = []
    for name in models:
        model = load_model(config, workspace, data, name)
        results.append((name, speed_benchmark(model, pools, batch_size,
                                              repetitions)))
        if hasattr(model, 'user_encoder'):
            cached = precompute_representations(model)
            results.append((f'{name}-cached', speed_benchmark(
                cached, pools, batch_size, repetitions)))
    write_latency_table(results, workspace.latency)
    return [workspace.latency]


def report(config, workspace, report_paths, metric='ndcg', register=False):
    if len(report_paths) < 2:
        raise ConfigurationError(
            'report needs a baseline and at least one other eval report'
        )
    reports = [read_eval_report(path) for path in report_paths]
    if workspace.latency.exists():
        latencies = read_latency_table(workspace.latency)
        for item in reports:
            item.sec_per_entry = latencies.get(item.model)
    write_comparison(reports, workspace.comparison, metric=metric,
                     precision=settings.RECBENCH['REPORT_PRECISION'])
    if register:
        from core.models import Experiment
        Experiment.objects.record_comparison(reports, metric)
    return [workspace.comparison]


def _exit_status(exc):
    if isinstance(exc, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(exc, FileNotFoundError):
        return EXIT_MISSING
    if isinstance(exc, ArtifactMismatchError):
        return EXIT_MISMATCH
    return EXIT_ERROR


def run_pipeline(subcommand, config, **options):
    """Run one stage; returns a ``PipelineResult`` instead of raising.

    Domain errors become a nonzero status with a one-line message.
    """
    workspace = Workspace.for_config(config)
    stages = {
        'prepare': lambda: prepare(config, workspace,
                                   workers=options.get('workers', 1)),
        'train': lambda: train(config, workspace,
                               retrieval=options.get('retrieval', False)),
        'eval': lambda: evaluate_model(
            config, workspace, per_user=options.get('per_user', False),
            register=options.get('register', False)),
        'bench': lambda: benchmark(
            config, workspace, options.get('models') or [config.model],
            batch_size=options.get('batch_size', 512),
            repetitions=options.get('repetitions', 5)),
        'report': lambda: report(
            config, workspace, options.get('reports', []),
            metric=options.get('metric', 'ndcg'),
            register=options.get('register', False)),
    }
    if subcommand not in stages:
        return PipelineResult(
            EXIT_CONFIG,
            f'Unknown subcommand {subcommand!r}; choose from '
            f'{", ".join(SUBCOMMANDS)}',
        )
    try:
        artifacts = stages[subcommand]()
    except (ValueError, OSError, LookupError, ArithmeticError,
            RuntimeError) as exc:
        logger.debug('%s failed', subcommand, exc_info=True)
        message = str(exc).splitlines()[0] if str(exc) else repr(exc)
        return PipelineResult(_exit_status(exc), message)
    return PipelineResult(EXIT_OK, f'{subcommand} finished',
                          [str(path) for path in artifacts])
