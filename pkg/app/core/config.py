"""
Experiment configuration: ``key = value`` files plus command-line flags.
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, fields, replace

from core.exceptions import ConfigurationError
from training.config import TrainConfig

logger = logging.getLogger(__name__)

# searched ranges of model hyperparameters, on top of the training ones
MODEL_SEARCH_RANGES = {
    'dropout': (0.1, 0.8),
    'window': (3, 10),
}

SPLIT_KEYS = ('dataset', 'k_core', 'train_fraction', 'split_seed')
UNHASHED_KEYS = ('output_dir', 'workers', 'deterministic')
TRUE_VALUES = ('1', 'true', 'yes', 'on')
FALSE_VALUES = ('0', 'false', 'no', 'off')


@dataclass(frozen=True)
class ExperimentConfig:
    # data
    dataset: str = ''
    k_core: int = 5
    train_fraction: float = 0.7
    split_seed: int = 0
    vocab_size: int = 50000
    doc_cap: int = 1000
    embeddings: str = ''
    # model
    model: str = 'bpr-mf'
    latent_dim: int = 64
    mlp_layers: int = 2
    dropout: float = 0.5
    lambda_text: float = 1.0
    text_negatives: int = 5
    topic_smoothing: float = 0.01
    topic_epochs: int = 1
    word_dim: int = 64
    window: int = 3
    n_filters: int = 100
    # training
    learning_rate: float = 0.01
    l2: float = 1e-4
    negatives_per_positive: int = 5
    epochs: int = 20
    batch_size: int = 512
    optimizer: str = 'adam'
    seed: int = 0
    workers: int = 1
    deterministic: bool = False
    # evaluation
    K: int = 10
    M: int = 1000
    any_hit: bool = False
    output_dir: str = ''

    def train_config(self, seed=None):
        return TrainConfig(
            learning_rate=self.learning_rate,
            l2=self.l2,
            negatives_per_positive=self.negatives_per_positive,
            epochs=self.epochs,
            batch_size=self.batch_size,
            optimizer=self.optimizer,
            seed=self.seed if seed is None else seed,
            workers=1 if self.deterministic else self.workers,
        )

    def model_hyper(self):
        """Every model hyperparameter; each model picks what it declares."""
        return {
            'latent_dim': self.latent_dim,
            'mlp_layers': self.mlp_layers,
            'dropout': self.dropout,
            'lambda_text': self.lambda_text,
            'text_negatives': self.text_negatives,
            'topic_smoothing': self.topic_smoothing,
            'topic_epochs': self.topic_epochs,
            'word_dim': self.word_dim,
            'window': self.window,
            'n_filters': self.n_filters,
        }

    def as_dict(self):
        return asdict(self)

    def config_hash(self):
        payload = {key: value for key, value in self.as_dict().items()
                   if key not in UNHASHED_KEYS}
        return _digest(payload)

    def split_hash(self):
        return _digest({key: getattr(self, key) for key in SPLIT_KEYS})

    def range_warnings(self):
        messages = list(self.train_config().range_warnings())
        for name, (low, high) in MODEL_SEARCH_RANGES.items():
            value = getattr(self, name)
            if not low <= value <= high:
                messages.append(
                    f'{name}={value} is outside the searched range '
                    f'[{low}, {high}]'
                )
        return messages

    def write(self, path):
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(f'# config_hash = {self.config_hash()}\n')
            for key, value in self.as_dict().items():
                handle.write(f'{key} = {_format(value)}\n')


def _digest(payload):
    canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


FIELD_TYPES = {field.name: field.type for field in fields(ExperimentConfig)}


def coerce(name, raw):
    """Convert a raw string (or already typed value) for field ``name``."""
    if name not in FIELD_TYPES:
        raise ConfigurationError(
            f'Unknown config key {name!r}; valid keys: '
            f'{", ".join(sorted(FIELD_TYPES))}'
        )
    kind = FIELD_TYPES[name]
    if not isinstance(raw, str):
        return raw
    value = raw.strip()
    try:
        if kind in (bool, 'bool'):
            if value.lower() in TRUE_VALUES:
                return True
            if value.lower() in FALSE_VALUES:
                return False
            raise ValueError(value)
        if kind in (int, 'int'):
            return int(value)
        if kind in (float, 'float'):
            return float(value)
    except ValueError:
        raise ConfigurationError(
            f'{name}: cannot read {raw!r} as {getattr(kind, "__name__", kind)}'
        ) from None
    return value


def parse_config_text(text, source='<config>'):
    """Raw ``key -> string`` values of a ``key = value`` document."""
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ConfigurationError(
                f'{source}:{number}: expected "key = value", got {line!r}'
            )
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigurationError(f'{source}:{number}: empty key')
        values[key] = value
    return values


def read_config_file(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return parse_config_text(handle.read(), source=str(path))
    except OSError as exc:
        raise ConfigurationError(f'Cannot read config {path}: {exc}') from exc


def validate_config(file_values=None, overrides=None):
    """Build a config from file values with flag ``overrides`` on top.

    ``None`` overrides are ignored. Out-of-range searched
    hyperparameters are logged as warnings and kept.
    """
    merged = dict(file_values or {})
    merged.update({key: value for key, value in (overrides or {}).items()
                   if value is not None})
    typed = {name: coerce(name, value) for name, value in merged.items()}
    config = replace(ExperimentConfig(), **typed)
    _check(config)
    for message in config.range_warnings():
        logger.warning(message)
    return config


def _check(config):
    if not 0 < config.train_fraction < 1:
        raise ConfigurationError('train_fraction must be in (0, 1)')
    if config.K < 1 or config.M < 1:
        raise ConfigurationError('K and M must be at least 1')
    if config.k_core < 0:
        raise ConfigurationError('k_core must be >= 0')
    if config.latent_dim < 1:
        raise ConfigurationError('latent_dim must be at least 1')
    if config.vocab_size < 1 or config.doc_cap < 0:
        raise ConfigurationError('vocab_size must be >= 1, doc_cap >= 0')
    try:
        config.train_config()
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc


def add_config_arguments(parser):
    """One ``--kebab-case`` flag per config key, all defaulting to None."""
    for name in FIELD_TYPES:
        flag = '--' + name.replace('_', '-')
        if name in ('K', 'M'):
            flag = f'-{name}'
        if FIELD_TYPES[name] is bool:
            parser.add_argument(flag, dest=name, default=None,
                                action='store_const', const='true',
                                help=f'set {name}')
            continue
        parser.add_argument(flag, dest=name, default=None, type=str,
                            help=f'override config key {name}')


def config_from_options(options):
    """Config for a management command's parsed ``options``."""
    file_values = {}
    if options.get('config'):
        file_values = read_config_file(options['config'])
    overrides = {name: options.get(name) for name in FIELD_TYPES}
    return validate_config(file_values, overrides)

