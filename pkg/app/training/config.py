"""
Training hyperparameters.
"""
import logging
from dataclasses import asdict, dataclass

logger = logging.getLogger(__name__)

# Searched ranges; values outside them are allowed but logged.
SEARCH_RANGES = {
    'learning_rate': (1e-4, 1e-1),
    'l2': (1e-4, 1e-1),
    'negatives_per_positive': (2, 10),
}


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    l2: float = 1e-4
    negatives_per_positive: int = 5
    epochs: int = 20
    batch_size: int = 512
    optimizer: str = 'adam'
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.optimizer not in ('sgd', 'adam'):
            raise ValueError(
                f'Unknown optimizer {self.optimizer!r}; choose sgd or adam'
            )
        if self.batch_size < 1 or self.epochs < 0:
            raise ValueError('batch_size must be >= 1 and epochs >= 0')
        if self.negatives_per_positive < 1:
            raise ValueError('negatives_per_positive must be >= 1')

    def range_warnings(self):
        """Messages for values outside the searched ranges."""
        messages = []
        for name, (low, high) in SEARCH_RANGES.items():
            value = getattr(self, name)
            if not low <= value <= high:
                messages.append(
                    f'{name}={value} is outside the searched range '
                    f'[{low}, {high}]'
                )
        return messages

    def as_dict(self):
        return asdict(self)
