"""
How a text objective is weighted against the BPR loss.
"""
import math
from dataclasses import dataclass

from core.exceptions import ConfigurationError

DEFAULT_LAMBDA_TEXT = 1.0
DEFAULT_TEXT_NEGATIVES = 5


@dataclass(frozen=True)
class GenerativeCoupling:
    lambda_text: float = DEFAULT_LAMBDA_TEXT
    negatives_per_token: int = DEFAULT_TEXT_NEGATIVES

    def __post_init__(self):
        if not math.isfinite(self.lambda_text) or self.lambda_text < 0:
            raise ConfigurationError(
                f'lambda_text must be finite and >= 0, got {self.lambda_text}'
            )
        if self.negatives_per_token < 1:
            raise ConfigurationError('negatives_per_token must be >= 1')

    @classmethod
    def from_hyper(cls, hyper):
        return cls(
            lambda_text=float(hyper.get('lambda_text', DEFAULT_LAMBDA_TEXT)),
            negatives_per_token=int(
                hyper.get('text_negatives', DEFAULT_TEXT_NEGATIVES)),
        )

    @property
    def active(self):
        return self.lambda_text > 0


def joint_objective(bpr_loss, text_term, lambda_text, l2_term):
    """bpr + lambda * text + l2; a zero weight ignores the text term."""
    if lambda_text == 0:
        return bpr_loss + l2_term
    return bpr_loss + lambda_text * text_term + l2_term
