"""
Model kinds known to the benchmark.
"""
from core.exceptions import ConfigurationError
from core.factors import LatentFactorModel
from core.gmf import GeneralizedFactorModel
from textfeat.model import TextFeatureModel
from textreg.hft import TopicRegularizedModel
from textreg.jrl import JointReviewModel

MODEL_KINDS = {
    model_class.kind: model_class
    for model_class in (
        LatentFactorModel,
        GeneralizedFactorModel,
        TopicRegularizedModel,
        JointReviewModel,
        TextFeatureModel,
    )
}


def model_class_for(kind):
    try:
        return MODEL_KINDS[kind]
    except KeyError:
        raise ConfigurationError(
            f'Unknown model {kind!r}; valid kinds: '
            f'{", ".join(sorted(MODEL_KINDS))}'
        ) from None
