"""
Serializers for the results APIs.
"""
from rest_framework import serializers

from core.models import Experiment, EvalRecord, SignificanceTest


class EvalRecordSerializer(serializers.ModelSerializer):
    """Serializer for evaluation records."""
    model = serializers.CharField(source='experiment.model', read_only=True)

    class Meta:
        model = EvalRecord
        fields = (
            'id', 'experiment', 'model', 'k', 'm', 'any_hit', 'hit_rate',
            'ndcg', 'n_users', 'sec_per_entry', 'created',
        )
        read_only_fields = fields


class ExperimentSerializer(serializers.ModelSerializer):
    """Serializer for experiments."""

    class Meta:
        model = Experiment
        fields = ('id', 'model', 'category', 'config_hash', 'split_hash',
                  'created')
        read_only_fields = fields


class ExperimentDetailSerializer(ExperimentSerializer):
    """Serializer for experiment detail view."""
    evaluations = EvalRecordSerializer(many=True, read_only=True)

    class Meta(ExperimentSerializer.Meta):
        fields = ExperimentSerializer.Meta.fields + ('config', 'evaluations')
        read_only_fields = fields


class SignificanceTestSerializer(serializers.ModelSerializer):
    """Serializer for paired t-test results."""
    candidate_model = serializers.CharField(
        source='candidate.experiment.model', read_only=True,
    )
    baseline_model = serializers.CharField(
        source='baseline.experiment.model', read_only=True,
    )

    class Meta:
        model = SignificanceTest
        fields = (
            'id', 'candidate', 'candidate_model', 'baseline',
            'baseline_model', 'metric', 't_statistic', 'p_value',
            'significant', 'created',
        )
        read_only_fields = fields
