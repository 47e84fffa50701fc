"""
Views for the results APIs.
"""
from drf_spectacular.utils import (
    extend_schema_view,
    extend_schema,
    OpenApiParameter,
    OpenApiTypes,
)
from rest_framework import viewsets
from rest_framework.authentication import TokenAuthentication
from rest_framework.permissions import IsAuthenticated

from core.models import Experiment, EvalRecord, SignificanceTest
from results import serializers


class ResultsViewSet(viewsets.ReadOnlyModelViewSet):
    """Read-only base with token authentication."""
    authentication_classes = (TokenAuthentication,)
    permission_classes = (IsAuthenticated,)


@extend_schema_view(
    list=extend_schema(
        parameters=[
            OpenApiParameter('model', OpenApiTypes.STR,
                             description='Filter by model kind'),
            OpenApiParameter('category', OpenApiTypes.STR,
                             description='Filter by model category'),
            OpenApiParameter('split_hash', OpenApiTypes.STR,
                             description='Filter by split'),
        ]
    )
)
class ExperimentViewSet(ResultsViewSet):
    """View for registered experiments."""
    serializer_class = serializers.ExperimentDetailSerializer
    queryset = Experiment.objects.all()

    def get_queryset(self):
        """Filter experiments by the query parameters."""
        queryset = self.queryset
        for name in ('model', 'category', 'split_hash'):
            value = self.request.query_params.get(name)
            if value:
                queryset = queryset.filter(**{name: value})
        return queryset.order_by('-created', 'model')

    def get_serializer_class(self):
        if self.action == 'list':
            return serializers.ExperimentSerializer
        return self.serializer_class


@extend_schema_view(
    list=extend_schema(
        parameters=[
            OpenApiParameter('k', OpenApiTypes.INT,
                             description='Filter by cutoff K'),
            OpenApiParameter('experiment', OpenApiTypes.INT,
                             description='Filter by experiment ID'),
        ]
    )
)
class EvalRecordViewSet(ResultsViewSet):
    """View for evaluation records, best nDCG first."""
    serializer_class = serializers.EvalRecordSerializer
    queryset = EvalRecord.objects.select_related('experiment')

    def get_queryset(self):
        queryset = self.queryset
        k = self.request.query_params.get('k')
        experiment = self.request.query_params.get('experiment')
        if k:
            queryset = queryset.filter(k=int(k))
        if experiment:
            queryset = queryset.filter(experiment_id=int(experiment))
        return queryset.order_by('-ndcg', 'id')


@extend_schema_view(
    list=extend_schema(
        parameters=[
            OpenApiParameter(
                'significant', OpenApiTypes.INT, enum=[0, 1],
                description='Filter by significance at the 0.01 level',
            ),
        ]
    )
)
class SignificanceTestViewSet(ResultsViewSet):
    """View for paired t-test results."""
    serializer_class = serializers.SignificanceTestSerializer
    queryset = SignificanceTest.objects.select_related(
        'candidate__experiment', 'baseline__experiment',
    )

    def get_queryset(self):
        queryset = self.queryset
        significant = self.request.query_params.get('significant')
        if significant is not None:
            queryset = queryset.filter(significant=bool(int(significant)))
        return queryset.order_by('-created', 'id')
