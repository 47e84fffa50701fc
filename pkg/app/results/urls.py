"""
URL mappings for the results app.
"""
from django.urls import path, include

from rest_framework.routers import DefaultRouter

from results import views


router = DefaultRouter()
router.register('experiments', views.ExperimentViewSet)
router.register('evaluations', views.EvalRecordViewSet)
router.register('tests', views.SignificanceTestViewSet)

app_name = 'results'

urlpatterns = [
    path('', include(router.urls)),
]
