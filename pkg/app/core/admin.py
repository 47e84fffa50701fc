"""
Django Admin customization
"""
from django.contrib import admin

from core import models


class EvalRecordInline(admin.TabularInline):
    model = models.EvalRecord
    extra = 0
    readonly_fields = ['k', 'm', 'any_hit', 'hit_rate', 'ndcg', 'n_users',
                       'sec_per_entry', 'created']


class ExperimentAdmin(admin.ModelAdmin):
    """Define the admin pages for experiments."""
    ordering = ['-created']
    list_display = ['model', 'category', 'config_hash', 'split_hash',
                    'created']
    list_filter = ['category', 'model']
    search_fields = ['model', 'config_hash']
    readonly_fields = ['created']
    inlines = [EvalRecordInline]


class EvalRecordAdmin(admin.ModelAdmin):
    list_display = ['experiment', 'k', 'm', 'hit_rate', 'ndcg',
                    'sec_per_entry']
    list_filter = ['k', 'm']


class SignificanceTestAdmin(admin.ModelAdmin):
    list_display = ['candidate', 'baseline', 'metric', 't_statistic',
                    'p_value', 'significant']
    list_filter = ['metric', 'significant']


admin.site.register(models.Experiment, ExperimentAdmin)
admin.site.register(models.EvalRecord, EvalRecordAdmin)
admin.site.register(models.SignificanceTest, SignificanceTestAdmin)
