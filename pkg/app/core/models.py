"""
Database models for registered benchmark results.
"""
from django.db import models, transaction

from evaluation.reports import significance_tests
from evaluation.significance import is_significant


class ExperimentManager(models.Manager):
    """Writes evaluation reports into the database."""

    def for_report(self, report):
        experiment, _ = self.get_or_create(
            model=report.model,
            config_hash=report.config_hash,
            defaults={
                'category': report.category or '',
                'split_hash': report.split_hash,
            },
        )
        return experiment

    def record_evaluation(self, config, report):
        """Create or refresh the experiment and evaluation of ``report``."""
        with transaction.atomic():
            experiment = self.for_report(report)
            if config is not None:
                experiment.config = config.as_dict()
                experiment.save(update_fields=['config'])
            record, _ = EvalRecord.objects.update_or_create(
                experiment=experiment,
                k=report.K,
                m=report.M,
                any_hit=report.any_hit,
                defaults={
                    'hit_rate': report.hit_rate,
                    'ndcg': report.ndcg,
                    'n_users': len(report.users),
                    'sec_per_entry': report.sec_per_entry,
                },
            )
        return record

    def record_comparison(self, reports, metric='ndcg'):
        """Record every report and its t-test against the first one."""
        with transaction.atomic():
            records = {
                id(report): self.record_evaluation(None, report)
                for report in reports
            }
            tests = []
            for report, baseline, result in significance_tests(reports,
                                                               metric):
                tests.append(SignificanceTest.objects.create(
                    candidate=records[id(report)],
                    baseline=records[id(baseline)],
                    metric=metric,
                    t_statistic=result.t,
                    p_value=result.p,
                    significant=is_significant(result),
                ))
        return tests


class Experiment(models.Model):
    """One model trained under one experiment config."""
    model = models.CharField(max_length=64)
    category = models.CharField(max_length=64, blank=True)
    config_hash = models.CharField(max_length=64)
    split_hash = models.CharField(max_length=64, blank=True)
    config = models.JSONField(default=dict, blank=True)
    created = models.DateTimeField(auto_now_add=True)

    objects = ExperimentManager()

    class Meta:
        ordering = ['-created', 'model']
        constraints = [
            models.UniqueConstraint(fields=['model', 'config_hash'],
                                    name='unique_model_config'),
        ]

    def __str__(self):
        return f'{self.model} ({self.config_hash})'


class EvalRecord(models.Model):
    """Mean metrics of an experiment under one evaluation setting."""
    experiment = models.ForeignKey(
        Experiment,
        on_delete=models.CASCADE,
        related_name='evaluations',
    )
    k = models.PositiveIntegerField()
    m = models.PositiveIntegerField()
    any_hit = models.BooleanField(default=False)
    hit_rate = models.FloatField()
    ndcg = models.FloatField()
    n_users = models.PositiveIntegerField()
    sec_per_entry = models.FloatField(null=True, blank=True)
    created = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created']

    def __str__(self):
        return f'{self.experiment.model} HR@{self.k}={self.hit_rate:.4f}'


class SignificanceTest(models.Model):
    """Paired t-test of a candidate's per-user metric against a baseline."""
    candidate = models.ForeignKey(
        EvalRecord,
        on_delete=models.CASCADE,
        related_name='tests_as_candidate',
    )
    baseline = models.ForeignKey(
        EvalRecord,
        on_delete=models.CASCADE,
        related_name='tests_as_baseline',
    )
    metric = models.CharField(max_length=8)
    t_statistic = models.FloatField()
    p_value = models.FloatField()
    significant = models.BooleanField()
    created = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created']

    def __str__(self):
        return (f'{self.candidate.experiment.model} vs '
                f'{self.baseline.experiment.model} ({self.metric})')
