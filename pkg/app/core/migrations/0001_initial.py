# Generated by Django 3.2.25 on 2026-10-19 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Experiment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('model', models.CharField(max_length=64)),
                ('category', models.CharField(blank=True, max_length=64)),
                ('config_hash', models.CharField(max_length=64)),
                ('split_hash', models.CharField(blank=True, max_length=64)),
                ('config', models.JSONField(blank=True, default=dict)),
                ('created', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created', 'model'],
            },
        ),
        migrations.CreateModel(
            name='EvalRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('k', models.PositiveIntegerField()),
                ('m', models.PositiveIntegerField()),
                ('any_hit', models.BooleanField(default=False)),
                ('hit_rate', models.FloatField()),
                ('ndcg', models.FloatField()),
                ('n_users', models.PositiveIntegerField()),
                ('sec_per_entry', models.FloatField(blank=True, null=True)),
                ('created', models.DateTimeField(auto_now_add=True)),
                ('experiment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='evaluations', to='core.experiment')),
            ],
            options={
                'ordering': ['-created'],
            },
        ),
        migrations.CreateModel(
            name='SignificanceTest',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('metric', models.CharField(max_length=8)),
                ('t_statistic', models.FloatField()),
                ('p_value', models.FloatField()),
                ('significant', models.BooleanField()),
                ('created', models.DateTimeField(auto_now_add=True)),
                ('baseline', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='tests_as_baseline', to='core.evalrecord')),
                ('candidate', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='tests_as_candidate', to='core.evalrecord')),
            ],
            options={
                'ordering': ['-created'],
            },
        ),
        migrations.AddConstraint(
            model_name='experiment',
            constraint=models.UniqueConstraint(fields=('model', 'config_hash'), name='unique_model_config'),
        ),
    ]
