"""
End-to-end tests of the pipeline commands on a generated corpus.
"""
import io
import os
import tempfile
import time

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from core import models
from core.config import validate_config
from core.pipeline import (
    EXIT_CONFIG,
    EXIT_MISMATCH,
    EXIT_MISSING,
    Workspace,
    run_pipeline,
)
from evaluation.reports import read_eval_report

SMALL_RUN = {
    'k_core': 5,
    'latent_dim': 8,
    'epochs': 2,
    'batch_size': 64,
    'M': 10,
    'word_dim': 8,
    'n_filters': 4,
}


class PipelineTests(TestCase):
    """Test prepare, train, eval, bench and report"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.root = cls.tmp.name
        cls.dataset = os.path.join(cls.root, 'toy.jsonl')
        call_command('make_toy', cls.dataset, '--users', '40', '--items',
                     '20', '--clusters', '4', '--noise', '0.2',
                     stdout=io.StringIO())

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()
        super().tearDownClass()

    def setUp(self):
        self.output = tempfile.mkdtemp(dir=self.root)
        self.workspace = Workspace(self.output)

    def run_command(self, name, *args, **options):
        values = dict(SMALL_RUN, dataset=self.dataset,
                      output_dir=self.output)
        values.update(options)
        out = io.StringIO()
        call_command(name, *args, stdout=out, **values)
        return out.getvalue()

    def test_mf_end_to_end(self):
        """Test prepare, train and eval of BPR-MF write every artifact"""
        start = time.perf_counter()

        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        self.run_command('train')
        out = self.run_command('eval', per_user=True)

        self.assertLess(time.perf_counter() - start, 60)
        self.assertIn('eval finished', out)
        for path in (self.workspace.manifest, self.workspace.vocab,
                     self.workspace.documents, self.workspace.config,
                     self.workspace.checkpoint('bpr-mf'),
                     self.workspace.log('bpr-mf'),
                     self.workspace.per_user('bpr-mf')):
            self.assertTrue(os.path.exists(path), path)
        report = read_eval_report(self.workspace.report('bpr-mf'))
        self.assertEqual(report.K, 10)
        self.assertTrue(0.0 <= report.hit_rate <= 1.0)
        with open(self.workspace.log('bpr-mf')) as handle:
            self.assertEqual(len(handle.read().splitlines()), 2)

    def test_deterministic_runs_match(self):
        """Test two deterministic runs write byte-identical reports"""
        contents = []
        for _ in range(2):
            output = tempfile.mkdtemp(dir=self.root)
            for stage, options in (('prepare', {}),
                                   ('train', {'retrieval': True}),
                                   ('train', {}), ('eval', {})):
                self.run_command(stage, output_dir=output,
                                 deterministic=True, workers='3',
                                 **options)
            path = Workspace(output).report('bpr-mf')
            with open(path, 'rb') as report, \
                    open(f'{path}.json', 'rb') as sidecar:
                contents.append((report.read(), sidecar.read()))

        self.assertEqual(contents[0], contents[1])

    def test_report_two_models(self):
        """Test comparing two models gives one t-test row"""
        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        for model in ('bpr-mf', 'bpr-gmf'):
            self.run_command('train', model=model)
            self.run_command('eval', model=model, register=True)

        self.run_command(
            'report',
            str(self.workspace.report('bpr-mf')),
            str(self.workspace.report('bpr-gmf')),
            register=True,
        )

        with open(self.workspace.comparison) as handle:
            lines = handle.read().splitlines()
        self.assertTrue(lines[0].startswith('# recbench report K=10 M=10'))
        self.assertTrue(lines[1].startswith('model\tHR@10\tnDCG@10'))
        tests = [line for line in lines if ' vs ' in line]
        self.assertEqual(len(tests), 1)
        self.assertTrue(tests[0].startswith('bpr-gmf vs bpr-mf\t'))
        self.assertEqual(models.Experiment.objects.count(), 2)
        self.assertEqual(models.SignificanceTest.objects.count(), 1)

    def test_report_needs_two_models(self):
        """Test a report over a single eval report exits 2"""
        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        self.run_command('train')
        self.run_command('eval')

        with self.assertRaises(CommandError) as ctx:
            self.run_command('report', str(self.workspace.report('bpr-mf')))

        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)
        self.assertFalse(self.workspace.comparison.exists())

    def test_text_models_train_and_evaluate(self):
        """Test every text model survives a checkpoint round trip"""
        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        for model in ('bpr-hft', 'jrl', 'text-cnn'):
            self.run_command('train', model=model)
            self.run_command('eval', model=model)

            report = read_eval_report(self.workspace.report(model))
            self.assertEqual(report.model, model)

    def test_bench_adds_cached_row(self):
        """Test the text-cnn benchmark also times cached representations"""
        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        self.run_command('train', model='text-cnn')

        self.run_command('bench', models=['retrieval', 'text-cnn'])

        with open(self.workspace.latency) as handle:
            labels = [line.split('\t')[0] for line in handle][1:]
        self.assertEqual(labels, ['retrieval', 'text-cnn', 'text-cnn-cached'])

    def test_unknown_model(self):
        """Test an unknown model exits 2 and lists the valid kinds"""
        self.run_command('prepare')

        with self.assertRaises(CommandError) as ctx:
            self.run_command('train', model='deepconn')

        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)
        self.assertIn('bpr-mf', str(ctx.exception))

    def test_invalid_config_value(self):
        """Test a mistyped flag exits 2"""
        with self.assertRaises(CommandError) as ctx:
            self.run_command('prepare', epochs='lots')

        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_missing_prepare(self):
        """Test training before prepare reports the missing file"""
        config = validate_config(overrides=dict(SMALL_RUN,
                                                output_dir=self.output))

        result = run_pipeline('train', config)

        self.assertEqual(result.status, EXIT_MISSING)
        self.assertIn('prepare', result.message)

    def test_latent_dim_mismatch(self):
        """Test evaluating with another latent_dim is an artifact mismatch"""
        self.run_command('prepare')
        self.run_command('train', retrieval=True)
        self.run_command('train')
        config = validate_config(overrides=dict(
            SMALL_RUN, output_dir=self.output, latent_dim=16))

        result = run_pipeline('eval', config)

        self.assertEqual(result.status, EXIT_MISMATCH)

    def test_unknown_subcommand(self):
        """Test an unknown stage is a configuration error"""
        result = run_pipeline('deploy', validate_config())

        self.assertEqual(result.status, EXIT_CONFIG)
