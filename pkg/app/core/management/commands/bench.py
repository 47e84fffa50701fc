"""
Django command to measure inference latency.
"""
from core.management.base import PipelineCommand


class Command(PipelineCommand):
    """Write seconds per scored entry for the given models"""
    help = 'Time reranking of the candidate pools, in seconds per entry'
    subcommand = 'bench'

    def add_stage_arguments(self, parser):
        parser.add_argument('--models', nargs='+',
                            help='checkpoint names, default --model')
        parser.add_argument('--bench-batch-size', dest='bench_batch_size',
                            type=int, default=512)
        parser.add_argument('--repetitions', type=int, default=5)

    def stage_options(self, options):
        return {
            'models': options['models'],
            'batch_size': options['bench_batch_size'],
            'repetitions': options['repetitions'],
        }
