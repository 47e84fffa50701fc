"""
Django command to merge evaluation reports into a comparison table.
"""
from core.management.base import PipelineCommand


class Command(PipelineCommand):
    """Compare models with paired t-tests against the first report"""
    help = 'Merge eval reports; the first one is the baseline'
    subcommand = 'report'

    def add_stage_arguments(self, parser):
        parser.add_argument('reports', nargs='+',
                            help='two or more report files written by eval')
        parser.add_argument('--metric', choices=('hr', 'ndcg'),
                            default='ndcg',
                            help='per-user metric for the t-tests')
        parser.add_argument('--register', action='store_true',
                            help='store the comparison in the database')

    def stage_options(self, options):
        return {
            'reports': options['reports'],
            'metric': options['metric'],
            'register': options['register'],
        }
