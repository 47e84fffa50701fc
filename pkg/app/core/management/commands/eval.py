"""
Django command to evaluate a trained model with retrieval and reranking.
"""
from core.management.base import PipelineCommand


class Command(PipelineCommand):
    """Write the evaluation report of the configured model"""
    help = 'Rerank retrieved candidates and report HR@K and nDCG@K'
    subcommand = 'eval'

    def add_stage_arguments(self, parser):
        parser.add_argument('--per-user', action='store_true',
                            help='also dump user<TAB>HR<TAB>nDCG rows')
        parser.add_argument('--register', action='store_true',
                            help='store the result in the database')

    def stage_options(self, options):
        return {
            'per_user': options['per_user'],
            'register': options['register'],
        }
