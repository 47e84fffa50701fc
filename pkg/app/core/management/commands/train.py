"""
Django command to train a model on the prepared split.
"""
from core.management.base import PipelineCommand


class Command(PipelineCommand):
    """Train the configured model and write its checkpoint and log"""
    help = 'Train --model, or the shared retrieval MF with --retrieval'
    subcommand = 'train'

    def add_stage_arguments(self, parser):
        parser.add_argument(
            '--retrieval', action='store_true',
            help='train the BPR-MF model used for candidate retrieval',
        )

    def stage_options(self, options):
        return {'retrieval': options['retrieval']}
