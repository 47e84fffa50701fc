"""
Django command to parse, filter and split a review corpus.
"""
from core.management.base import PipelineCommand


class Command(PipelineCommand):
    """Write the split manifest, vocabulary and documents"""
    help = 'Parse a review file, k-core filter it, split it, build text'
    subcommand = 'prepare'

    def add_stage_arguments(self, parser):
        parser.add_argument('--parse-workers', type=int, default=1,
                            help='processes used to parse the corpus')

    def stage_options(self, options):
        return {'workers': options['parse_workers']}
