"""
Shared plumbing of the pipeline management commands.
"""
from django.core.management.base import BaseCommand, CommandError

from core.config import add_config_arguments, config_from_options
from core.exceptions import ConfigurationError
from core.pipeline import run_pipeline


class PipelineCommand(BaseCommand):
    """Runs one pipeline stage with config file and flag overrides."""
    subcommand = None

    def add_arguments(self, parser):
        parser.add_argument(
            '--config', help='key = value experiment config file',
        )
        add_config_arguments(parser)
        self.add_stage_arguments(parser)

    def add_stage_arguments(self, parser):
        """Extra flags of one stage."""

    def stage_options(self, options):
        return {}

    def handle(self, *args, **options):
        try:
            config = config_from_options(options)
        except ConfigurationError as exc:
            raise CommandError(str(exc), returncode=2)
        self.stdout.write(
            f'{self.subcommand}: config {config.config_hash()}'
        )
        result = run_pipeline(
            self.subcommand, config, **self.stage_options(options)
        )
        if not result.ok:
            raise CommandError(result.message, returncode=result.status)
        for artifact in result.artifacts:
            self.stdout.write(f'  wrote {artifact}')
        self.stdout.write(self.style.SUCCESS(result.message))
