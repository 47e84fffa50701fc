"""
Django command to wait for the results database to be available.
"""
import time
from psycopg2 import OperationalError as Psycopg2OpError

from django.db.utils import OperationalError
from django.core.management.base import BaseCommand, CommandError


class Command(BaseCommand):
    """Pause until the database answers, or give up after --attempts"""

    def add_arguments(self, parser):
        parser.add_argument('--attempts', type=int, default=60,
                            help='checks before giving up, 0 = forever')
        parser.add_argument('--interval', type=float, default=1.0,
                            help='seconds between checks')

    def handle(self, *args, **options):
        self.stdout.write('Waiting for database...')
        attempts = 0
        while True:
            try:
                self.check(databases=['default'])
                break
            except (Psycopg2OpError, OperationalError):
                attempts += 1
                if options['attempts'] and attempts >= options['attempts']:
                    raise CommandError(
                        f'Database unavailable after {attempts} attempts'
                    )
                self.stdout.write(
                    f'Database unavailable, waiting {options["interval"]:g}'
                    ' seconds...'
                )
                time.sleep(options['interval'])

        self.stdout.write(self.style.SUCCESS('Database available!'))
