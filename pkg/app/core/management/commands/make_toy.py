"""
Django command to write the bundled synthetic review corpus.
"""
from django.core.management.base import BaseCommand, CommandError

from ingest.parsing import write_reviews
from ingest.synthetic import ToySpec, generate_interactions


class Command(BaseCommand):
    """Generate block-structured users and items with topical reviews"""
    help = 'Write a synthetic review file usable as --dataset'

    def add_arguments(self, parser):
        parser.add_argument('path', help='output .jsonl file')
        parser.add_argument('--cold-start', action='store_true',
                            help='four interactions per user')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--users', type=int)
        parser.add_argument('--items', type=int)
        parser.add_argument('--clusters', type=int)
        parser.add_argument('--noise', type=float)

    def handle(self, *args, **options):
        overrides = {
            key: options[option] for key, option in (
                ('n_users', 'users'), ('n_items', 'items'),
                ('n_clusters', 'clusters'), ('noise', 'noise'),
            ) if options[option] is not None
        }
        if options['cold_start']:
            spec = ToySpec.cold_start(seed=options['seed'], **overrides)
        else:
            spec = ToySpec(seed=options['seed'], **overrides)
        if spec.n_clusters < 1 or spec.n_clusters > min(spec.n_users,
                                                        spec.n_items):
            raise CommandError(
                'clusters must be between 1 and min(users, items)'
            )
        interactions = generate_interactions(spec)
        write_reviews(interactions, options['path'])
        self.stdout.write(self.style.SUCCESS(
            f'Wrote {len(interactions)} reviews to {options["path"]}'
        ))
