"""
Shared behaviour of the study management commands.
"""
import logging

from django.core.management.base import BaseCommand, CommandError

from apps.qdyn.exceptions import NumericalError
from apps.studies.config import Subcommand, load_config
from apps.studies.runners import run
from apps.studies.tasks import run_study

logger = logging.getLogger(__name__)

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class StudyCommand(BaseCommand):
    """
    Base class for one study subcommand.

    Input and configuration errors end with exit code 2, numerical failures
    with exit code 3.
    """

    subcommand: Subcommand

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, help='Run file with key = value lines')
        parser.add_argument('--out', type=str, help='Output directory (default: QPROBE_OUTPUT_DIR)')
        parser.add_argument('--seed', type=int, help='Master random seed')
        parser.add_argument('--threads', type=int, help='Worker threads (default: QPROBE_THREADS)')
        parser.add_argument(
            '--set',
            action='append',
            default=[],
            metavar='KEY=VALUE',
            help='Override one run parameter; may be repeated',
        )
        parser.add_argument(
            '--enqueue',
            action='store_true',
            help='Queue the study on a Celery worker instead of running it here',
        )

    def handle(self, *args, **options):
        try:
            config = load_config(
                self.subcommand,
                path=options['config'],
                overrides=options['set'],
                output_dir=options['out'],
                seed=options['seed'],
                threads=options['threads'],
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT) from exc

        if options['enqueue']:
            result = run_study.delay(
                config.subcommand.value, config.raw, str(config.output_dir), config.seed, config.threads,
            )
            self.stdout.write(f'Queued {config.subcommand.value} as task {result.id}')
            return

        try:
            paths = run(config)
        except NumericalError as exc:
            logger.error('%s failed: %s', config.subcommand.value, exc)
            raise CommandError(str(exc), returncode=EXIT_NUMERICAL) from exc
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT) from exc

        self.stdout.write(self.style.SUCCESS(f'{config.subcommand.value}: wrote {len(paths)} file(s)'))
        for path in paths:
            self.stdout.write(f'   - {path}')
