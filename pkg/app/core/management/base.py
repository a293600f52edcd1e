import argparse
import sys

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import EsiaError, ExitCode
from core.prng import MASK64


def u64(value: str) -> int:
    """argparse type for unsigned 64-bit seeds (decimal or 0x-prefixed hex)"""
    try:
        number = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{value!r} is not an integer')
    if not 0 <= number <= MASK64:
        raise argparse.ArgumentTypeError(f'{value!r} is not an unsigned 64-bit integer')
    return number


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{value!r} is not an integer')
    if number < 1:
        raise argparse.ArgumentTypeError(f'{value!r} must be at least 1')
    return number


def non_negative_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{value!r} is not an integer')
    if number < 0:
        raise argparse.ArgumentTypeError(f'{value!r} must not be negative')
    return number


def probability(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{value!r} is not a number')
    if not 0.0 <= number <= 1.0:
        raise argparse.ArgumentTypeError(f'{value!r} must lie in [0, 1]')
    return number


class EsiaCommand(BaseCommand):
    """Base for the toolkit commands: domain errors become stable exit codes"""
    requires_system_checks = []

    def run_from_argv(self, argv: list) -> None:
        # argparse exits 2 on bad flags; usage errors exit 1 here
        self._called_from_command_line = True
        parser = self.create_parser(argv[0], argv[1])
        try:
            parser.parse_args(argv[2:])
        except SystemExit as exc:
            if exc.code:
                sys.exit(ExitCode.USAGE)
            raise
        super().run_from_argv(argv)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except EsiaError as exc:
            raise CommandError(str(exc), returncode=int(exc.exit_code)) from exc

    def exit_with(self, code: ExitCode, message: str) -> CommandError:
        return CommandError(message, returncode=int(code))

    def usage_error(self, message: str) -> CommandError:
        return self.exit_with(ExitCode.USAGE, message)
