from core.exceptions import ExitCode
from core.management.base import EsiaCommand
from core.serializers import render_json
from strips.serializers import VerificationSummarySerializer
from strips.verification import verify_manifest, verify_sidecar


class Command(EsiaCommand):
    """Django command to check attacked outputs against their plans"""
    help = 'Verify a batch manifest against its corpus, or one image against its plan sidecar.'

    def add_arguments(self, parser) -> None:
        parser.add_argument('--manifest', help='manifest.jsonl written by batch')
        parser.add_argument('--corpus', help='corpus directory the batch read from')
        parser.add_argument('--plan', help='plan sidecar written by attack')

    def handle(self, *args, **options) -> None:
        if options['plan']:
            if options['manifest'] or options['corpus']:
                raise self.usage_error('--plan cannot be combined with --manifest or --corpus')
            summary = verify_sidecar(options['plan'])
        elif options['manifest'] and options['corpus']:
            summary = verify_manifest(options['manifest'], options['corpus'])
        else:
            raise self.usage_error('give either --plan, or --manifest together with --corpus')

        self.stdout.write(render_json(VerificationSummarySerializer(summary).data).decode('utf-8'))
        if not summary.ok:
            raise self.exit_with(ExitCode.MISMATCH, f'{len(summary.mismatched)} output(s) do not match')
