from django.conf import settings

from core.bayer import BayerPattern, mosaic, save_cfa_dump
from core.image import load_image
from core.management.base import EsiaCommand, probability
from core.serializers import render_json
from strips.detection import detect_heuristic
from strips.serializers import DetectionReportSerializer

PATTERN_CHOICES = [pattern.value.lower() for pattern in BayerPattern]


class Command(EsiaCommand):
    """Django command to look for colour strips without a reference image"""
    help = 'Score every row for the colour-strip signature and print the detection report as JSON.'

    def add_arguments(self, parser) -> None:
        parser.add_argument('--input', required=True, help='image to inspect')
        parser.add_argument('--threshold', type=probability, default=None,
                            help='row score above which a row counts as striped (default: ESIA_DETECTION_THRESHOLD)')
        parser.add_argument('--pattern', type=str.lower, choices=PATTERN_CHOICES,
                            help='Bayer pattern for --cfa-dump (default: ESIA_BAYER_PATTERN)')
        parser.add_argument('--cfa-dump', help='also write the virtual CFA as PGM or PNG')

    def handle(self, *args, **options) -> None:
        image = load_image(options['input'])
        threshold = options['threshold']
        if threshold is None:
            threshold = settings.ESIA_DETECTION_THRESHOLD
        report = detect_heuristic(image, threshold)
        if options['cfa_dump']:
            pattern = BayerPattern.from_name(options['pattern']) if options['pattern'] else BayerPattern.default()
            save_cfa_dump(mosaic(image, pattern), options['cfa_dump'])
        self.stdout.write(render_json(DetectionReportSerializer(report).data).decode('utf-8'))
