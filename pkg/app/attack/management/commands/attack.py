import logging
import os
from pathlib import Path

from attack.engines import ENGINES, get_engine
from attack.plans import AttackPlan, SamplerConfig, SeverityLevel, StripSpec, sample_plan
from attack.serializers import plan_sidecar
from core.bayer import BayerPattern
from core.image import load_image, save_image
from core.management.base import EsiaCommand, positive_int, u64
from core.serializers import write_json

logger = logging.getLogger(__name__)

PATTERN_CHOICES = [pattern.value.lower() for pattern in BayerPattern]


class Command(EsiaCommand):
    """Django command to attack a single image and write its plan sidecar"""
    help = 'Inject colour strips into one image and write the attacked image plus a JSON plan.'

    def add_arguments(self, parser) -> None:
        parser.add_argument('--input', required=True, help='8-bit RGB PNG or binary PPM to attack')
        parser.add_argument('--output', required=True, help='attacked image path (.ppm writes P6, else PNG)')
        parser.add_argument('--severity', choices=[level.value for level in SeverityLevel.attacked()],
                            help='severity to sample; required unless --strips is given')
        parser.add_argument('--strips', help='explicit plan "s0-e0,s1-e1,..." (end exclusive)')
        parser.add_argument('--seed', type=u64, required=True, help='unsigned 64-bit seed')
        parser.add_argument('--engine', choices=list(ENGINES), default='swap')
        parser.add_argument('--pattern', type=str.lower, choices=PATTERN_CHOICES,
                            help='Bayer pattern (default: ESIA_BAYER_PATTERN)')
        parser.add_argument('--sidecar', help='plan JSON path (default: <output stem>.json)')
        parser.add_argument('--min-strip-height', type=positive_int)
        parser.add_argument('--max-strip-height', type=positive_int)

    def handle(self, *args, **options) -> None:
        if options['strips'] is None and options['severity'] is None:
            raise self.usage_error('--severity is required unless --strips is given')

        source, output = Path(options['input']), Path(options['output'])
        pattern = BayerPattern.from_name(options['pattern']) if options['pattern'] else BayerPattern.default()
        image = load_image(source)

        if options['strips'] is not None:
            strips = [StripSpec.parse(text) for text in options['strips'].split(',') if text.strip()]
            severity = SeverityLevel(options['severity']) if options['severity'] else None
            plan = AttackPlan.explicit(strips, image, seed=options['seed'], severity=severity)
        else:
            config = SamplerConfig.from_settings(
                min_strip_height=options['min_strip_height'],
                max_strip_height=options['max_strip_height'],
            )
            plan = sample_plan(SeverityLevel(options['severity']), image.width, image.height,
                               options['seed'], config)

        attacked = get_engine(options['engine'])(image, plan, pattern)
        save_image(attacked, output)

        sidecar = Path(options['sidecar']) if options['sidecar'] else output.with_suffix('.json')
        anchor = sidecar.resolve().parent
        write_json(sidecar, plan_sidecar(
            plan,
            source=os.path.relpath(source.resolve(), anchor),
            output=os.path.relpath(output.resolve(), anchor),
            engine=options['engine'],
            pattern=pattern,
        ))
        logger.info('Attacked %s with %d %s strip(s) via %s', source, len(plan.strips),
                    plan.severity.value, options['engine'])
        self.stderr.write(self.style.SUCCESS(f'Wrote {output} and {sidecar}'))
