from attack.engines import ENGINES
from attack.plans import SamplerConfig
from core.bayer import BayerPattern
from core.management.base import EsiaCommand, non_negative_int, positive_int, u64
from dataset.attributes import SubcategoryFilter
from dataset.generation import generate

PATTERN_CHOICES = [pattern.value.lower() for pattern in BayerPattern]


class Command(EsiaCommand):
    """Django command to build an attacked dataset from a labelled corpus"""
    help = 'Filter, partition and attack a labelled corpus; write images, manifest.jsonl and summaries.'

    def add_arguments(self, parser) -> None:
        parser.add_argument('--corpus', required=True, help='directory holding the source images')
        parser.add_argument('--attributes', required=True, help='JSON array of {name, attributes} records')
        parser.add_argument('--out', required=True, help='output directory')
        parser.add_argument('--seed', type=u64, required=True, help='unsigned 64-bit master seed')
        parser.add_argument('--engine', choices=list(ENGINES), default='swap')
        parser.add_argument('--jobs', type=positive_int, default=1, help='worker threads')
        parser.add_argument('--pattern', type=str.lower, choices=PATTERN_CHOICES,
                            help='Bayer pattern (default: ESIA_BAYER_PATTERN)')
        parser.add_argument('--min-images', type=non_negative_int,
                            help='drop subcategories with fewer images (default: ESIA_SUBCATEGORY_FILTER)')
        parser.add_argument('--min-strip-height', type=positive_int)
        parser.add_argument('--max-strip-height', type=positive_int)

    def handle(self, *args, **options) -> None:
        manifest = generate(
            corpus_dir=options['corpus'],
            attributes=options['attributes'],
            out_dir=options['out'],
            master_seed=options['seed'],
            engine=options['engine'],
            subcategory_filter=SubcategoryFilter.from_settings(min_images=options['min_images']),
            sampler=SamplerConfig.from_settings(
                min_strip_height=options['min_strip_height'],
                max_strip_height=options['max_strip_height'],
            ),
            pattern=BayerPattern.from_name(options['pattern']) if options['pattern'] else None,
            jobs=options['jobs'],
        )
        self.stderr.write(self.style.SUCCESS(
            f'Wrote {len(manifest.records)} record(s) to {manifest.manifest_path}'
            f' ({len({record.source for record in manifest.failed})} failed image(s))'
        ))
