from core.management.base import EsiaCommand, probability
from evaluation.degradation import DegradationReport
from evaluation.delta import compare_deltas
from evaluation.files import emit_delta, emit_report, load_metrics_csv, read_sample_csv
from evaluation.ttest import TTestVariant, ttest_two_sample


class Command(EsiaCommand):
    """Django command to compute degradation reports and the optional t-tests"""
    help = ('Compute per-cell degradation, D_S and D_M from a metrics CSV, and compare real against '
            'simulated attack deltas.')

    def add_arguments(self, parser) -> None:
        parser.add_argument('--metrics', help='metrics CSV (group,subcategory,model,metric,...)')
        parser.add_argument('--out', required=True, help='directory for the report files')
        parser.add_argument('--ttest', nargs=2, metavar=('A', 'B'),
                            help='two single-column CSVs with a header row to compare')
        parser.add_argument('--delta', nargs=2, metavar=('REAL', 'SIMULATED'),
                            help='metrics CSVs of real and simulated attack images to compare per severity')
        parser.add_argument('--ttest-variant', choices=[variant.value for variant in TTestVariant],
                            help='default: ESIA_TTEST_VARIANT')
        parser.add_argument('--alpha', type=probability, help='significance level (default: ESIA_SIGNIFICANCE_LEVEL)')

    def handle(self, *args, **options) -> None:
        if not options['metrics'] and not options['delta']:
            raise self.usage_error('give --metrics, --delta or both')
        if options['ttest'] and not options['metrics']:
            raise self.usage_error('--ttest is written alongside the --metrics report')

        written = []
        if options['metrics']:
            report = DegradationReport.from_table(load_metrics_csv(options['metrics']))
            ttest = None
            if options['ttest']:
                sample_a, sample_b = (read_sample_csv(path) for path in options['ttest'])
                ttest = ttest_two_sample(sample_a, sample_b, options['ttest_variant'], options['alpha'])
            written += emit_report(report, options['out'], ttest)
        if options['delta']:
            real, simulated = (load_metrics_csv(path) for path in options['delta'])
            comparisons = compare_deltas(real, simulated, options['ttest_variant'], options['alpha'])
            written += emit_delta(comparisons, options['out'])
        for path in written:
            self.stderr.write(self.style.SUCCESS(f'Wrote {path}'))
