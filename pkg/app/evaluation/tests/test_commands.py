import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from attack.plans import SeverityLevel
from core.exceptions import DuplicateKey, ExitCode, MetricsParseError
from evaluation.degradation import DegradationReport
from evaluation.files import (
    DM_CSV,
    DM_TEXT,
    DS_CSV,
    DS_TEXT,
    TTEST_JSON,
    load_metrics_csv,
    load_report_csv,
    read_sample_csv,
    write_metrics_csv,
)
from evaluation.metrics import MetricKind

REFERENCE_METRICS = Path(__file__).resolve().parent.parent / 'fixtures' / 'reference_metrics.csv'

HEADER = 'group,subcategory,model,metric,no_attack,mild,moderate,severe\n'


class MetricsFileTests(SimpleTestCase):

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text)
        return path

    def test_normalizes_rows(self) -> None:
        """Test group and subcategory are normalized and mAP50:95 is accepted"""
        path = self.write('m.csv', HEADER + 'Weather, Partly  Cloudy ,YOLOP,mAP50:95,0.5,0.4,0.3,0.2\n')
        row = load_metrics_csv(path).rows[0]
        self.assertEqual((row.group, row.subcategory, row.metric), ('weather', 'partly cloudy', MetricKind.MAP50_95))

    def test_bad_value_reports_line(self) -> None:
        """Test a non-numeric value cites its CSV line"""
        path = self.write('m.csv', HEADER + 'weather,clear,YOLOP,mAP50,0.5,0.4,0.3,0.2\n'
                                            'weather,rainy,YOLOP,mAP50,0.5,high,0.3,0.2\n')
        with self.assertRaises(MetricsParseError) as raised:
            load_metrics_csv(path)
        self.assertEqual(raised.exception.line, 3)

    def test_value_above_one(self) -> None:
        """Test metric values must lie in [0, 1]"""
        path = self.write('m.csv', HEADER + 'weather,clear,YOLOP,mAP50,1.5,0.4,0.3,0.2\n')
        with self.assertRaises(MetricsParseError):
            load_metrics_csv(path)

    def test_short_row(self) -> None:
        """Test a row with missing columns cites its CSV line"""
        path = self.write('m.csv', HEADER + 'weather,clear,YOLOP,mAP50,0.5,0.4\n')
        with self.assertRaises(MetricsParseError) as raised:
            load_metrics_csv(path)
        self.assertEqual(raised.exception.line, 2)

    def test_wrong_header(self) -> None:
        """Test the header must list the metrics columns"""
        path = self.write('m.csv', 'group,model\nweather,YOLOP\n')
        with self.assertRaises(MetricsParseError):
            load_metrics_csv(path)

    def test_duplicate_cites_first_line(self) -> None:
        """Test a repeated row names the line it first appeared on"""
        row = 'weather,clear,YOLOP,mAP50,0.5,0.4,0.3,0.2\n'
        path = self.write('m.csv', HEADER + row + 'weather,rainy,YOLOP,mAP50,0.5,0.4,0.3,0.2\n' + row)
        with self.assertRaises(DuplicateKey) as raised:
            load_metrics_csv(path)
        self.assertEqual(raised.exception.line, 4)
        self.assertIn('line 2', str(raised.exception))

    def test_write_then_load(self) -> None:
        """Test a written metrics CSV loads back equal"""
        table = load_metrics_csv(REFERENCE_METRICS)
        write_metrics_csv(table, self.root / 'copy.csv')
        self.assertEqual(load_metrics_csv(self.root / 'copy.csv'), table)

    def test_sample_csv(self) -> None:
        """Test t-test samples read the first column and skip blank lines"""
        path = self.write('a.csv', 'delta_map,model\n0.1,x\n\n0.25,y\n')
        self.assertEqual(read_sample_csv(path), [0.1, 0.25])
        with self.assertRaises(MetricsParseError):
            read_sample_csv(self.write('b.csv', 'delta_map\nabc\n'))

    def test_missing_file(self) -> None:
        """Test a missing metrics CSV is a parse error"""
        with self.assertRaises(MetricsParseError):
            load_metrics_csv(self.root / 'missing.csv')


class StatsCommandTests(SimpleTestCase):

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        self.out = self.root / 'report'

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def stats(self, *args: str, metrics: Path = REFERENCE_METRICS) -> None:
        call_command('stats', '--metrics', str(metrics), '--out', str(self.out), *args, stderr=StringIO())

    def test_reports_written(self) -> None:
        """Test the reference metrics produce reloadable D_S and D_M reports"""
        self.stats()
        ds = load_report_csv(self.out / DS_CSV)
        dm = load_report_csv(self.out / DM_CSV)
        self.assertAlmostEqual(ds[(MetricKind.MAP50, 'weather', 'clear')][SeverityLevel.SEVERE], -65.52, delta=0.005)
        self.assertAlmostEqual(dm[(MetricKind.MAP50, 'YOLOP', 'timeofday')][SeverityLevel.MILD], -11.97, delta=0.005)
        self.assertEqual(len(ds), 22)
        self.assertEqual(len(dm), 18)
        self.assertFalse((self.out / TTEST_JSON).exists())

    def test_reports_match_computation(self) -> None:
        """Test written D_S values equal the in-memory report"""
        self.stats()
        report = DegradationReport.from_table(load_metrics_csv(REFERENCE_METRICS))
        ds = load_report_csv(self.out / DS_CSV)
        for metric, table in report.ds.items():
            for key, values in table.items():
                self.assertEqual(ds[(metric,) + key], values)

    def test_text_tables(self) -> None:
        """Test the text reports show 2-decimal percentages"""
        self.stats()
        ds_text = (self.out / DS_TEXT).read_text()
        self.assertIn('-65.52%', ds_text)
        self.assertIn('partly cloudy', ds_text)
        self.assertIn('-64.45%', (self.out / DM_TEXT).read_text())

    def test_identical_ttest_inputs(self) -> None:
        """Test identical samples give p = 1 in ttest.json"""
        sample = self.root / 'a.csv'
        sample.write_text('delta_map\n0.12\n0.08\n0.15\n')
        self.stats('--ttest', str(sample), str(sample))
        result = json.loads((self.out / TTEST_JSON).read_text())
        self.assertEqual(result['p_value'], 1.0)
        self.assertEqual(result['variant'], 'welch')
        self.assertFalse(result['significant'])

    def test_degenerate_ttest_serializes_null(self) -> None:
        """Test an infinite t statistic is written as null"""
        (self.root / 'a.csv').write_text('d\n1\n1\n')
        (self.root / 'b.csv').write_text('d\n2\n2\n')
        self.stats('--ttest', str(self.root / 'a.csv'), str(self.root / 'b.csv'), '--ttest-variant', 'student')
        result = json.loads((self.out / TTEST_JSON).read_text())
        self.assertIsNone(result['t_statistic'])
        self.assertTrue(result['degenerate'])

    def test_malformed_metrics(self) -> None:
        """Test a malformed metrics CSV exits 2"""
        broken = self.root / 'broken.csv'
        broken.write_text(HEADER + 'weather,clear,YOLOP\n')
        with self.assertRaises(CommandError) as raised:
            self.stats(metrics=broken)
        self.assertEqual(raised.exception.returncode, ExitCode.INPUT)

    def test_missing_model(self) -> None:
        """Test a subcategory missing a model exits 2"""
        partial = self.root / 'partial.csv'
        partial.write_text(HEADER + 'weather,clear,YOLOP,mAP50,0.5,0.4,0.3,0.2\n'
                                    'weather,clear,A-YOLOM,mAP50,0.5,0.4,0.3,0.2\n'
                                    'weather,rainy,YOLOP,mAP50,0.5,0.4,0.3,0.2\n')
        with self.assertRaises(CommandError) as raised:
            self.stats(metrics=partial)
        self.assertEqual(raised.exception.returncode, ExitCode.INPUT)

    def test_short_ttest_sample(self) -> None:
        """Test a one-value sample exits 2"""
        sample = self.root / 'a.csv'
        sample.write_text('d\n0.1\n')
        with self.assertRaises(CommandError) as raised:
            self.stats('--ttest', str(sample), str(sample))
        self.assertEqual(raised.exception.returncode, ExitCode.INPUT)
