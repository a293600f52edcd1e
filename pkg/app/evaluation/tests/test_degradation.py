from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from attack.plans import SeverityLevel
from core.exceptions import DuplicateKey, MetricsParseError, MissingModel, ZeroBaseline
from evaluation.degradation import DegradationReport, compute_dm, compute_ds, degradation
from evaluation.files import load_metrics_csv
from evaluation.metrics import MetricKind, MetricRow, MetricsTable

REFERENCE_METRICS = Path(__file__).resolve().parent.parent / 'fixtures' / 'reference_metrics.csv'

SUBCATEGORY_GROUPS = {
    'clear': 'weather', 'rainy': 'weather', 'snowy': 'weather', 'partly cloudy': 'weather', 'overcast': 'weather',
    'highway': 'scene', 'city street': 'scene', 'residential': 'scene',
    'night': 'timeofday', 'dawn': 'timeofday', 'daytime': 'timeofday',
}

# detection mild/moderate/severe, then segmentation mild/moderate/severe
EXPECTED_DS = {
    'clear': (-13.68, -41.43, -65.52, -2.05, -7.09, -12.69),
    'rainy': (-12.28, -36.93, -56.34, -1.03, -5.45, -10.95),
    'snowy': (-11.37, -33.55, -62.09, -3.08, -8.13, -13.41),
    'partly cloudy': (-13.97, -45.38, -66.47, -2.85, -7.63, -13.01),
    'overcast': (-10.28, -40.46, -64.20, -1.76, -6.53, -12.02),
    'highway': (-21.74, -52.65, -70.89, -2.68, -7.68, -13.73),
    'city street': (-10.29, -35.76, -59.29, -2.32, -7.15, -12.53),
    'residential': (-11.78, -37.76, -60.92, -1.82, -7.52, -13.03),
    'night': (-14.71, -39.06, -63.72, -2.02, -6.80, -11.76),
    'dawn': (-8.29, -44.03, -65.11, -1.15, -6.52, -12.08),
    'daytime': (-13.09, -39.77, -62.70, -2.42, -7.62, -13.08),
}

EXPECTED_DM = {
    ('HybridNets', 'weather'): (-13.09, -38.61, -64.45, -2.17, -6.89, -12.08),
    ('HybridNets', 'scene'): (-15.26, -42.70, -65.00, -2.02, -7.32, -12.68),
    ('HybridNets', 'timeofday'): (-12.57, -41.15, -65.21, -2.03, -7.24, -12.12),
    ('A-YOLOM', 'weather'): (-11.06, -39.06, -60.95, -2.33, -7.76, -13.61),
    ('A-YOLOM', 'scene'): (-13.36, -40.54, -61.59, -2.58, -8.11, -14.07),
    ('A-YOLOM', 'timeofday'): (-11.55, -39.77, -61.89, -1.87, -7.04, -13.09),
    ('YOLOP', 'weather'): (-12.80, -40.99, -63.37, -1.96, -6.25, -11.54),
    ('YOLOP', 'scene'): (-15.20, -42.91, -64.51, -2.22, -6.92, -12.53),
    ('YOLOP', 'timeofday'): (-11.97, -41.93, -64.43, -1.68, -6.66, -11.71),
}

SEVERITIES = (SeverityLevel.MILD, SeverityLevel.MODERATE, SeverityLevel.SEVERE)


def sample_row(subcategory: str = 'clear', model: str = 'M1', no_attack: float = 0.8,
               attacked=(0.6, 0.4, 0.2), metric: MetricKind = MetricKind.MAP50) -> MetricRow:
    return MetricRow('weather', subcategory, model, metric, no_attack, *attacked)


def split(expected: tuple) -> dict:
    return {
        MetricKind.MAP50: dict(zip(SEVERITIES, expected[:3])),
        MetricKind.MIOU: dict(zip(SEVERITIES, expected[3:])),
    }


class DegradationTests(SimpleTestCase):

    def test_percent_change(self) -> None:
        """Test degradation is the signed percent change from no attack"""
        self.assertAlmostEqual(degradation(0.8, 0.6), -25.0)
        self.assertAlmostEqual(degradation(0.5, 0.6), 20.0)
        self.assertEqual(degradation(0.5, 0.5), 0.0)

    def test_zero_baseline(self) -> None:
        """Test a zero baseline is rejected"""
        with self.assertRaises(ZeroBaseline):
            degradation(0.0, 0.3)

    def test_zero_baseline_names_the_row(self) -> None:
        """Test a zero baseline error names its row"""
        table = MetricsTable((sample_row(no_attack=0.0, attacked=(0.0, 0.0, 0.0)),))
        with self.assertRaises(ZeroBaseline) as raised:
            DegradationReport.from_table(table)
        self.assertIn('weather/clear/M1', str(raised.exception))

    @given(scale=st.floats(min_value=0.1, max_value=1.0))
    def test_scale_equivariance(self, scale: float) -> None:
        """Test scaling every metric value by one factor leaves degradation unchanged"""
        base, attacked = 0.9, (0.7, 0.5, 0.3)
        self.assertAlmostEqual(degradation(base, attacked[1]), degradation(base * scale, attacked[1] * scale))

    def test_values_outside_unit_interval(self) -> None:
        """Test metric rows reject values above 1"""
        with self.assertRaises(MetricsParseError):
            sample_row(no_attack=1.2)

    def test_duplicate_rows(self) -> None:
        """Test a table may not repeat a row key"""
        with self.assertRaises(DuplicateKey):
            MetricsTable((sample_row(), sample_row()))

    def test_ds_averages_models(self) -> None:
        """Test D_S is the mean over models"""
        table = MetricsTable((sample_row(model='M1'), sample_row(model='M2', no_attack=0.5, attacked=(0.5, 0.5, 0.5))))
        ds = compute_ds(table, MetricKind.MAP50)
        self.assertAlmostEqual(ds[('weather', 'clear')][SeverityLevel.MILD], -12.5)
        self.assertAlmostEqual(ds[('weather', 'clear')][SeverityLevel.SEVERE], -37.5)

    def test_dm_averages_subcategories(self) -> None:
        """Test D_M is the mean over a group's subcategories"""
        table = MetricsTable((sample_row('clear'), sample_row('rainy', no_attack=0.4, attacked=(0.4, 0.2, 0.1))))
        dm = compute_dm(table, MetricKind.MAP50)
        self.assertAlmostEqual(dm[('M1', 'weather')][SeverityLevel.MODERATE], -50.0)

    def test_missing_model(self) -> None:
        """Test a subcategory without a model seen elsewhere is rejected"""
        table = MetricsTable((sample_row('clear', 'M1'), sample_row('clear', 'M2'), sample_row('rainy', 'M1')))
        with self.assertRaises(MissingModel):
            compute_ds(table, MetricKind.MAP50)

    def test_metrics_are_independent(self) -> None:
        """Test each metric gets its own tables"""
        table = MetricsTable((sample_row(), sample_row(metric=MetricKind.MIOU, attacked=(0.8, 0.8, 0.8))))
        report = DegradationReport.from_table(table)
        self.assertEqual(set(report.ds), {MetricKind.MAP50, MetricKind.MIOU})
        self.assertEqual(report.ds[MetricKind.MIOU][('weather', 'clear')][SeverityLevel.SEVERE], 0.0)

    def test_metric_names(self) -> None:
        """Test metric names parse with either mAP50:95 spelling"""
        self.assertIs(MetricKind.from_name('mAP50:95'), MetricKind.MAP50_95)
        self.assertIs(MetricKind.from_name('miou'), MetricKind.MIOU)
        with self.assertRaises(ValueError):
            MetricKind.from_name('AP')


class ReferenceReportTests(SimpleTestCase):
    """Test the shipped reference metrics reproduce the published aggregates"""

    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.table = load_metrics_csv(REFERENCE_METRICS)
        cls.report = DegradationReport.from_table(cls.table)

    def test_fixture_loads(self) -> None:
        """Test the reference metrics hold 66 mAP50 and mIoU rows"""
        self.assertEqual(len(self.table), 66)
        self.assertEqual(self.table.metrics, (MetricKind.MAP50, MetricKind.MIOU))

    def test_ds_cells(self) -> None:
        """Test every published D_S cell is reproduced"""
        for subcategory, expected in EXPECTED_DS.items():
            key = (SUBCATEGORY_GROUPS[subcategory], subcategory)
            for metric, values in split(expected).items():
                for level, value in values.items():
                    with self.subTest(subcategory=subcategory, metric=metric.value, severity=level.value):
                        self.assertAlmostEqual(self.report.ds[metric][key][level], value, delta=0.005)

    def test_dm_cells(self) -> None:
        """Test every published D_M cell is reproduced"""
        for key, expected in EXPECTED_DM.items():
            for metric, values in split(expected).items():
                for level, value in values.items():
                    with self.subTest(key=key, metric=metric.value, severity=level.value):
                        self.assertAlmostEqual(self.report.dm[metric][key][level], value, delta=0.005)

    def test_anchor_cells(self) -> None:
        """Test a few cells by hand"""
        ds, dm = self.report.ds, self.report.dm
        self.assertAlmostEqual(ds[MetricKind.MAP50][('weather', 'clear')][SeverityLevel.SEVERE], -65.52, delta=0.005)
        self.assertAlmostEqual(ds[MetricKind.MAP50][('scene', 'highway')][SeverityLevel.MILD], -21.74, delta=0.005)
        self.assertAlmostEqual(dm[MetricKind.MIOU][('A-YOLOM', 'scene')][SeverityLevel.MODERATE], -8.11, delta=0.005)

    def test_report_shape(self) -> None:
        """Test the report has one entry per subcategory, model group and cell"""
        self.assertEqual(len(self.report.ds[MetricKind.MAP50]), 11)
        self.assertEqual(len(self.report.dm[MetricKind.MIOU]), 9)
        self.assertEqual(len(self.report.cells[MetricKind.MAP50]), 33)
