"""Metric CSV input and degradation report output"""
import csv
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from attack.plans import SeverityLevel
from core.exceptions import DuplicateKey, ImageIoError, MetricsParseError
from core.image import PathLike
from core.serializers import error_message, write_json
from evaluation.degradation import ATTACKED, DegradationReport
from evaluation.delta import DeltaComparison
from evaluation.metrics import MetricKind, MetricRow, MetricsTable
from evaluation.serializers import DeltaComparisonSerializer, MetricRowSerializer, TTestResultSerializer
from evaluation.ttest import TTestResult

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ('group', 'subcategory', 'model', 'metric', 'no_attack', 'mild', 'moderate', 'severe')
SEVERITY_COLUMNS = tuple(level.value for level in ATTACKED)
DS_COLUMNS = ('metric', 'group', 'subcategory') + SEVERITY_COLUMNS
DM_COLUMNS = ('metric', 'model', 'group') + SEVERITY_COLUMNS
CELL_COLUMNS = ('metric', 'group', 'subcategory', 'model') + SEVERITY_COLUMNS

DS_CSV, DM_CSV = 'ds_report.csv', 'dm_report.csv'
DS_TEXT, DM_TEXT = 'ds_report.txt', 'dm_report.txt'
CELLS_CSV = 'degradation.csv'
TTEST_JSON = 'ttest.json'
DELTA_CSV, DELTA_TEXT = 'delta_ttest.csv', 'delta_ttest.txt'
DELTA_COLUMNS = ('metric', 'severity', 'n', 'mean_real', 'mean_simulated', 't_statistic', 'degrees_of_freedom',
                 'p_value', 'significant')

ReportTable = Dict[Tuple[MetricKind, str, str], Dict[SeverityLevel, float]]


def _open_csv(path: Path, mode: str = 'r'):
    try:
        return path.open(mode, newline='', encoding='utf-8')
    except FileNotFoundError as exc:
        raise MetricsParseError(f'{path}: file not found') from exc
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc


def _check_header(path: Path, reader: csv.DictReader, expected: Tuple[str, ...]) -> None:
    names = tuple(name.strip() for name in reader.fieldnames or ())
    if names != expected:
        raise MetricsParseError(f'{path}: header must be {",".join(expected)}', 1)
    reader.fieldnames = list(names)


def load_metrics_csv(path: PathLike) -> MetricsTable:
    """Read a metrics CSV; parse errors carry the 1-based line number"""
    path = Path(path)
    rows: List[MetricRow] = []
    first_seen: Dict[tuple, int] = {}
    with _open_csv(path) as handle:
        try:
            reader = csv.DictReader(handle)
            _check_header(path, reader, METRICS_COLUMNS)
            for record in reader:
                line = reader.line_num
                if None in record or None in record.values():
                    raise MetricsParseError(f'{path}: expected {len(METRICS_COLUMNS)} columns', line)
                serializer = MetricRowSerializer(data=record)
                if not serializer.is_valid():
                    raise MetricsParseError(f'{path}: {error_message(serializer.errors)}', line)
                try:
                    row = MetricRow(**serializer.validated_data)
                except MetricsParseError as exc:
                    raise MetricsParseError(f'{path}: {exc}', line) from exc
                if row.key in first_seen:
                    raise DuplicateKey(
                        f'{path}: {row.group}/{row.subcategory}/{row.model}/{row.metric.value} '
                        f'already given on line {first_seen[row.key]}', line
                    )
                first_seen[row.key] = line
                rows.append(row)
        except (UnicodeDecodeError, csv.Error) as exc:
            raise MetricsParseError(f'{path}: {exc}') from exc
    logger.info('Loaded %d metric row(s) from %s', len(rows), path)
    return MetricsTable(tuple(rows))


def write_metrics_csv(table: MetricsTable, path: PathLike) -> None:
    with _open_csv(Path(path), 'w') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(METRICS_COLUMNS)
        for row in table.rows:
            writer.writerow([row.group, row.subcategory, row.model, row.metric.value,
                             repr(row.no_attack), repr(row.mild), repr(row.moderate), repr(row.severe)])


def read_sample_csv(path: PathLike) -> List[float]:
    """First column of a headed CSV as floats; other columns are ignored"""
    path = Path(path)
    values = []
    with _open_csv(path) as handle:
        try:
            reader = csv.reader(handle)
            if next(reader, None) is None:
                raise MetricsParseError(f'{path}: missing header row', 1)
            for record in reader:
                if not record or not record[0].strip():
                    continue
                try:
                    values.append(float(record[0]))
                except ValueError as exc:
                    raise MetricsParseError(f'{path}: {record[0]!r} is not a number', reader.line_num) from exc
        except (UnicodeDecodeError, csv.Error) as exc:
            raise MetricsParseError(f'{path}: {exc}') from exc
    return values


def _write_rows(path: Path, header: Tuple[str, ...], rows: List[list]) -> None:
    with _open_csv(path, 'w') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def _percent(value: float) -> str:
    return f'{value:.2f}%'


def render_text_table(title: str, key_headers: Tuple[str, str], table: ReportTable) -> str:
    """Aligned plain-text table with one block per metric and 2-decimal percentages"""
    lines = [title, '']
    for metric in MetricKind:
        entries = [(key[1:], values) for key, values in table.items() if key[0] is metric]
        if not entries:
            continue
        header = list(key_headers) + [f'{metric.value} {name}' for name in SEVERITY_COLUMNS]
        body = [[first, second] + [_percent(values[level]) for level in ATTACKED]
                for (first, second), values in entries]
        widths = [max(len(str(row[index])) for row in [header] + body) for index in range(len(header))]
        for row in [header] + body:
            cells = [str(cell).ljust(widths[index]) if index < 2 else str(cell).rjust(widths[index])
                     for index, cell in enumerate(row)]
            lines.append('  '.join(cells).rstrip())
        lines.append('')
    return '\n'.join(lines)


def emit_report(report: DegradationReport, out_dir: PathLike,
                ttest: Optional[TTestResult] = None) -> List[Path]:
    """Write CSV and text renderings of a report; returns the files written"""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIoError(f'{out_dir}: {exc}') from exc

    cells = [[metric.value, group, subcategory, model] + [repr(values[level]) for level in ATTACKED]
             for metric, table in report.cells.items()
             for (group, subcategory, model), values in table.items()]
    ds = {(metric,) + key: values for metric, table in report.ds.items() for key, values in table.items()}
    dm = {(metric,) + key: values for metric, table in report.dm.items() for key, values in table.items()}

    written = [out_dir / name for name in (CELLS_CSV, DS_CSV, DM_CSV, DS_TEXT, DM_TEXT)]
    _write_rows(written[0], CELL_COLUMNS, cells)
    _write_rows(written[1], DS_COLUMNS, [[key[0].value, key[1], key[2]] + [repr(values[level]) for level in ATTACKED]
                                         for key, values in ds.items()])
    _write_rows(written[2], DM_COLUMNS, [[key[0].value, key[1], key[2]] + [repr(values[level]) for level in ATTACKED]
                                         for key, values in dm.items()])
    try:
        written[3].write_text(render_text_table('Degradation per subcategory (D_S)', ('group', 'subcategory'), ds),
                              encoding='utf-8')
        written[4].write_text(render_text_table('Degradation per model (D_M)', ('model', 'group'), dm),
                              encoding='utf-8')
    except OSError as exc:
        raise ImageIoError(f'{out_dir}: {exc}') from exc
    if ttest is not None:
        written.append(out_dir / TTEST_JSON)
        write_json(written[-1], TTestResultSerializer(ttest).data)
    logger.info('Wrote %d report file(s) to %s', len(written), out_dir)
    return written


def load_report_csv(path: PathLike) -> ReportTable:
    """Read ds_report.csv or dm_report.csv back into {(metric, key1, key2): {severity: value}}"""
    path = Path(path)
    table: ReportTable = {}
    with _open_csv(path) as handle:
        reader = csv.reader(handle)
        header = tuple(next(reader, ()))
        if header not in (DS_COLUMNS, DM_COLUMNS):
            raise MetricsParseError(f'{path}: not a D_S or D_M report', 1)
        for record in reader:
            try:
                if len(record) != len(header):
                    raise ValueError(f'expected {len(header)} columns, got {len(record)}')
                metric = MetricKind.from_name(record[0])
                values = {level: float(text) for level, text in zip(ATTACKED, record[3:])}
            except ValueError as exc:
                raise MetricsParseError(f'{path}: {exc}', reader.line_num) from exc
            table[(metric, record[1], record[2])] = values
    return table


def _metric_label(metric: MetricKind) -> str:
    return 'delta ' + metric.value.replace('50_95', '50:95')


def render_delta_table(comparisons: List[DeltaComparison]) -> str:
    """p-values per severity (rows) and metric (columns), 3 decimals"""
    metrics = list(dict.fromkeys(comparison.metric for comparison in comparisons))
    p_values = {(comparison.metric, comparison.severity): comparison.result.p_value for comparison in comparisons}
    header = ['severity'] + [_metric_label(metric) for metric in metrics]
    body = [[level.value.capitalize()] + [f'{p_values[(metric, level)]:.3f}' for metric in metrics]
            for level in ATTACKED]
    widths = [max(len(row[index]) for row in [header] + body) for index in range(len(header))]
    lines = ['p-values of real against simulated attack deltas', '']
    for row in [header] + body:
        lines.append('  '.join(cell.ljust(widths[0]) if index == 0 else cell.rjust(widths[index])
                               for index, cell in enumerate(row)).rstrip())
    return '\n'.join(lines) + '\n'


def emit_delta(comparisons: List[DeltaComparison], out_dir: PathLike) -> List[Path]:
    """Write delta_ttest.csv and delta_ttest.txt; returns the files written"""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIoError(f'{out_dir}: {exc}') from exc
    rows = []
    for data in DeltaComparisonSerializer(comparisons, many=True).data:
        rows.append(['' if data[name] is None else data[name] for name in DELTA_COLUMNS])
    written = [out_dir / DELTA_CSV, out_dir / DELTA_TEXT]
    _write_rows(written[0], DELTA_COLUMNS, rows)
    try:
        written[1].write_text(render_delta_table(comparisons), encoding='utf-8')
    except OSError as exc:
        raise ImageIoError(f'{out_dir}: {exc}') from exc
    logger.info('Wrote %d delta comparison(s) to %s', len(comparisons), out_dir)
    return written
