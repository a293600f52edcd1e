"""
Degradation aggregates.

A cell's degradation is the signed percent change of an attacked metric
against its no-attack baseline. D_S averages cells over models for one
subcategory; D_M averages cells over a group's subcategories for one model.
"""
from dataclasses import dataclass
from statistics import fmean
from typing import Dict, Tuple

from attack.plans import SeverityLevel
from core.exceptions import MissingModel, ZeroBaseline
from evaluation.metrics import MetricKind, MetricRow, MetricsTable, group_rows

ATTACKED = SeverityLevel.attacked()

SeverityValues = Dict[SeverityLevel, float]


def degradation(no_attack: float, attacked: float) -> float:
    if no_attack <= 0:
        raise ZeroBaseline(f'no-attack baseline must be positive, got {no_attack}')
    return 100.0 * (attacked - no_attack) / no_attack


def row_degradation(row: MetricRow) -> SeverityValues:
    try:
        return {level: degradation(row.no_attack, row.attacked(level)) for level in ATTACKED}
    except ZeroBaseline as exc:
        raise ZeroBaseline(f'{row.group}/{row.subcategory}/{row.model} {row.metric.value}: {exc}') from exc


def _mean_by_severity(rows) -> SeverityValues:
    cells = [row_degradation(row) for row in rows]
    return {level: fmean(cell[level] for cell in cells) for level in ATTACKED}


def _check_models(rows: Tuple[MetricRow, ...], metric: MetricKind) -> None:
    models = {row.model for row in rows}
    for (group, subcategory), members in group_rows(rows, 'group', 'subcategory').items():
        missing = models - {row.model for row in members}
        if missing:
            raise MissingModel(
                f'{group}/{subcategory} has no {metric.value} row for {", ".join(sorted(missing))}'
            )


def compute_ds(table: MetricsTable, metric: MetricKind) -> Dict[Tuple[str, str], SeverityValues]:
    """D_S keyed by (group, subcategory), in table order"""
    rows = table.for_metric(metric)
    _check_models(rows, metric)
    return {key: _mean_by_severity(members) for key, members in group_rows(rows, 'group', 'subcategory').items()}


def compute_dm(table: MetricsTable, metric: MetricKind) -> Dict[Tuple[str, str], SeverityValues]:
    """D_M keyed by (model, group), in table order"""
    rows = table.for_metric(metric)
    _check_models(rows, metric)
    return {key: _mean_by_severity(members) for key, members in group_rows(rows, 'model', 'group').items()}


@dataclass(frozen=True)
class DegradationReport:
    cells: Dict[MetricKind, Dict[Tuple[str, str, str], SeverityValues]]
    ds: Dict[MetricKind, Dict[Tuple[str, str], SeverityValues]]
    dm: Dict[MetricKind, Dict[Tuple[str, str], SeverityValues]]

    @classmethod
    def from_table(cls, table: MetricsTable) -> 'DegradationReport':
        cells, ds, dm = {}, {}, {}
        for metric in table.metrics:
            cells[metric] = {
                (row.group, row.subcategory, row.model): row_degradation(row) for row in table.for_metric(metric)
            }
            ds[metric] = compute_ds(table, metric)
            dm[metric] = compute_dm(table, metric)
        return cls(cells, ds, dm)
