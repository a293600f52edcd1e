"""
Real versus simulated attack comparison.

A delta is the absolute change of a detection metric under attack,
attacked minus no-attack. Deltas from real attack images and from simulated
ones are compared with one t-test per (metric, severity).
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from attack.plans import SeverityLevel
from core.exceptions import InsufficientData, MissingModel
from evaluation.metrics import MetricKind, MetricsTable
from evaluation.ttest import TTestResult, ttest_two_sample

logger = logging.getLogger(__name__)

DELTA_METRICS = (MetricKind.MAP50, MetricKind.MAP75, MetricKind.MAP50_95)

RowKey = Tuple[str, str, str]


@dataclass(frozen=True)
class DeltaComparison:
    metric: MetricKind
    severity: SeverityLevel
    keys: Tuple[RowKey, ...]
    real: Tuple[float, ...]
    simulated: Tuple[float, ...]
    result: TTestResult


def metric_deltas(table: MetricsTable, metric: MetricKind, severity: SeverityLevel) -> Dict[RowKey, float]:
    """attacked - no_attack keyed by (group, subcategory, model), in table order"""
    return {row.key[:3]: row.attacked(severity) - row.no_attack for row in table.for_metric(metric)}


def _aligned(real: Dict[RowKey, float], simulated: Dict[RowKey, float], metric: MetricKind) -> List[RowKey]:
    missing = [key for key in real if key not in simulated] + [key for key in simulated if key not in real]
    if missing:
        group, subcategory, model = missing[0]
        side = 'simulated' if missing[0] in real else 'real'
        raise MissingModel(f'{group}/{subcategory}/{model} has no {metric.value} row in the {side} metrics')
    return list(real)


def compare_deltas(real: MetricsTable, simulated: MetricsTable,
                   variant: Optional[str] = None, alpha: Optional[float] = None) -> List[DeltaComparison]:
    """One t-test of real against simulated deltas per detection metric present in both tables"""
    metrics = [metric for metric in DELTA_METRICS if metric in real.metrics and metric in simulated.metrics]
    if not metrics:
        raise InsufficientData('real and simulated metrics share no mAP50, mAP75 or mAP50_95 rows')

    comparisons = []
    for metric in metrics:
        for severity in SeverityLevel.attacked():
            real_deltas = metric_deltas(real, metric, severity)
            simulated_deltas = metric_deltas(simulated, metric, severity)
            keys = _aligned(real_deltas, simulated_deltas, metric)
            sample_real = tuple(real_deltas[key] for key in keys)
            sample_simulated = tuple(simulated_deltas[key] for key in keys)
            try:
                result = ttest_two_sample(sample_real, sample_simulated, variant, alpha)
            except InsufficientData as exc:
                raise InsufficientData(f'{metric.value} {severity.value}: {exc}') from exc
            comparisons.append(DeltaComparison(metric, severity, tuple(keys), sample_real, sample_simulated, result))
            logger.info('Delta %s %s: p = %.3f over %d row(s)', metric.value, severity.value, result.p_value, len(keys))
    return comparisons
