from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Tuple

from attack.plans import SeverityLevel
from core.exceptions import DuplicateKey, MetricsParseError

VALUE_FIELDS = ('no_attack', 'mild', 'moderate', 'severe')


class MetricKind(Enum):
    MAP50 = 'mAP50'
    MAP75 = 'mAP75'
    MAP50_95 = 'mAP50_95'
    MIOU = 'mIoU'

    @classmethod
    def from_name(cls, name: str) -> 'MetricKind':
        """Accepts the canonical names plus 'mAP50:95'"""
        normalized = name.strip().replace(':', '_')
        for kind in cls:
            if kind.value.lower() == normalized.lower():
                return kind
        raise ValueError(f'unknown metric {name!r}')


@dataclass(frozen=True)
class MetricRow:
    group: str
    subcategory: str
    model: str
    metric: MetricKind
    no_attack: float
    mild: float
    moderate: float
    severe: float

    def __post_init__(self) -> None:
        for name in VALUE_FIELDS:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise MetricsParseError(f'{name} = {value} is outside [0, 1]')

    @property
    def key(self) -> Tuple[str, str, str, MetricKind]:
        return self.group, self.subcategory, self.model, self.metric

    def attacked(self, severity: SeverityLevel) -> float:
        return getattr(self, severity.value)


@dataclass(frozen=True)
class MetricsTable:
    rows: Tuple[MetricRow, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        seen = set()
        for row in rows:
            if row.key in seen:
                raise DuplicateKey(f'duplicate row for {"/".join(map(str, row.key[:3]))} {row.metric.value}')
            seen.add(row.key)
        object.__setattr__(self, 'rows', rows)

    def for_metric(self, metric: MetricKind) -> Tuple[MetricRow, ...]:
        return tuple(row for row in self.rows if row.metric is metric)

    @property
    def metrics(self) -> Tuple[MetricKind, ...]:
        present = {row.metric for row in self.rows}
        return tuple(kind for kind in MetricKind if kind in present)

    def __len__(self) -> int:
        return len(self.rows)


def group_rows(rows: Iterable[MetricRow], *fields: str) -> Dict[tuple, List[MetricRow]]:
    grouped: Dict[tuple, List[MetricRow]] = {}
    for row in rows:
        grouped.setdefault(tuple(getattr(row, name) for name in fields), []).append(row)
    return grouped
