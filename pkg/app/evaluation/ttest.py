import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from django.conf import settings
from scipy.stats import t as t_dist

from core.exceptions import InsufficientData, InvalidConfig

logger = logging.getLogger(__name__)


class TTestVariant(Enum):
    WELCH = 'welch'
    STUDENT = 'student'
    PAIRED = 'paired'

    @classmethod
    def from_name(cls, name: str) -> 'TTestVariant':
        try:
            return cls(name.strip().lower())
        except ValueError as exc:
            raise InvalidConfig(f'unknown t-test variant {name!r}') from exc


@dataclass(frozen=True)
class TTestResult:
    variant: str
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    alpha: float
    degenerate: bool
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha

    @property
    def significant_at_5pct(self) -> bool:
        return self.p_value < 0.05


def _as_sample(values: Sequence[float], name: str) -> np.ndarray:
    sample = np.asarray(values, dtype=np.float64)
    if sample.ndim != 1 or sample.size < 2:
        raise InsufficientData(f'{name} needs at least 2 values, got {sample.size}')
    if not np.all(np.isfinite(sample)):
        raise InsufficientData(f'{name} contains non-finite values')
    return sample


def _statistic(a: np.ndarray, b: np.ndarray, variant: TTestVariant):
    """(mean difference, squared standard error, degrees of freedom)"""
    if variant is TTestVariant.PAIRED:
        diff = a - b
        n = diff.size
        return diff.mean(), diff.var(ddof=1) / n, float(n - 1)

    na, nb = a.size, b.size
    var_a, var_b = a.var(ddof=1), b.var(ddof=1)
    if variant is TTestVariant.STUDENT:
        pooled = ((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2)
        return a.mean() - b.mean(), pooled * (1 / na + 1 / nb), float(na + nb - 2)

    se_a, se_b = var_a / na, var_b / nb
    se2 = se_a + se_b
    if se2 == 0:
        return a.mean() - b.mean(), 0.0, float(na + nb - 2)
    # Welch-Satterthwaite
    df = se2 ** 2 / (se_a ** 2 / (na - 1) + se_b ** 2 / (nb - 1))
    return a.mean() - b.mean(), se2, float(df)


def ttest_two_sample(sample_a: Sequence[float], sample_b: Sequence[float],
                     variant: Optional[str] = None, alpha: Optional[float] = None) -> TTestResult:
    """Two-sided t-test; Welch by default"""
    variant = TTestVariant.from_name(variant or settings.ESIA_TTEST_VARIANT)
    alpha = settings.ESIA_SIGNIFICANCE_LEVEL if alpha is None else alpha
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f'significance level must lie in (0, 1), got {alpha}')
    a, b = _as_sample(sample_a, 'sample_a'), _as_sample(sample_b, 'sample_b')
    if variant is TTestVariant.PAIRED and a.size != b.size:
        raise InsufficientData(f'paired test needs equal lengths, got {a.size} and {b.size}')

    def result(t_value: float, df: float, p_value: float, degenerate: bool = False) -> TTestResult:
        return TTestResult(variant.value, t_value, df, p_value, alpha, degenerate,
                           float(a.mean()), float(b.mean()), int(a.size), int(b.size))

    diff, se2, df = _statistic(a, b, variant)
    if np.array_equal(np.sort(a), np.sort(b)):
        return result(0.0, df, 1.0)
    if se2 == 0:
        if diff == 0:
            return result(0.0, df, 1.0)
        logger.warning('Both samples have zero variance and different means; reporting p = 0')
        return result(math.copysign(math.inf, diff), df, 0.0, degenerate=True)

    t_value = float(diff / math.sqrt(se2))
    p_value = float(min(1.0, 2.0 * t_dist.sf(abs(t_value), df)))
    return result(t_value, df, p_value)
