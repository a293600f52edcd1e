"""
Finding colour strips in attacked images.

verify_against_original is the reference check: it diffs against the clean
source and matches the changed rows to a plan. detect_heuristic needs no
reference; it looks for the signature the swap leaves after bilinear
reconstruction, a column-period-2 alternation of green while red and blue
go flat.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from attack.plans import AttackPlan, StripSpec
from core.bayer import BLUE, GREEN, RED
from core.exceptions import DimensionMismatch, InvalidConfig
from core.image import RgbImage

logger = logging.getLogger(__name__)

# row boundary slack for the reconstruction band on each side of a strip
MATCH_SLACK = 1
# damps the score on rows with almost no texture
SCORE_FLOOR = 4.0


@dataclass(frozen=True)
class DetectionReport:
    detected_strips: Tuple[StripSpec, ...]
    per_row_score: Tuple[float, ...]
    matched: Optional[bool] = None
    missed: Tuple[StripSpec, ...] = ()
    spurious: Tuple[StripSpec, ...] = ()

    @property
    def strip_count(self) -> int:
        return len(self.detected_strips)


def row_runs(flags: np.ndarray) -> List[StripSpec]:
    """Maximal runs of True rows as [start, end) ranges"""
    padded = np.concatenate(([False], np.asarray(flags, dtype=bool), [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [StripSpec(int(start), int(end)) for start, end in zip(edges[::2], edges[1::2])]


def _strips_match(run: StripSpec, strip: StripSpec) -> bool:
    return (abs(run.start_row - strip.start_row) <= MATCH_SLACK
            and abs(run.end_row - strip.end_row) <= MATCH_SLACK)


def match_runs(runs: Sequence[StripSpec],
               strips: Sequence[StripSpec]) -> Tuple[Tuple[StripSpec, ...], Tuple[StripSpec, ...]]:
    """Greedy row-order matching; returns (missed strips, spurious runs)"""
    missed, spurious = [], []
    run_index = strip_index = 0
    while run_index < len(runs) and strip_index < len(strips):
        run, strip = runs[run_index], strips[strip_index]
        if _strips_match(run, strip):
            run_index += 1
            strip_index += 1
        elif run.start_row < strip.start_row:
            spurious.append(run)
            run_index += 1
        else:
            missed.append(strip)
            strip_index += 1
    spurious.extend(runs[run_index:])
    missed.extend(strips[strip_index:])
    return tuple(missed), tuple(spurious)


def verify_against_original(original: RgbImage, attacked: RgbImage, plan: AttackPlan) -> DetectionReport:
    """Match the rows that changed against the plan's strips"""
    if (original.width, original.height) != (attacked.width, attacked.height):
        raise DimensionMismatch(
            f'original is {original.width}x{original.height}, attacked is {attacked.width}x{attacked.height}'
        )
    plan.check_image(original)
    changed = np.any(original.data != attacked.data, axis=(1, 2))
    runs = row_runs(changed)
    missed, spurious = match_runs(runs, plan.strips)
    return DetectionReport(
        detected_strips=tuple(runs),
        per_row_score=tuple(float(flag) for flag in changed),
        matched=not missed and not spurious,
        missed=missed,
        spurious=spurious,
    )


def row_scores(image: RgbImage) -> np.ndarray:
    """Per-row swap evidence in [0, 1)"""
    if image.width < 3:
        return np.zeros(image.height)
    samples = image.data.astype(np.float64)
    residual = np.abs(samples[:, 1:-1] - (samples[:, :-2] + samples[:, 2:]) / 2).mean(axis=1)
    green = residual[:, GREEN]
    others = (residual[:, RED] + residual[:, BLUE]) / 2
    return np.maximum(green - others, 0.0) / (green + others + SCORE_FLOOR)


def detect_heuristic(attacked: RgbImage, threshold: float) -> DetectionReport:
    if not 0.0 <= threshold <= 1.0:
        raise InvalidConfig(f'threshold must lie in [0, 1], got {threshold}')
    scores = row_scores(attacked)
    strips = row_runs(scores > threshold)
    logger.debug('Heuristic found %d strip(s) above %.3f', len(strips), threshold)
    return DetectionReport(tuple(strips), tuple(float(score) for score in scores))
