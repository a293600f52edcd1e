import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from attack.engines import get_engine
from attack.plans import AttackPlan
from attack.serializers import load_plan_sidecar, plan_from_data
from core.bayer import BayerPattern
from core.exceptions import CorruptFile, DimensionMismatch, EsiaError, ImageIoError, ImageNotFound, UnsupportedFormat
from core.image import PathLike, RgbImage, load_image
from core.serializers import read_json
from dataset.ingest import read_manifest
from strips.detection import row_runs, verify_against_original

logger = logging.getLogger(__name__)

UNREADABLE_OUTPUT = (ImageNotFound, CorruptFile, UnsupportedFormat, ImageIoError)


@dataclass
class Mismatch:
    source: str
    output: str
    reason: str
    missed: list = field(default_factory=list)
    spurious: list = field(default_factory=list)


@dataclass
class VerificationSummary:
    checked: int = 0
    matched: int = 0
    skipped: int = 0
    mismatched: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatched

    def add(self, mismatch: Optional[Mismatch]) -> None:
        self.checked += 1
        if mismatch is None:
            self.matched += 1
        else:
            self.mismatched.append(mismatch)
            logger.warning('Mismatch for %s: %s', mismatch.output, mismatch.reason)


def check_output(source_path: Path, output_path: Path, plan: AttackPlan, source: str, output: str,
                 engine: str = 'swap', pattern: Optional[BayerPattern] = None,
                 byte_exact: bool = False) -> Optional[Mismatch]:
    """
    Compare one attacked output with its source; None when it matches the plan.

    Changed rows must cluster onto the plan strips, and the decoded pixels must
    equal a fresh run of the recorded engine on the source.
    """
    if not plan.strips and byte_exact:
        try:
            same = source_path.read_bytes() == output_path.read_bytes()
        except FileNotFoundError:
            return Mismatch(source, output, 'output is missing')
        except OSError as exc:
            raise ImageIoError(f'{source_path}: {exc}') from exc
        return None if same else Mismatch(source, output, 'unattacked output is not a byte copy of its source')

    original = load_image(source_path)
    try:
        attacked: RgbImage = load_image(output_path)
    except UNREADABLE_OUTPUT as exc:
        return Mismatch(source, output, f'unreadable output: {exc}')
    try:
        report = verify_against_original(original, attacked, plan)
    except DimensionMismatch as exc:
        return Mismatch(source, output, str(exc))
    if not report.matched:
        return Mismatch(source, output, 'changed rows do not match the plan',
                        [str(strip) for strip in report.missed], [str(strip) for strip in report.spurious])

    expected = get_engine(engine)(original, plan, pattern or BayerPattern.default())
    if expected == attacked:
        return None
    differing = row_runs(np.any(expected.data != attacked.data, axis=(1, 2)))
    return Mismatch(source, output, 'pixels differ from a regenerated attack',
                    spurious=[str(strip) for strip in differing])


def verify_manifest(manifest_path: PathLike, corpus_dir: PathLike) -> VerificationSummary:
    """Check every generated image listed in a batch manifest once"""
    manifest_path, corpus_dir = Path(manifest_path), Path(corpus_dir)
    out_dir = manifest_path.parent
    summary = VerificationSummary()
    seen = set()
    for number, data in read_manifest(manifest_path):
        if data['output'] in seen:
            continue
        seen.add(data['output'])
        if data.get('error'):
            summary.skipped += 1
            continue
        try:
            plan = plan_from_data(data)
        except EsiaError as exc:
            raise CorruptFile(f'{manifest_path}: line {number}: {exc}') from exc
        summary.add(check_output(corpus_dir / data['source'], out_dir / data['output'], plan,
                                 data['source'], data['output'], data['engine'], data.get('pattern'),
                                 byte_exact=True))
    logger.info('Verified %d image(s), %d mismatched, %d skipped',
                summary.checked, len(summary.mismatched), summary.skipped)
    return summary


def verify_sidecar(sidecar_path: PathLike) -> VerificationSummary:
    """Check a single-image attack against its plan sidecar"""
    sidecar_path = Path(sidecar_path)
    data = load_plan_sidecar(read_json(sidecar_path, error=CorruptFile))
    anchor = sidecar_path.resolve().parent
    summary = VerificationSummary()
    summary.add(check_output(anchor / data['source'], anchor / data['output'], data['plan'],
                             data['source'], data['output'], data['engine'], data.get('pattern')))
    return summary
