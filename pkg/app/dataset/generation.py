"""
Batch dataset generation.

Every retained image gets one severity, keyed on the image and balanced per
joint stratum, and one attacked (or byte-copied) output under out_dir/images.
The manifest then lists the image once for every environmental group it
belongs to. Output bytes depend only on the arguments, never on --jobs.
"""
import logging
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from attack.engines import get_engine
from attack.plans import SamplerConfig, SeverityLevel, StripSpec, derive_seed, sample_plan
from core.bayer import BayerPattern
from core.exceptions import EsiaError, GenerationFailure
from core.image import PathLike, load_image, save_image
from core.prng import check_u64
from core.serializers import render_json
from dataset.attributes import (
    GROUPS,
    SEVERITY_ORDER,
    ImageAttributes,
    SubcategoryFilter,
    partition_severity,
)
from dataset.ingest import ingest_attributes
from dataset.serializers import ManifestRecordSerializer

logger = logging.getLogger(__name__)

IMAGES_DIR = 'images'
MANIFEST_NAME = 'manifest.jsonl'
SUMMARY_JSON = 'summary.json'
SUMMARY_TEXT = 'summary.txt'


@dataclass(frozen=True)
class ManifestRecord:
    source: str
    output: str
    group: str
    subcategory: str
    severity: SeverityLevel
    seed: int
    strips: Tuple[StripSpec, ...]
    width: int
    height: int
    engine: str
    pattern: BayerPattern = BayerPattern.RGGB
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class ImageOutcome:
    """Result of attacking one image, shared by all of its manifest records"""
    item: ImageAttributes
    severity: SeverityLevel
    seed: int
    strips: Tuple[StripSpec, ...] = ()
    width: int = 0
    height: int = 0
    error: Optional[str] = None


@dataclass(frozen=True)
class DatasetManifest:
    out_dir: Path
    records: Tuple[ManifestRecord, ...]
    summary: dict

    @property
    def manifest_path(self) -> Path:
        return self.out_dir / MANIFEST_NAME

    @property
    def failed(self) -> Tuple[ManifestRecord, ...]:
        return tuple(record for record in self.records if record.failed)


class ImageAttacker:
    """Attacks single corpus images; safe to share between worker threads"""

    def __init__(self, corpus_dir: Path, out_dir: Path, master_seed: int, engine: str,
                 sampler: SamplerConfig, pattern: BayerPattern) -> None:
        self.corpus_dir = corpus_dir
        self.images_dir = out_dir / IMAGES_DIR
        self.master_seed = master_seed
        self.engine = get_engine(engine)
        self.sampler = sampler
        self.pattern = pattern

    def __call__(self, job: Tuple[ImageAttributes, SeverityLevel]) -> ImageOutcome:
        item, severity = job
        seed = derive_seed(self.master_seed, item.name)
        source = self.corpus_dir / item.name
        target = self.images_dir / item.name
        image = None
        try:
            image = load_image(source)
            target.parent.mkdir(parents=True, exist_ok=True)
            if severity is SeverityLevel.UNATTACKED:
                shutil.copyfile(source, target)
                strips = ()
            else:
                plan = sample_plan(severity, image.width, image.height, seed, self.sampler)
                save_image(self.engine(image, plan, self.pattern), target)
                strips = plan.strips
        except (EsiaError, OSError) as exc:
            target.unlink(missing_ok=True)
            logger.warning('Failed to generate %s (%s): %s', item.name, severity.value, exc)
            width, height = (image.width, image.height) if image is not None else (0, 0)
            return ImageOutcome(item, severity, seed, (), width, height, str(exc))
        logger.debug('Generated %s as %s with %d strip(s)', item.name, severity.value, len(strips))
        return ImageOutcome(item, severity, seed, strips, image.width, image.height)


def _prepare_out_dir(out_dir: Path) -> None:
    try:
        (out_dir / IMAGES_DIR).mkdir(parents=True, exist_ok=True)
        marker = out_dir / '.write-check'
        marker.write_bytes(b'')
        marker.unlink()
    except OSError as exc:
        raise GenerationFailure(f'{out_dir} is not writable: {exc}') from exc


def build_records(outcomes: List[ImageOutcome], memberships: Dict[ImageAttributes, tuple],
                  engine: str, pattern: BayerPattern) -> Tuple[ManifestRecord, ...]:
    """One record per (image, group) membership, ordered by source path then group"""
    records = []
    for outcome in sorted(outcomes, key=lambda outcome: outcome.item.name):
        for group, subcategory in memberships[outcome.item]:
            records.append(ManifestRecord(
                source=outcome.item.name,
                output=f'{IMAGES_DIR}/{outcome.item.name}',
                group=group,
                subcategory=subcategory,
                severity=outcome.severity,
                seed=outcome.seed,
                strips=outcome.strips,
                width=outcome.width,
                height=outcome.height,
                engine=engine,
                pattern=pattern,
                error=outcome.error,
            ))
    return tuple(records)


def summarize(records: Tuple[ManifestRecord, ...], retained: Dict[str, Tuple[str, ...]],
              master_seed: int, engine: str) -> dict:
    """Per-group, per-subcategory, per-severity counts"""
    groups = {}
    for group in GROUPS:
        subcategories = {}
        for subcategory in retained[group]:
            chosen = [record for record in records if (record.group, record.subcategory) == (group, subcategory)]
            counts = {'total': len(chosen)}
            counts.update({
                level.value: sum(record.severity is level for record in chosen) for level in SEVERITY_ORDER
            })
            counts['failed'] = sum(record.failed for record in chosen)
            subcategories[subcategory] = counts
        groups[group] = {
            'total': sum(counts['total'] for counts in subcategories.values()),
            'subcategories': subcategories,
        }
    return {
        'master_seed': master_seed,
        'engine': engine,
        'images': len({record.source for record in records}),
        'records': len(records),
        'failed_images': len({record.source for record in records if record.failed}),
        'groups': groups,
    }


def render_summary_text(summary: dict) -> str:
    """Plain listing in the 'Clear (5346)' style"""
    lines = []
    for group in GROUPS:
        entry = summary['groups'][group]
        cells = ', '.join(
            f'{name.title()} ({counts["total"]})' for name, counts in entry['subcategories'].items()
        )
        lines.append(f'{group.title()} ({entry["total"]}): {cells}')
    lines.append(f'Images: {summary["images"]}, records: {summary["records"]}, '
                 f'failed images: {summary["failed_images"]}')
    return '\n'.join(lines) + '\n'


def write_manifest(manifest: DatasetManifest) -> None:
    lines = [render_json(ManifestRecordSerializer(record).data) for record in manifest.records]
    try:
        manifest.manifest_path.write_bytes(b''.join(line + b'\n' for line in lines))
        (manifest.out_dir / SUMMARY_JSON).write_bytes(render_json(manifest.summary, indent=2) + b'\n')
        (manifest.out_dir / SUMMARY_TEXT).write_text(render_summary_text(manifest.summary), encoding='utf-8')
    except OSError as exc:
        raise GenerationFailure(f'cannot write manifest to {manifest.out_dir}: {exc}') from exc


def generate(corpus_dir: PathLike, attributes: PathLike, out_dir: PathLike, master_seed: int,
             engine: str = 'swap', subcategory_filter: Optional[SubcategoryFilter] = None,
             sampler: Optional[SamplerConfig] = None, pattern: Optional[BayerPattern] = None,
             jobs: int = 1) -> DatasetManifest:
    """Filter, partition, attack and record a labelled corpus"""
    check_u64(master_seed, 'master_seed')
    corpus_dir, out_dir = Path(corpus_dir), Path(out_dir)
    subcategory_filter = subcategory_filter or SubcategoryFilter.from_settings()
    sampler = sampler or SamplerConfig.from_settings()
    pattern = pattern or BayerPattern.default()
    attacker = ImageAttacker(corpus_dir, out_dir, master_seed, engine, sampler, pattern)

    items = ingest_attributes(attributes)
    memberships = subcategory_filter.memberships(items)
    retained = subcategory_filter.retained_subcategories(items)
    severities = partition_severity(memberships, master_seed, memberships.__getitem__)
    _prepare_out_dir(out_dir)

    jobs_list = [(item, severities[item]) for item in sorted(memberships, key=lambda item: item.name)]
    logger.info('Generating %d of %d image(s) into %s with %d job(s)', len(jobs_list), len(items), out_dir, jobs)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(attacker, jobs_list))
    else:
        outcomes = [attacker(job) for job in jobs_list]

    records = build_records(outcomes, memberships, engine, pattern)
    manifest = DatasetManifest(out_dir, records, summarize(records, retained, master_seed, engine))
    write_manifest(manifest)
    logger.info('Wrote %d record(s), %d failed image(s)', len(records), manifest.summary['failed_images'])
    return manifest
