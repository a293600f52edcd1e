import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from django.conf import settings

from core.exceptions import DimensionMismatch, ImageTooSmall, InvalidConfig, InvalidPlan
from core.image import RgbImage
from core.prng import Xoshiro256StarStar, check_u64, fnv1a_64

logger = logging.getLogger(__name__)

# rows between consecutive strips: two clean rows outside both reconstruction bands
MIN_STRIP_GAP = 4


class SeverityLevel(Enum):
    UNATTACKED = 'unattacked'
    MILD = 'mild'
    MODERATE = 'moderate'
    SEVERE = 'severe'

    @property
    def strip_range(self) -> Optional[Tuple[int, int]]:
        """Closed range of admissible strip counts, None when unattacked"""
        return STRIP_COUNT_RANGES.get(self)

    @classmethod
    def attacked(cls) -> Tuple['SeverityLevel', ...]:
        return cls.MILD, cls.MODERATE, cls.SEVERE

    @classmethod
    def for_strip_count(cls, count: int) -> 'SeverityLevel':
        """Classify an explicit plan by the number of strips it holds"""
        if count == 0:
            return cls.UNATTACKED
        for level in cls.attacked():
            low, high = level.strip_range
            if low <= count <= high:
                return level
        return cls.SEVERE


STRIP_COUNT_RANGES = {
    SeverityLevel.MILD: (1, 6),
    SeverityLevel.MODERATE: (7, 12),
    SeverityLevel.SEVERE: (13, 20),
}


@dataclass(frozen=True, order=True)
class StripSpec:
    """Impacted rows [start_row, end_row)"""
    start_row: int
    end_row: int

    def __post_init__(self) -> None:
        if self.start_row < 0 or self.end_row <= self.start_row:
            raise InvalidPlan(f'invalid row range [{self.start_row}, {self.end_row})')

    @property
    def height(self) -> int:
        return self.end_row - self.start_row

    @property
    def is_quad_aligned(self) -> bool:
        return self.start_row % 2 == 0 and self.height % 2 == 0 and self.height >= 2

    def band(self, image_height: int) -> Tuple[int, int]:
        """Rows touched by reconstruction: the strip plus one row on each side"""
        return max(self.start_row - 1, 0), min(self.end_row + 1, image_height)

    @classmethod
    def parse(cls, text: str) -> 'StripSpec':
        """Parse 'start-end' (end exclusive)"""
        try:
            start, end = (int(part) for part in text.strip().split('-'))
        except ValueError as exc:
            raise InvalidPlan(f'strip {text!r} is not of the form START-END') from exc
        return cls(start, end)

    def __str__(self) -> str:
        return f'{self.start_row}-{self.end_row}'


@dataclass(frozen=True)
class SamplerConfig:
    min_strip_height: int = 4
    max_strip_height: int = 32
    max_placement_attempts: int = 1000

    def __post_init__(self) -> None:
        low, high = self.min_strip_height, self.max_strip_height
        if not 2 <= low <= high:
            raise InvalidConfig(f'strip heights must satisfy 2 <= min <= max, got [{low}, {high}]')
        if low % 2 or high % 2:
            raise InvalidConfig(f'strip heights must be even, got [{low}, {high}]')
        if self.max_placement_attempts < 1:
            raise InvalidConfig('max_placement_attempts must be at least 1')

    @classmethod
    def from_settings(cls, **overrides) -> 'SamplerConfig':
        """Build from ESIA_STRIP_SAMPLER; keyword overrides that are None are ignored"""
        values = {
            'min_strip_height': settings.ESIA_STRIP_SAMPLER['MIN_STRIP_HEIGHT'],
            'max_strip_height': settings.ESIA_STRIP_SAMPLER['MAX_STRIP_HEIGHT'],
            'max_placement_attempts': settings.ESIA_STRIP_SAMPLER['MAX_PLACEMENT_ATTEMPTS'],
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass(frozen=True)
class AttackPlan:
    """Full provenance of one attack on one image"""
    severity: SeverityLevel
    seed: int
    strips: Tuple[StripSpec, ...]
    image_height: int
    image_width: int

    def __post_init__(self) -> None:
        check_u64(self.seed)
        strips = tuple(self.strips)
        object.__setattr__(self, 'strips', strips)
        if self.image_width < 2 or self.image_height < 2:
            raise InvalidPlan(f'plan dimensions {self.image_width}x{self.image_height} are too small')
        if (self.severity is SeverityLevel.UNATTACKED) != (not strips):
            raise InvalidPlan('a plan has strips exactly when its severity is not unattacked')
        previous = None
        for strip in strips:
            if strip.end_row > self.image_height:
                raise InvalidPlan(f'strip {strip} exceeds image height {self.image_height}')
            if not strip.is_quad_aligned:
                raise InvalidPlan(f'strip {strip} must start on an even row and span an even number of rows')
            if previous is not None and strip.start_row - previous.end_row < MIN_STRIP_GAP:
                raise InvalidPlan(f'strips {previous} and {strip} are not sorted or closer than {MIN_STRIP_GAP} rows')
            previous = strip

    @classmethod
    def explicit(cls, strips: Sequence[StripSpec], image: RgbImage, seed: int = 0,
                 severity: Optional[SeverityLevel] = None) -> 'AttackPlan':
        """Plan from hand-picked strips; the severity count range is not enforced"""
        strips = tuple(sorted(strips))
        if severity is None:
            severity = SeverityLevel.for_strip_count(len(strips))
        return cls(severity, seed, strips, image.height, image.width)

    @property
    def conforms_to_severity(self) -> bool:
        """True when the strip count lies in the severity's range"""
        if self.severity is SeverityLevel.UNATTACKED:
            return not self.strips
        low, high = self.severity.strip_range
        return low <= len(self.strips) <= high

    @property
    def impacted_rows(self) -> int:
        return sum(strip.height for strip in self.strips)

    def bands(self) -> Tuple[Tuple[int, int], ...]:
        """Merged row ranges rewritten by reconstruction (strips plus one row each side)"""
        merged = []
        for strip in self.strips:
            low, high = strip.band(self.image_height)
            if merged and low <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], high))
            else:
                merged.append((low, high))
        return tuple(merged)

    def check_image(self, image: RgbImage) -> None:
        if (image.width, image.height) != (self.image_width, self.image_height):
            raise DimensionMismatch(
                f'plan is for {self.image_width}x{self.image_height}, image is {image.width}x{image.height}'
            )


def derive_seed(master_seed: int, relative_path: str) -> int:
    """Per-image seed: master XOR FNV-1a-64 of the UTF-8 path"""
    return check_u64(master_seed, 'master_seed') ^ fnv1a_64(relative_path.encode('utf-8'))


def sample_plan(severity: SeverityLevel, width: int, height: int, seed: int,
                config: Optional[SamplerConfig] = None) -> AttackPlan:
    """Draw strip count, heights and positions for one image; same inputs, same plan"""
    config = config or SamplerConfig.from_settings()
    check_u64(seed)
    if width < 2 or height < 2:
        raise InvalidConfig(f'image must be at least 2x2, got {width}x{height}')
    if severity is SeverityLevel.UNATTACKED:
        return AttackPlan(severity, seed, (), height, width)

    rng = Xoshiro256StarStar(seed)
    low, high = severity.strip_range
    count = rng.randint(low, high)

    # placement works in 2-row Bayer quads
    quads = height // 2
    gap = MIN_STRIP_GAP // 2
    shortest, tallest = config.min_strip_height // 2, config.max_strip_height // 2
    if count * shortest + (count - 1) * gap > quads:
        raise ImageTooSmall(
            f'{count} strips of at least {config.min_strip_height} rows do not fit in {height} rows'
        )

    for attempt in range(config.max_placement_attempts):
        heights = [rng.randint(shortest, tallest) for _ in range(count)]
        slack = quads - sum(heights) - (count - 1) * gap
        if slack < 0:
            continue
        picks = set()
        while len(picks) < count:
            picks.add(rng.randbelow(slack + count))
        strips, offset = [], 0
        for index, pick in enumerate(sorted(picks)):
            start = pick - index + offset
            strips.append(StripSpec(2 * start, 2 * (start + heights[index])))
            offset += heights[index] + gap
        logger.debug('Placed %d %s strips after %d attempt(s)', count, severity.value, attempt + 1)
        return AttackPlan(severity, seed, tuple(strips), height, width)

    raise ImageTooSmall(
        f'no placement of {count} strips in {height} rows after {config.max_placement_attempts} attempts'
    )
