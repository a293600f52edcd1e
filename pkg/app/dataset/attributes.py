import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from django.conf import settings

from attack.plans import SeverityLevel, derive_seed
from core.exceptions import InvalidConfig
from core.prng import Xoshiro256StarStar

logger = logging.getLogger(__name__)

GROUPS = ('weather', 'scene', 'timeofday')

SEVERITY_ORDER = (
    SeverityLevel.UNATTACKED,
    SeverityLevel.MILD,
    SeverityLevel.MODERATE,
    SeverityLevel.SEVERE,
)

Membership = Tuple[str, str]


@dataclass(frozen=True)
class ImageAttributes:
    """Driving-environment labels of one corpus image"""
    name: str
    weather: str
    scene: str
    timeofday: str

    def value_for(self, group: str) -> str:
        if group not in GROUPS:
            raise InvalidConfig(f'unknown group {group!r}')
        return getattr(self, group)


@dataclass(frozen=True)
class SubcategoryFilter:
    allowed: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    min_images: int = 0

    def __post_init__(self) -> None:
        normalized = {}
        for group in GROUPS:
            values = tuple(' '.join(str(value).lower().split()) for value in self.allowed.get(group, ()))
            if not values:
                raise InvalidConfig(f'allow-list for {group} must not be empty')
            normalized[group] = values
        unknown = set(self.allowed) - set(GROUPS)
        if unknown:
            raise InvalidConfig(f'unknown groups in filter: {", ".join(sorted(unknown))}')
        if self.min_images < 0:
            raise InvalidConfig('min_images must not be negative')
        object.__setattr__(self, 'allowed', normalized)

    @classmethod
    def from_settings(cls, min_images: Optional[int] = None) -> 'SubcategoryFilter':
        config = settings.ESIA_SUBCATEGORY_FILTER
        return cls(
            allowed={group: tuple(config[group]) for group in GROUPS},
            min_images=config['MIN_IMAGES'] if min_images is None else min_images,
        )

    def retained_subcategories(self, items: Iterable[ImageAttributes]) -> Dict[str, Tuple[str, ...]]:
        """Allowed subcategories per group that reach min_images, in allow-list order"""
        items = list(items)
        retained = {}
        for group in GROUPS:
            counts = Counter(item.value_for(group) for item in items)
            retained[group] = tuple(
                value for value in self.allowed[group] if counts[value] and counts[value] >= self.min_images
            )
        return retained

    def memberships(self, items: Iterable[ImageAttributes]) -> Dict[ImageAttributes, Tuple[Membership, ...]]:
        """(group, subcategory) pairs each image contributes to; images with none are left out"""
        items = list(items)
        retained = self.retained_subcategories(items)
        result = {}
        for item in items:
            pairs = tuple(
                (group, item.value_for(group)) for group in GROUPS if item.value_for(group) in retained[group]
            )
            if pairs:
                result[item] = pairs
        return result


def stratum_name(memberships: Sequence[Membership]) -> str:
    """Joint stratum label, e.g. 'weather=clear|scene=highway|timeofday=night'"""
    return '|'.join(f'{group}={value}' for group, value in memberships)


def partition_severity(items: Iterable[ImageAttributes], seed: int,
                       subcategories: Optional[Callable[[ImageAttributes], Sequence[Membership]]] = None,
                       ) -> Dict[ImageAttributes, SeverityLevel]:
    """
    Split images into four severity groups, near-equal inside every subcategory.

    `subcategories` gives the (group, value) pairs an image counts towards;
    without it all items form one subcategory. Images sharing the same pairs
    form a stratum. Strata are taken in name order, their members sorted by
    name and shuffled with a PRNG seeded from (seed, stratum name). Each image
    then takes the level whose largest count over its subcategories is lowest,
    ties broken by the summed count, then the overall count, then severity
    order. Inside one subcategory this is a plain round-robin deal.
    """
    strata: Dict[Tuple[Membership, ...], List[ImageAttributes]] = defaultdict(list)
    for item in items:
        strata[tuple(subcategories(item)) if subcategories else ()].append(item)

    counts: Dict[Membership, List[int]] = defaultdict(lambda: [0] * len(SEVERITY_ORDER))
    overall = [0] * len(SEVERITY_ORDER)
    assignment = {}
    for pairs, name in sorted(((pairs, stratum_name(pairs)) for pairs in strata), key=lambda entry: entry[1]):
        members = sorted(strata[pairs], key=lambda item: item.name)
        Xoshiro256StarStar(derive_seed(seed, name)).shuffle(members)
        rows = [counts[pair] for pair in pairs]
        for item in members:
            index = min(range(len(SEVERITY_ORDER)), key=lambda level: (
                max((row[level] for row in rows), default=0),
                sum(row[level] for row in rows),
                overall[level],
                level,
            ))
            for row in rows:
                row[index] += 1
            overall[index] += 1
            assignment[item] = SEVERITY_ORDER[index]
        logger.debug('Partitioned %d image(s) in stratum %r', len(members), name)
    return assignment
