import logging
from pathlib import Path
from typing import Any, Iterator, List, Tuple

from rest_framework import serializers

from core.exceptions import AttributesParseError, CorruptFile, ImageIoError, MissingField
from core.image import PathLike
from core.serializers import error_message, parse_json, read_json
from dataset.attributes import ImageAttributes
from dataset.serializers import AttributesRecordSerializer, ManifestRecordSerializer

logger = logging.getLogger(__name__)


def _missing_fields(errors: Any, prefix: str = '') -> Iterator[str]:
    if isinstance(errors, dict):
        for key, value in errors.items():
            yield from _missing_fields(value, f'{prefix}{key}.' if key != 'non_field_errors' else prefix)
    elif isinstance(errors, list):
        for item in errors:
            if isinstance(item, serializers.ErrorDetail) and item.code == 'required':
                yield prefix.rstrip('.')
            else:
                yield from _missing_fields(item, prefix)


def ingest_attributes(path: PathLike) -> List[ImageAttributes]:
    """Read a JSON array of {name, attributes: {weather, scene, timeofday}} records"""
    records = read_json(path, error=AttributesParseError)
    if not isinstance(records, list):
        raise AttributesParseError(f'{path}: expected a JSON array of records')

    items, seen = [], set()
    for index, record in enumerate(records):
        serializer = AttributesRecordSerializer(data=record)
        if not serializer.is_valid():
            missing = sorted(set(_missing_fields(serializer.errors)))
            if missing:
                raise MissingField(f'missing {", ".join(missing)}', index)
            raise AttributesParseError(error_message(serializer.errors), index)
        data = serializer.validated_data
        if data['name'] in seen:
            raise AttributesParseError(f'duplicate name {data["name"]!r}', index)
        seen.add(data['name'])
        items.append(ImageAttributes(name=data['name'], **data['attributes']))
    logger.info('Read %d attribute record(s) from %s', len(items), path)
    return items


def read_manifest(path: PathLike) -> List[Tuple[int, dict]]:
    """Validated manifest lines as (line number, data) pairs"""
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except FileNotFoundError as exc:
        raise CorruptFile(f'{path}: manifest not found') from exc
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc

    records = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        data = parse_json(line.encode('utf-8'), f'{path}: line {number}', CorruptFile)
        serializer = ManifestRecordSerializer(data=data)
        if not serializer.is_valid():
            raise CorruptFile(f'{path}: line {number}: {error_message(serializer.errors)}')
        records.append((number, dict(serializer.validated_data)))
    return records
