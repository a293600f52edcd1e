import io
from pathlib import Path
from typing import Any, Optional, Type

from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from core.bayer import BayerPattern
from core.exceptions import EsiaError, ImageIoError, InvalidConfig
from core.image import PathLike
from core.prng import MASK64


class PatternField(serializers.ChoiceField):
    def __init__(self, **kwargs) -> None:
        super().__init__(choices=[pattern.value for pattern in BayerPattern], **kwargs)

    def to_internal_value(self, data) -> BayerPattern:
        return BayerPattern(super().to_internal_value(str(data).upper()))

    def to_representation(self, value) -> str:
        return BayerPattern(value).value


class SeedField(serializers.IntegerField):
    def __init__(self, **kwargs) -> None:
        super().__init__(min_value=0, max_value=MASK64, **kwargs)


def error_message(detail: Any) -> str:
    """Flatten a DRF error structure into 'field: message' text"""
    if isinstance(detail, dict):
        parts = []
        for key, value in detail.items():
            text = error_message(value)
            parts.append(text if key == 'non_field_errors' else f'{key}: {text}')
        return '; '.join(parts)
    if isinstance(detail, list):
        return '; '.join(error_message(item) for item in detail if item)
    return str(detail)


def render_json(data: Any, indent: Optional[int] = None) -> bytes:
    context = {'indent': indent} if indent else {}
    return JSONRenderer().render(data, renderer_context=context)


def write_json(path: PathLike, data: Any, indent: Optional[int] = 2) -> None:
    path = Path(path)
    try:
        path.write_bytes(render_json(data, indent) + b'\n')
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc


def parse_json(content: bytes, where: str, error: Type[EsiaError] = InvalidConfig) -> Any:
    try:
        return JSONParser().parse(io.BytesIO(content))
    except ParseError as exc:
        raise error(f'{where}: {exc.detail}') from exc


def read_json(path: PathLike, error: Type[EsiaError] = InvalidConfig) -> Any:
    """Parse a JSON file, raising `error` for unreadable or malformed content"""
    path = Path(path)
    try:
        content = path.read_bytes()
    except OSError as exc:
        raise error(f'{path}: {exc.strerror or exc}') from exc
    return parse_json(content, str(path), error)
