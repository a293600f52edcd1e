import logging
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from core.exceptions import (
    CorruptFile,
    ImageIoError,
    ImageNotFound,
    InvalidImage,
    OutOfBounds,
    UnsupportedFormat,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PNG_SIGNATURE = b'\x89PNG\r\n\x1a\n'
PNG_TRUECOLOR = 2
PPM_MAXVAL = 255
HEADER_BYTES = 1024
PPM_SUFFIXES = ('.ppm', '.pnm')


@dataclass(frozen=True)
class PixelCoord:
    """Pixel address; obtain it from RgbImage.coord so it is always in bounds"""
    row: int
    col: int


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB raster, row-major with interleaved R, G, B samples"""
    data: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.data)
        if array.ndim != 3 or array.shape[2] != 3:
            raise InvalidImage(f'expected a (height, width, 3) raster, got shape {array.shape}')
        if array.dtype != np.uint8:
            if not np.issubdtype(array.dtype, np.integer):
                raise InvalidImage(f'samples must be integers, got {array.dtype}')
            if array.size and (array.min() < 0 or array.max() > 255):
                raise InvalidImage('samples must fit in 8 bits')
        height, width = array.shape[:2]
        if width < 2 or height < 2:
            raise InvalidImage(f'image must be at least 2x2, got {width}x{height}')
        frozen = np.array(array, dtype=np.uint8, order='C', copy=True)
        frozen.flags.writeable = False
        object.__setattr__(self, 'data', frozen)

    @classmethod
    def from_bytes(cls, width: int, height: int, samples: bytes) -> 'RgbImage':
        """Build an image from raw interleaved RGB bytes"""
        if len(samples) != width * height * 3:
            raise InvalidImage(f'expected {width * height * 3} samples, got {len(samples)}')
        return cls(np.frombuffer(samples, dtype=np.uint8).reshape(height, width, 3))

    @classmethod
    def uniform(cls, width: int, height: int, color: Tuple[int, int, int]) -> 'RgbImage':
        """Build an image filled with a single color"""
        if width < 2 or height < 2:
            raise InvalidImage(f'image must be at least 2x2, got {width}x{height}')
        return cls(np.broadcast_to(np.asarray(color, dtype=np.uint8), (height, width, 3)))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def to_bytes(self) -> bytes:
        return self.data.tobytes()

    def coord(self, row: int, col: int) -> PixelCoord:
        """Return the coordinate for (row, col), rejecting anything outside the raster"""
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise OutOfBounds(f'({row}, {col}) outside {self.width}x{self.height} image')
        return PixelCoord(row, col)

    def pixel(self, coord: PixelCoord) -> Tuple[int, int, int]:
        checked = self.coord(coord.row, coord.col)
        red, green, blue = self.data[checked.row, checked.col]
        return int(red), int(green), int(blue)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RgbImage):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    __hash__ = None


def _sniff_png(path: Path, header: bytes) -> None:
    if len(header) < 26 or header[12:16] != b'IHDR':
        raise CorruptFile(f'{path}: truncated PNG header')
    bit_depth, color_type = header[24], header[25]
    if bit_depth != 8:
        raise UnsupportedFormat(f'{path}: {bit_depth}-bit PNG is not supported, only 8-bit')
    if color_type != PNG_TRUECOLOR:
        raise UnsupportedFormat(f'{path}: PNG color type {color_type} is not 8-bit RGB')


def _ppm_header_tokens(header: bytes, count: int) -> list:
    tokens, position = [], 0
    while len(tokens) < count and position < len(header):
        char = header[position:position + 1]
        if char == b'#':
            end = header.find(b'\n', position)
            position = len(header) if end < 0 else end + 1
        elif char.isspace():
            position += 1
        else:
            end = position
            while end < len(header) and not header[end:end + 1].isspace() and header[end:end + 1] != b'#':
                end += 1
            tokens.append(header[position:end])
            position = end
    return tokens


def _sniff_ppm(path: Path, header: bytes) -> None:
    tokens = _ppm_header_tokens(header, 4)
    if len(tokens) < 4:
        raise CorruptFile(f'{path}: truncated PPM header')
    try:
        maxval = int(tokens[3])
    except ValueError as exc:
        raise CorruptFile(f'{path}: malformed PPM header') from exc
    if maxval != PPM_MAXVAL:
        raise UnsupportedFormat(f'{path}: PPM maxval {maxval} is not 8-bit')


def load_image(path: PathLike) -> RgbImage:
    """Read an 8-bit RGB PNG or binary PPM (P6) without any conversion"""
    path = Path(path)
    if not path.is_file():
        raise ImageNotFound(f'{path} does not exist')
    try:
        with path.open('rb') as handle:
            header = handle.read(HEADER_BYTES)
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc

    if header.startswith(PNG_SIGNATURE):
        _sniff_png(path, header)
    elif header.startswith(b'P6'):
        _sniff_ppm(path, header)
    else:
        raise UnsupportedFormat(f'{path}: only 8-bit RGB PNG and binary PPM (P6) are supported')

    try:
        with Image.open(path) as picture:
            picture.load()
            mode = picture.mode
            array = np.array(picture, dtype=np.uint8) if mode == 'RGB' else None
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError, zlib.error) as exc:
        raise CorruptFile(f'{path}: {exc}') from exc
    if array is None:
        raise UnsupportedFormat(f'{path}: decoded mode {mode} is not RGB')
    logger.debug('Loaded %s (%dx%d)', path, array.shape[1], array.shape[0])
    return RgbImage(array)


def save_image(image: RgbImage, path: PathLike) -> None:
    """Write a lossless image: P6 for a .ppm or .pnm suffix, PNG otherwise"""
    path = Path(path)
    fmt = 'PPM' if path.suffix.lower() in PPM_SUFFIXES else 'PNG'
    options = {'compress_level': 6} if fmt == 'PNG' else {}
    try:
        Image.fromarray(np.array(image.data)).save(path, format=fmt, **options)
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc
    logger.debug('Saved %s as %s', path, fmt)
