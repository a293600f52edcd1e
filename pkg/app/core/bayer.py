"""
Camera-native colour filter array (CFA) representation.

mosaic() samples one channel per pixel according to a Bayer pattern and
demosaic() rebuilds three channels with bilinear interpolation. Borders
replicate the edge Bayer quad (scipy's 'mirror' mode), so every tap reads a
site of the channel being interpolated.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from django.conf import settings
from PIL import Image
from scipy.ndimage import convolve

from core.exceptions import ImageIoError, InvalidConfig, InvalidImage, OutOfBounds
from core.image import PathLike, RgbImage

logger = logging.getLogger(__name__)

RED, GREEN, BLUE = 0, 1, 2
CHANNEL_INDEX = {'R': RED, 'G': GREEN, 'B': BLUE}

GREEN_KERNEL = np.array([[0, 1, 0],
                         [1, 4, 1],
                         [0, 1, 0]], dtype=np.float64) / 4
RED_BLUE_KERNEL = np.array([[1, 2, 1],
                            [2, 4, 2],
                            [1, 2, 1]], dtype=np.float64) / 4


class BayerPattern(Enum):
    """2x2 Bayer quad named in reading order: upper-left, upper-right, bottom-left, bottom-right"""
    RGGB = 'RGGB'
    GRBG = 'GRBG'
    GBRG = 'GBRG'
    BGGR = 'BGGR'

    @classmethod
    def from_name(cls, name: str) -> 'BayerPattern':
        try:
            return cls(name.strip().upper())
        except ValueError as exc:
            raise InvalidConfig(f'unknown Bayer pattern {name!r}') from exc

    @classmethod
    def default(cls) -> 'BayerPattern':
        return cls.from_name(settings.ESIA_BAYER_PATTERN)

    @property
    def sites(self) -> np.ndarray:
        """Channel index of each quad position as a 2x2 array"""
        letters = [CHANNEL_INDEX[letter] for letter in self.value]
        return np.array(letters, dtype=np.intp).reshape(2, 2)

    def channel_at(self, row: int, col: int) -> int:
        return int(self.sites[row % 2, col % 2])

    def site_map(self, height: int, width: int) -> np.ndarray:
        """Channel index for every pixel of a height x width frame"""
        rows = np.arange(height) % 2
        cols = np.arange(width) % 2
        return self.sites[rows[:, None], cols[None, :]]

    def shifted(self, rows: int, cols: int = 0) -> 'BayerPattern':
        """Pattern seen by a window whose origin sits at (rows, cols) of this frame"""
        sites = np.roll(self.sites, shift=(-(rows % 2), -(cols % 2)), axis=(0, 1))
        letters = ''.join('RGB'[index] for index in sites.ravel())
        return BayerPattern(letters)


@dataclass(frozen=True, eq=False)
class CfaImage:
    """Single-channel 8-bit raster tagged with the Bayer pattern that produced it"""
    data: np.ndarray
    pattern: BayerPattern = BayerPattern.RGGB

    def __post_init__(self) -> None:
        array = np.asarray(self.data)
        if array.ndim != 2:
            raise InvalidImage(f'CFA data must be two-dimensional, got shape {array.shape}')
        if array.shape[0] < 2 or array.shape[1] < 2:
            raise InvalidImage(f'CFA must be at least 2x2, got {array.shape[1]}x{array.shape[0]}')
        if array.dtype != np.uint8 and array.size and (array.min() < 0 or array.max() > 255):
            raise InvalidImage('CFA samples must fit in 8 bits')
        frozen = np.array(array, dtype=np.uint8, order='C', copy=True)
        frozen.flags.writeable = False
        object.__setattr__(self, 'data', frozen)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def window(self, start: int, stop: int) -> 'CfaImage':
        """Rows [start, stop) as a CFA whose pattern is re-phased to the window origin"""
        if not (0 <= start < stop <= self.height):
            raise OutOfBounds(f'rows [{start}, {stop}) outside CFA of height {self.height}')
        return CfaImage(self.data[start:stop], self.pattern.shifted(start))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CfaImage):
            return NotImplemented
        return self.pattern is other.pattern and np.array_equal(self.data, other.data)

    __hash__ = None


def mosaic(image: RgbImage, pattern: BayerPattern = BayerPattern.RGGB) -> CfaImage:
    """Keep, at every pixel, the channel the pattern places there"""
    sites = pattern.site_map(image.height, image.width)
    samples = np.take_along_axis(image.data, sites[..., None], axis=2)[..., 0]
    return CfaImage(samples, pattern)


def demosaic(cfa: CfaImage) -> RgbImage:
    """Bilinear reconstruction; averages round half away from zero"""
    samples = cfa.data.astype(np.float64)
    sites = cfa.pattern.site_map(cfa.height, cfa.width)
    planes = []
    for channel in (RED, GREEN, BLUE):
        known = np.where(sites == channel, samples, 0.0)
        kernel = GREEN_KERNEL if channel == GREEN else RED_BLUE_KERNEL
        planes.append(convolve(known, kernel, mode='mirror'))
    rebuilt = np.floor(np.stack(planes, axis=-1) + 0.5)
    return RgbImage(np.clip(rebuilt, 0, 255).astype(np.uint8))


def save_cfa_dump(cfa: CfaImage, path: PathLike) -> None:
    """Write the CFA samples as an 8-bit grayscale PGM (.pgm/.ppm) or PNG for inspection"""
    path = Path(path)
    fmt = 'PPM' if path.suffix.lower() in ('.pgm', '.ppm') else 'PNG'
    try:
        Image.fromarray(np.array(cfa.data)).save(path, format=fmt)
    except OSError as exc:
        raise ImageIoError(f'{path}: {exc}') from exc
    logger.info('Wrote %s CFA dump to %s', cfa.pattern.value, path)
