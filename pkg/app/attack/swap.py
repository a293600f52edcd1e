"""
Fast colour-strip synthesis on the virtual CFA of an RGB image.

For every impacted row i the sample the Bayer pattern places at (i, col) is
overwritten with the channel the pattern places at (i + 1, col), read from the
original pixel one row down. Under RGGB that is: even rows take r <- g2 and
g1 <- b, odd rows take g2 <- r and b <- g1. The touched band is then
re-mosaiced and demosaiced and spliced back; all other rows keep their bytes.
"""
import logging
from typing import Optional

import numpy as np

from attack.plans import AttackPlan
from core.bayer import BayerPattern, demosaic, mosaic
from core.image import RgbImage

logger = logging.getLogger(__name__)


def overwrite_sites(image: RgbImage, plan: AttackPlan, pattern: BayerPattern) -> np.ndarray:
    """Apply the per-site channel overwrites and return the working raster"""
    source = image.data
    working = np.array(source)
    last_row = image.height - 1
    cols = np.arange(image.width)
    for strip in plan.strips:
        rows = np.arange(strip.start_row, strip.end_row)
        below = np.minimum(rows + 1, last_row)
        own = pattern.sites[(rows % 2)[:, None], (cols % 2)[None, :]]
        taken = pattern.sites[((rows + 1) % 2)[:, None], (cols % 2)[None, :]]
        working[rows[:, None], cols[None, :], own] = source[below[:, None], cols[None, :], taken]
    return working


def apply_swap(image: RgbImage, plan: AttackPlan, pattern: Optional[BayerPattern] = None) -> RgbImage:
    """Corrupt the plan's strips; rows outside every strip +-1 stay byte-identical"""
    pattern = pattern or BayerPattern.default()
    plan.check_image(image)
    if not plan.strips:
        return image

    cfa = mosaic(RgbImage(overwrite_sites(image, plan, pattern)), pattern)
    result = np.array(image.data)
    for low, high in plan.bands():
        context_low, context_high = max(low - 1, 0), min(high + 1, image.height)
        rebuilt = demosaic(cfa.window(context_low, context_high))
        result[low:high] = rebuilt.data[low - context_low:high - context_low]
    logger.debug('Swapped %d strip(s), %d impacted rows', len(plan.strips), plan.impacted_rows)
    return RgbImage(result)
