"""
Rows-as-packets camera link model.

Each CFA row travels as one packet. A loss event on strip [s, e) drops packet
s, shifts packets s+1 .. e-1 up by one slot and repeats packet e-1 in the
resync slot, after which the stream is aligned again. The receiver decodes
every slot with the Bayer parity of that slot, so a shifted payload is read
with the wrong colours.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from attack.plans import AttackPlan, StripSpec
from core.bayer import BayerPattern, CfaImage, demosaic, mosaic
from core.exceptions import InvalidImage, OutOfRange, OverlappingEvents, PacketCountMismatch
from core.image import RgbImage

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PacketStream:
    packets: Tuple[np.ndarray, ...]
    width: int
    pattern: BayerPattern
    height: int

    def __post_init__(self) -> None:
        packets = []
        for index, packet in enumerate(self.packets):
            payload = np.array(packet, dtype=np.uint8)
            if payload.shape != (self.width,):
                raise InvalidImage(f'packet {index} carries {payload.size} samples, expected {self.width}')
            payload.flags.writeable = False
            packets.append(payload)
        object.__setattr__(self, 'packets', tuple(packets))

    def __len__(self) -> int:
        return len(self.packets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PacketStream):
            return NotImplemented
        return (
            (self.width, self.height, self.pattern) == (other.width, other.height, other.pattern)
            and len(self.packets) == len(other.packets)
            and all(np.array_equal(a, b) for a, b in zip(self.packets, other.packets))
        )

    __hash__ = None


@dataclass(frozen=True)
class LossEvent:
    """Rows whose displayed content is misaligned by one lost packet"""
    strip: StripSpec


def to_packets(cfa: CfaImage) -> PacketStream:
    return PacketStream(tuple(cfa.data), cfa.width, cfa.pattern, cfa.height)


def inject_loss(stream: PacketStream, events: Iterable[LossEvent]) -> PacketStream:
    """Drop one packet per event and shift the rest of the strip up to the resync slot"""
    ordered = sorted(events, key=lambda event: event.strip)
    for event in ordered:
        if event.strip.end_row > len(stream):
            raise OutOfRange(f'loss event {event.strip} beyond {len(stream)} packets')
    for first, second in zip(ordered, ordered[1:]):
        if second.strip.start_row < first.strip.end_row:
            raise OverlappingEvents(f'loss events {first.strip} and {second.strip} overlap')

    packets = list(stream.packets)
    for event in ordered:
        start, end = event.strip.start_row, event.strip.end_row
        packets[start:end - 1] = stream.packets[start + 1:end]
    return PacketStream(tuple(packets), stream.width, stream.pattern, stream.height)


def reassemble(stream: PacketStream) -> CfaImage:
    """Stack packets into a frame, keeping each slot's original Bayer parity"""
    if len(stream) != stream.height:
        raise PacketCountMismatch(f'received {len(stream)} packets for a {stream.height}-row frame')
    return CfaImage(np.stack(stream.packets), stream.pattern)


def simulate_packet_loss(image: RgbImage, plan: AttackPlan,
                         pattern: Optional[BayerPattern] = None) -> RgbImage:
    """End-to-end link simulation; rows outside every strip +-1 are delivered untouched"""
    pattern = pattern or BayerPattern.default()
    plan.check_image(image)
    if not plan.strips:
        return image

    stream = inject_loss(to_packets(mosaic(image, pattern)), [LossEvent(strip) for strip in plan.strips])
    rebuilt = demosaic(reassemble(stream))
    result = np.array(image.data)
    for low, high in plan.bands():
        result[low:high] = rebuilt.data[low:high]
    logger.debug('Lost %d packet(s) across %d strip(s)', len(plan.strips), len(plan.strips))
    return RgbImage(result)
