from typing import Callable, Optional

from attack.packets import simulate_packet_loss
from attack.plans import AttackPlan
from attack.swap import apply_swap
from core.bayer import BayerPattern
from core.exceptions import InvalidConfig
from core.image import RgbImage

Engine = Callable[[RgbImage, AttackPlan, Optional[BayerPattern]], RgbImage]

ENGINES = {
    'swap': apply_swap,
    'packet': simulate_packet_loss,
}


def get_engine(name: str) -> Engine:
    try:
        return ENGINES[name]
    except KeyError:
        raise InvalidConfig(f'unknown engine {name!r}, expected one of {", ".join(ENGINES)}')
