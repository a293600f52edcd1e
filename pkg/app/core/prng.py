"""
Pinned 64-bit pseudo-random generator.

xoshiro256** (Blackman and Vigna) seeded with four successive splitmix64
outputs. All arithmetic is done on Python ints masked to 64 bits, so every
platform draws the same sequence for the same seed.
"""
from typing import MutableSequence

from core.exceptions import InvalidConfig

MASK64 = (1 << 64) - 1
TWO_64 = 1 << 64

GOLDEN_GAMMA = 0x9E3779B97F4A7C15

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def check_u64(value: int, name: str = 'seed') -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= MASK64:
        raise InvalidConfig(f'{name} must be an unsigned 64-bit integer, got {value!r}')
    return value


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash"""
    digest = FNV_OFFSET_BASIS
    for byte in data:
        digest ^= byte
        digest = (digest * FNV_PRIME) & MASK64
    return digest


def _rotl(value: int, shift: int) -> int:
    return ((value << shift) | (value >> (64 - shift))) & MASK64


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = check_u64(seed)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** with the bounded-draw helpers the samplers need"""

    def __init__(self, seed: int) -> None:
        seeder = SplitMix64(seed)
        self.state = [seeder.next_u64() for _ in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.state
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.state = [s0, s1, s2, s3]
        return result

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejecting the biased top of the 64-bit range"""
        if bound < 1:
            raise InvalidConfig(f'bound must be positive, got {bound}')
        limit = TWO_64 - (TWO_64 % bound)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % bound

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in the closed range [low, high]"""
        if high < low:
            raise InvalidConfig(f'empty range [{low}, {high}]')
        return low + self.randbelow(high - low + 1)

    def shuffle(self, items: MutableSequence) -> None:
        """Fisher-Yates, from the last index down"""
        for index in range(len(items) - 1, 0, -1):
            other = self.randbelow(index + 1)
            items[index], items[other] = items[other], items[index]
