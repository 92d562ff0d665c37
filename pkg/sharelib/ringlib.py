from dataclasses import dataclass

import numpy as np

from loglib.loglib import loglib
from misclib.errlib import DomainError
from sharelib import DEFAULT_BITLEN, MAX_BITLEN


@dataclass(frozen=True)
class RingSpec:
    """
    The ring Z_{2^l}. Values are carried in 64-bit unsigned words and reduced
    after every operation.
    """

    bit_length: int = DEFAULT_BITLEN

    def __post_init__(self):
        if not isinstance(self.bit_length, int) or not 1 <= self.bit_length <= MAX_BITLEN:
            raise DomainError(f'bit length must be in [1, {MAX_BITLEN}], got {self.bit_length}')

    @property
    def modulus(self) -> int:
        return 1 << self.bit_length

    @property
    def mask(self) -> int:
        return self.modulus - 1

    @property
    def np_mask(self) -> np.uint64:
        return np.uint64(self.mask)

    @property
    def byte_width(self) -> int:
        # l rounded up to whole bytes
        return (self.bit_length + 7) // 8

    def contains(self, v: int) -> bool:
        return 0 <= v < self.modulus


class ringlib:
    slogger = loglib(__name__)

    # region [scalar]
    @staticmethod
    def check(v: int, spec: RingSpec):
        if not spec.contains(int(v)):
            raise DomainError(f'{v} is outside Z_2^{spec.bit_length}')
        return int(v)

    @staticmethod
    def ring_add(a: int, b: int, spec: RingSpec) -> int:
        return (int(a) + int(b)) & spec.mask

    @staticmethod
    def ring_sub(a: int, b: int, spec: RingSpec) -> int:
        return (int(a) - int(b)) & spec.mask

    @staticmethod
    def ring_mul(a: int, b: int, spec: RingSpec) -> int:
        return (int(a) * int(b)) & spec.mask

    # endregion [scalar]

    # region [vector]
    """
    uint64 arithmetic wraps mod 2^64 and 2^l divides 2^64, so masking after
    the wrap gives the exact ring result.
    """

    @staticmethod
    def vec(values, spec: RingSpec) -> np.ndarray:
        arr = np.asarray(values, dtype=np.uint64)
        return arr & spec.np_mask

    @staticmethod
    def vadd(a: np.ndarray, b: np.ndarray, spec: RingSpec) -> np.ndarray:
        return (a + b) & spec.np_mask

    @staticmethod
    def vsub(a: np.ndarray, b: np.ndarray, spec: RingSpec) -> np.ndarray:
        return (a - b) & spec.np_mask

    @staticmethod
    def vmul(a: np.ndarray, b: np.ndarray, spec: RingSpec) -> np.ndarray:
        return (a * b) & spec.np_mask

    # endregion [vector]

    # region [serialization]
    @staticmethod
    def encode(values: np.ndarray, spec: RingSpec) -> bytes:
        """
        Ring elements to byte_width-byte little-endian words, concatenated.
        """

        arr = np.ascontiguousarray(values, dtype='<u8')
        if arr.size == 0:
            return b''
        raw = arr.view(np.uint8).reshape(-1, 8)
        return raw[:, :spec.byte_width].tobytes()

    @staticmethod
    def decode(buf: bytes, spec: RingSpec) -> np.ndarray:
        width = spec.byte_width
        if len(buf) % width:
            raise DomainError(f'{len(buf)} bytes is not a multiple of the {width}-byte ring word')
        count = len(buf) // width
        raw = np.zeros((count, 8), dtype=np.uint8)
        raw[:, :width] = np.frombuffer(buf, dtype=np.uint8).reshape(count, width)
        return raw.view('<u8').reshape(count).astype(np.uint64) & spec.np_mask

    # endregion [serialization]
