import numpy as np

from misclib.errlib import DomainError


class bitlib:
    """
    Packed bit vectors: np.uint8 arrays, LSB-first within each byte, pad bits zero.
    """

    @staticmethod
    def nbytes(n_bits: int) -> int:
        return (n_bits + 7) // 8

    @staticmethod
    def pack(bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.uint8)
        return np.packbits(bits & 1, bitorder='little')

    @staticmethod
    def unpack(packed: np.ndarray, n_bits: int) -> np.ndarray:
        return np.unpackbits(np.asarray(packed, dtype=np.uint8), count=n_bits, bitorder='little')

    @staticmethod
    def clear_pad(packed: np.ndarray, n_bits: int) -> np.ndarray:
        rem = n_bits % 8
        if rem and packed.size:
            packed = packed.copy()
            packed[-1] &= np.uint8((1 << rem) - 1)
        return packed

    @staticmethod
    def from_int(value: int, n_bits: int) -> np.ndarray:
        """
        Unsigned integer to packed bits, bit i of value at position i.
        """
        if value < 0 or value >> n_bits:
            raise DomainError(f'{value} does not fit in {n_bits} bits')
        return np.frombuffer(value.to_bytes(bitlib.nbytes(n_bits), 'little'), dtype=np.uint8).copy()

    @staticmethod
    def to_int(packed: np.ndarray, n_bits: int) -> int:
        return int.from_bytes(bitlib.clear_pad(np.asarray(packed, dtype=np.uint8), n_bits).tobytes(), 'little')

    @staticmethod
    def int_to_bits(value: int, n_bits: int) -> np.ndarray:
        return bitlib.unpack(bitlib.from_int(value, n_bits), n_bits)

    @staticmethod
    def bits_to_int(bits) -> int:
        bits = np.asarray(bits, dtype=np.uint8)
        return bitlib.to_int(bitlib.pack(bits), bits.size)
