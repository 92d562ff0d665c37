from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from loglib.loglib import loglib
from misclib.errlib import DomainError
from sharelib import PARTIES
from sharelib.bitlib import bitlib
from sharelib.ringlib import RingSpec, ringlib
from sharelib.rnglib import SeededRng


@dataclass(frozen=True)
class PartyId:
    id: int

    def __post_init__(self):
        if self.id not in PARTIES:
            raise DomainError(f'party id must be 0 or 1, got {self.id}')

    @property
    def peer(self) -> 'PartyId':
        return PartyId(1 - self.id)

    def __int__(self):
        return self.id


@dataclass(frozen=True)
class ArithShare:
    value: int
    spec: RingSpec = field(default_factory=RingSpec)

    def __post_init__(self):
        ringlib.check(self.value, self.spec)

    def __add__(self, other: 'ArithShare') -> 'ArithShare':
        sharelib.check_same_ring(self, other)
        return ArithShare(ringlib.ring_add(self.value, other.value, self.spec), self.spec)


@dataclass(frozen=True, eq=False)
class BoolShare:
    """
    Packed XOR share of an n_bits vector; pad bits of the last byte are zero.
    """

    bits: np.ndarray
    n_bits: int

    def __post_init__(self):
        packed = np.asarray(self.bits, dtype=np.uint8)
        if packed.size != bitlib.nbytes(self.n_bits):
            raise DomainError(f'{packed.size} bytes cannot hold exactly {self.n_bits} bits')
        object.__setattr__(self, 'bits', bitlib.clear_pad(packed, self.n_bits))

    def __xor__(self, other: 'BoolShare') -> 'BoolShare':
        sharelib.check_same_length(self, other)
        return BoolShare(np.bitwise_xor(self.bits, other.bits), self.n_bits)

    def __eq__(self, other):
        return (isinstance(other, BoolShare) and self.n_bits == other.n_bits
                and np.array_equal(self.bits, other.bits))

    def tobytes(self) -> bytes:
        return self.bits.tobytes()


class sharelib:
    """
    Sharing and reconstruction for additive (Z_2^l) and XOR sharing.
    The input holder keeps x - r (x xor r) and sends the mask r to its peer.
    """

    slogger = loglib(__name__)

    @staticmethod
    def check_same_ring(s0: ArithShare, s1: ArithShare):
        if s0.spec != s1.spec:
            raise DomainError(f'ring mismatch: l={s0.spec.bit_length} vs l={s1.spec.bit_length}')

    @staticmethod
    def check_same_length(s0: BoolShare, s1: BoolShare):
        if s0.n_bits != s1.n_bits:
            raise DomainError(f'length mismatch: {s0.n_bits} vs {s1.n_bits} bits')

    # region [arithmetic]
    @staticmethod
    def arith_share(x: int, spec: RingSpec, rng: SeededRng) -> Tuple[ArithShare, ArithShare]:
        """
        Additively share x.

        Parameters
        ----------
        x : int
            secret in [0, 2^l)
        spec : RingSpec
            ring of the sharing
        rng : SeededRng
            source of the mask r

        Returns
        -------
        tuple
            (holder share x - r, peer share r)
        """

        x = ringlib.check(x, spec)
        r = rng.ring_element(spec)
        return ArithShare(ringlib.ring_sub(x, r, spec), spec), ArithShare(r, spec)

    @staticmethod
    def arith_share_with_mask(x: int, r: int, spec: RingSpec) -> Tuple[ArithShare, ArithShare]:
        x = ringlib.check(x, spec)
        r = ringlib.check(r, spec)
        return ArithShare(ringlib.ring_sub(x, r, spec), spec), ArithShare(r, spec)

    @staticmethod
    def arith_reconstruct(s0: ArithShare, s1: ArithShare) -> int:
        sharelib.check_same_ring(s0, s1)
        return ringlib.ring_add(s0.value, s1.value, s0.spec)

    @staticmethod
    def arith_share_vector(xs: np.ndarray, spec: RingSpec, rng: SeededRng) -> Tuple[np.ndarray, np.ndarray]:
        """
        Vector form of arith_share, masks drawn in order from rng.
        """
        xs = np.asarray(xs, dtype=np.uint64)
        if xs.size and int(xs.max()) > spec.mask:
            raise DomainError(f'input outside Z_2^{spec.bit_length}')
        r = rng.ring_elements(xs.size, spec)
        return ringlib.vsub(xs, r, spec), r

    # endregion [arithmetic]

    # region [boolean]
    @staticmethod
    def bool_share(x: BoolShare, rng: SeededRng) -> Tuple[BoolShare, BoolShare]:
        """
        XOR-share a bit vector: holder gets x xor r, peer gets r.
        `x` is a plain vector carried in a BoolShare container.
        """
        r = BoolShare(rng.packed_bits(x.n_bits), x.n_bits)
        return x ^ r, r

    @staticmethod
    def bool_share_with_mask(x: BoolShare, r: BoolShare) -> Tuple[BoolShare, BoolShare]:
        return x ^ r, r

    @staticmethod
    def bool_reconstruct(s0: BoolShare, s1: BoolShare) -> BoolShare:
        sharelib.check_same_length(s0, s1)
        return s0 ^ s1

    # endregion [boolean]

    @staticmethod
    def bitvector(bits) -> BoolShare:
        """
        Plain bit list (LSB first) to a packed vector.
        """
        bits = np.asarray(bits, dtype=np.uint8)
        return BoolShare(bitlib.pack(bits), int(bits.size))
