"""
Insecure trusted dealer standing in for the offline phase.

The dealer sees every triple in the clear. It exists so the online phase can be
timed in isolation; it offers no security whatsoever.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from circuitlib.circuitlib import Circuit, circuitlib
from filelib.filelib import filelib
from loglib.loglib import loglib
from misclib.errlib import ConfigError, DomainError, TripleExhaustedError
from sharelib import WORLD
from sharelib.bitlib import bitlib
from sharelib.ringlib import RingSpec, ringlib
from sharelib.rnglib import SeededRng
from triplelib import BOOL_WORD_BITS, POOL_MAGIC, POOL_VERSION


@dataclass(frozen=True)
class ArithTriple:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class BoolTriple:
    a: int
    b: int
    c: int


class TriplePool:
    """
    One party's triple shares with a consume-once cursor.

    Arithmetic pools keep uint64 ring words; Boolean pools keep packed bits
    (LSB-first), one triple per bit.
    """

    def __init__(self, world: WORLD, a: np.ndarray, b: np.ndarray, c: np.ndarray,
                 count: int, spec: Optional[RingSpec] = None):
        self.world = WORLD(world)
        self.spec = spec
        self.count = count
        self.cursor = 0
        self._a, self._b, self._c = a, b, c

    def __len__(self):
        return self.count

    @property
    def remaining(self) -> int:
        return self.count - self.cursor

    def take(self, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Consume the next k triples.

        Returns
        -------
        tuple
            (a, b, c) arrays of length k: uint64 ring words, or uint8 bits
        """

        if k > self.remaining:
            raise TripleExhaustedError(self.world.name.lower(), k, self.remaining)
        lo, hi = self.cursor, self.cursor + k
        self.cursor = hi
        if self.world == WORLD.ARITHMETIC:
            return self._a[lo:hi], self._b[lo:hi], self._c[lo:hi]
        return tuple(triplelib.bit_slice(arr, lo, hi) for arr in (self._a, self._b, self._c))

    def next(self):
        a, b, c = self.take(1)
        cls = ArithTriple if self.world == WORLD.ARITHMETIC else BoolTriple
        return cls(int(a[0]), int(b[0]), int(c[0]))

    def raw(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._a, self._b, self._c


class triplelib:
    slogger = loglib(__name__)

    @staticmethod
    def bit_slice(packed: np.ndarray, lo: int, hi: int) -> np.ndarray:
        # unpack only the bytes covering [lo, hi)
        first, last = lo // 8, (hi + 7) // 8
        bits = np.unpackbits(packed[first:last], bitorder='little')
        return bits[lo - first * 8: hi - first * 8]

    # region [dealer]
    @staticmethod
    def deal_arith_triples(count: int, spec: RingSpec, seed: int) -> Tuple[TriplePool, TriplePool]:
        """
        Deal `count` additive triples c = a*b mod 2^l.

        Parameters
        ----------
        count : int
            number of triples, >= 0
        spec : RingSpec
            ring of the triples
        seed : int
            dealer seed; same seed gives identical pools

        Returns
        -------
        tuple
            (pool of P0, pool of P1)
        """

        if count < 0:
            raise DomainError(f'triple count must be >= 0, got {count}')
        rng = SeededRng(seed).derive('triples/arith')
        a = rng.ring_elements(count, spec)
        b = rng.ring_elements(count, spec)
        c = ringlib.vmul(a, b, spec)
        a0 = rng.ring_elements(count, spec)
        b0 = rng.ring_elements(count, spec)
        c0 = rng.ring_elements(count, spec)
        pools = (TriplePool(WORLD.ARITHMETIC, a0, b0, c0, count, spec),
                 TriplePool(WORLD.ARITHMETIC, ringlib.vsub(a, a0, spec), ringlib.vsub(b, b0, spec),
                            ringlib.vsub(c, c0, spec), count, spec))
        triplelib.slogger.d(f'dealt {count} arithmetic triples (l={spec.bit_length}, seed={seed})')
        return pools

    @staticmethod
    def deal_bool_triples(bit_count: int, seed: int) -> Tuple[TriplePool, TriplePool]:
        """
        Deal `bit_count` AND triples, batched as packed words.
        """

        if bit_count < 0:
            raise DomainError(f'triple count must be >= 0, got {bit_count}')
        rng = SeededRng(seed).derive('triples/bool')
        a = rng.packed_bits(bit_count)
        b = rng.packed_bits(bit_count)
        c = np.bitwise_and(a, b)
        a0 = rng.packed_bits(bit_count)
        b0 = rng.packed_bits(bit_count)
        c0 = rng.packed_bits(bit_count)
        pools = (TriplePool(WORLD.BOOLEAN, a0, b0, c0, bit_count),
                 TriplePool(WORLD.BOOLEAN, a ^ a0, b ^ b0, c ^ c0, bit_count))
        triplelib.slogger.d(f'dealt {bit_count} Boolean triples (seed={seed})')
        return pools

    @staticmethod
    def budget_for(c: Circuit) -> Tuple[int, int]:
        """
        (n_arith, n_bool): MUL needs an arithmetic triple, AND a Boolean one.
        """
        n_mul, n_and, _ = circuitlib.count_interactive(c)
        return n_mul, n_and

    @staticmethod
    def deal_for(c: Circuit, seed: int, copies: int = 1) -> Tuple[TriplePool, TriplePool]:
        """
        Pools covering `copies` executions of c.
        """
        n_arith, n_bool = triplelib.budget_for(c)
        if c.world == WORLD.ARITHMETIC:
            return triplelib.deal_arith_triples(n_arith * copies, c.ring, seed)
        return triplelib.deal_bool_triples(n_bool * copies, seed)

    # endregion [dealer]

    # region [pool file]
    @staticmethod
    def encode_pool(pool: TriplePool) -> bytes:
        """
        `TRIP v1 <world> <l> <count>\\n` then fixed-width little-endian (a, b, c) records.
        Boolean records hold 64 triples each as three packed u64 words.
        """

        a, b, c = pool.raw()
        if pool.world == WORLD.ARITHMETIC:
            bits = pool.spec.bit_length
            cols = [ringlib.encode(x, pool.spec) for x in (a, b, c)]
            width = pool.spec.byte_width
        else:
            bits = 1
            n_bytes = -(-pool.count // BOOL_WORD_BITS) * 8
            cols = [np.pad(x, (0, n_bytes - x.size)).tobytes() for x in (a, b, c)]
            width = 8
        header = f'{POOL_MAGIC} {POOL_VERSION} {pool.world.tag} {bits} {pool.count}\n'.encode()
        # interleave the three columns record by record
        n_records = len(cols[0]) // width
        stacked = np.stack([np.frombuffer(col, dtype=np.uint8).reshape(n_records, width) for col in cols], axis=1)
        return header + stacked.tobytes()

    @staticmethod
    def decode_pool(buf: bytes) -> TriplePool:
        head, sep, body = buf.partition(b'\n')
        fields = head.decode(errors='replace').split()
        if not sep or len(fields) != 5 or fields[0] != POOL_MAGIC or fields[1] != POOL_VERSION:
            raise ConfigError(f'not a {POOL_MAGIC} {POOL_VERSION} pool file')
        tag, bits, count = fields[2], int(fields[3]), int(fields[4])
        if tag == WORLD.ARITHMETIC.tag:
            spec = RingSpec(bits)
            width, n_records = spec.byte_width, count
        elif tag == WORLD.BOOLEAN.tag:
            spec = None
            width, n_records = 8, -(-count // BOOL_WORD_BITS)
        else:
            raise ConfigError(f'unknown pool world {tag}')
        if len(body) != n_records * width * 3:
            raise ConfigError(f'pool body is {len(body)} bytes, header promises {n_records * width * 3}')

        records = np.frombuffer(body, dtype=np.uint8).reshape(n_records, 3, width)
        cols = [records[:, i, :].tobytes() for i in range(3)]
        if spec:
            a, b, c = (ringlib.decode(col, spec) for col in cols)
            return TriplePool(WORLD.ARITHMETIC, a, b, c, count, spec)
        n_bytes = bitlib.nbytes(count)
        a, b, c = (bitlib.clear_pad(np.frombuffer(col, dtype=np.uint8)[:n_bytes].copy(), count) for col in cols)
        return TriplePool(WORLD.BOOLEAN, a, b, c, count)

    @staticmethod
    def save_pool(pool: TriplePool, path: str):
        if not filelib.file_write_binary(bytearray(triplelib.encode_pool(pool)), path):
            raise ConfigError(f'cannot write triple pool to {path}')
        triplelib.slogger.i(f'wrote {pool.count} {pool.world.name.lower()} triples to {path}')

    @staticmethod
    def load_pool(path: str) -> TriplePool:
        buf = filelib.file_read_binary(path)
        if buf is None:
            raise ConfigError(f'cannot read triple pool {path}')
        return triplelib.decode_pool(buf)

    # endregion [pool file]
