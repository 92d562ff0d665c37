"""
Deterministic randomness for shares, dealer triples and benchmark inputs.

NOT CRYPTOGRAPHICALLY SECURE. The generator is numpy's counter-based Philox
keyed by a 64-bit seed; it is chosen for reproducible transcripts, not for
secrecy. Never use this package to protect real data.
"""

import numpy as np

from sharelib.ringlib import RingSpec

MASK64 = (1 << 64) - 1

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def hash64(root_seed: int, label: str, party_id: int = 0) -> int:
    """
    sub_seed = splitmix64(splitmix64(root ^ fnv1a64(label)) ^ party_id)
    """
    h = splitmix64((root_seed & MASK64) ^ fnv1a64(label.encode()))
    return splitmix64(h ^ (party_id & MASK64))


class SeededRng:
    """
    Single-owner deterministic stream. `position` counts 64-bit words drawn.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.position = 0
        self._gen = np.random.Philox(key=self.seed)

    def derive(self, label: str, party_id: int = 0) -> 'SeededRng':
        return SeededRng(hash64(self.seed, label, party_id))

    def words(self, count: int) -> np.ndarray:
        self.position += count
        if count == 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._gen.random_raw(count), dtype=np.uint64)

    def ring_elements(self, count: int, spec: RingSpec) -> np.ndarray:
        return self.words(count) & spec.np_mask

    def ring_element(self, spec: RingSpec) -> int:
        return int(self.ring_elements(1, spec)[0])

    def packed_bits(self, n_bits: int) -> np.ndarray:
        """
        n_bits uniform bits, packed LSB-first, pad bits cleared.
        """
        n_bytes = (n_bits + 7) // 8
        n_words = (n_bytes + 7) // 8
        raw = self.words(n_words).astype('<u8').view(np.uint8)[:n_bytes].copy()
        rem = n_bits % 8
        if rem:
            raw[-1] &= np.uint8((1 << rem) - 1)
        return raw

    def integer(self, n_bits: int) -> int:
        """
        Uniform unsigned integer below 2^n_bits (any width).
        """
        return int.from_bytes(self.packed_bits(n_bits).tobytes(), 'little')
