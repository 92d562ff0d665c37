import numpy as np
import pytest

from misclib.errlib import DomainError
from sharelib.ringlib import RingSpec
from sharelib.rnglib import SeededRng
from sharelib.sharelib import ArithShare, BoolShare, PartyId, sharelib


class Test_sharelib:
    def test_party_id(self):
        assert PartyId(0).peer == PartyId(1)
        assert int(PartyId(1).peer) == 0
        with pytest.raises(DomainError):
            PartyId(2)

    def test_arith_share_with_mask(self):
        spec = RingSpec(16)
        s0, s1 = sharelib.arith_share_with_mask(3, 10, spec)
        assert s0.value == 65529
        assert s1.value == 10
        assert sharelib.arith_reconstruct(s0, s1) == 3
        assert (s0 + s1).value == 3

    @pytest.mark.parametrize('x', [0, 1, 12345, 65535])
    def test_arith_share_reconstructs(self, x):
        spec = RingSpec(16)
        s0, s1 = sharelib.arith_share(x, spec, SeededRng(5))
        assert sharelib.arith_reconstruct(s0, s1) == x

    def test_arith_share_rejects_out_of_ring(self):
        with pytest.raises(DomainError):
            sharelib.arith_share(65536, RingSpec(16), SeededRng(1))
        with pytest.raises(DomainError):
            ArithShare(300, RingSpec(8))

    def test_arith_ring_mismatch(self):
        with pytest.raises(DomainError):
            sharelib.arith_reconstruct(ArithShare(1, RingSpec(16)), ArithShare(1, RingSpec(32)))

    def test_arith_share_vector(self):
        spec = RingSpec(16)
        xs = np.array([3, 5, 7, 65535], dtype=np.uint64)
        own, peer = sharelib.arith_share_vector(xs, spec, SeededRng(8))
        assert ((own + peer) & spec.np_mask).tolist() == xs.tolist()
        with pytest.raises(DomainError):
            sharelib.arith_share_vector(np.array([65536], dtype=np.uint64), spec, SeededRng(8))

    def test_bool_share_with_mask(self):
        x = sharelib.bitvector([1, 0, 1, 1])
        r = sharelib.bitvector([0, 1, 1, 0])
        s0, s1 = sharelib.bool_share_with_mask(x, r)
        assert s0 == sharelib.bitvector([1, 1, 0, 1])
        assert sharelib.bool_reconstruct(s0, s1) == x

    def test_bool_share_reconstructs(self):
        bits = SeededRng(2).packed_bits(77)
        x = BoolShare(bits, 77)
        s0, s1 = sharelib.bool_share(x, SeededRng(3))
        assert sharelib.bool_reconstruct(s0, s1) == x
        assert s1.tobytes() != x.tobytes()

    def test_bool_share_pad_bits(self):
        s = BoolShare(np.array([0xFF], dtype=np.uint8), 3)
        assert s.tobytes() == b'\x07'
        with pytest.raises(DomainError):
            BoolShare(np.array([0xFF, 0x00], dtype=np.uint8), 3)

    def test_bool_length_mismatch(self):
        with pytest.raises(DomainError):
            sharelib.bool_reconstruct(sharelib.bitvector([1, 0]), sharelib.bitvector([1, 0, 1]))

    # region [distribution]
    @staticmethod
    def chi_squared(counts: np.ndarray) -> float:
        expected = counts.sum() / counts.size
        return float(((counts - expected) ** 2 / expected).sum())

    @pytest.mark.parametrize('party', [0, 1])
    def test_single_share_uniform(self, party):
        # 16 bins, df=15, 99% critical value
        spec = RingSpec(4)
        rng = SeededRng(11)
        values = [sharelib.arith_share(5, spec, rng)[party].value for _ in range(20000)]
        counts = np.bincount(values, minlength=16)
        assert counts.size == 16
        assert self.chi_squared(counts) < 30.58

    @pytest.mark.parametrize('n_bits', [1, 7, 64, 1000, 1 << 15])
    def test_bool_round_trip_sizes(self, n_bits):
        x = BoolShare(SeededRng(7).packed_bits(n_bits), n_bits)
        s0, s1 = sharelib.bool_share(x, SeededRng(7).derive('mask'))
        assert sharelib.bool_reconstruct(s0, s1) == x

    def test_bool_round_trip_seed7(self):
        rng = SeededRng(7)
        x = BoolShare(rng.packed_bits(32768), 32768)
        s0, s1 = sharelib.bool_share(x, rng)
        assert s0.n_bits == s1.n_bits == 32768
        assert sharelib.bool_reconstruct(s0, s1) == x

    def test_reshare_fixed_point(self):
        rng = SeededRng(21)
        s0, s1 = BoolShare(rng.packed_bits(1000), 1000), BoolShare(rng.packed_bits(1000), 1000)
        x = sharelib.bool_reconstruct(s0, s1)
        t0, t1 = sharelib.bool_share(x, rng)
        assert sharelib.bool_reconstruct(t0, t1) == x
        assert sharelib.bool_reconstruct(*sharelib.bool_share(sharelib.bool_reconstruct(t0, t1), rng)) == x

    # endregion [distribution]
