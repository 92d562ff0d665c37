import itertools

import pytest

from circuitlib import GATE_KIND, VARIANT
from circuitlib.circuitlib import CircuitBuilder, Gate, circuitlib
from misclib.errlib import DomainError, StructuralError
from sharelib import WORLD
from sharelib.bitlib import bitlib
from sharelib.ringlib import RingSpec


class Test_circuitlib:
    # region [builders]
    @pytest.mark.parametrize('n', [1, 2, 3, 8, 13])
    def test_inner_product_shape(self, n):
        c = circuitlib.build_inner_product(n, RingSpec(16))
        assert len(c) == 4 * n
        assert c.world == WORLD.ARITHMETIC
        assert c.input_map == (tuple(range(n)), tuple(range(n, 2 * n)))
        assert circuitlib.count_interactive(c) == (n, 0, 1)
        assert circuitlib.count_kinds(c).get('ADD', 0) == n - 1
        assert c.gates[c.output_ids[0]].kind == GATE_KIND.OUTPUT

    def test_inner_product_plaintext(self):
        c = circuitlib.build_inner_product(2, RingSpec(16))
        assert circuitlib.eval_plaintext(c, [3, 5], [7, 11]) == [76]

    def test_inner_product_wraps(self):
        c = circuitlib.build_inner_product(2, RingSpec(8))
        assert circuitlib.eval_plaintext(c, [16, 1], [16, 3]) == [3]

    def test_inner_product_rejects_empty(self):
        with pytest.raises(DomainError):
            circuitlib.build_inner_product(0)

    @pytest.mark.parametrize('variant', [VARIANT.RIPPLE, VARIANT.TREE])
    def test_millionaire_exhaustive(self, variant):
        n = 4
        c = circuitlib.build_millionaire(n, variant)
        assert c.world == WORLD.BOOLEAN and c.ring is None
        for x, y in itertools.product(range(1 << n), repeat=2):
            out = circuitlib.eval_plaintext(c, bitlib.int_to_bits(x, n).tolist(), bitlib.int_to_bits(y, n).tolist())
            assert out == [int(x > y)], (x, y)

    @pytest.mark.parametrize('n', [1, 3, 32])
    def test_millionaire_and_counts(self, n):
        assert circuitlib.count_interactive(circuitlib.build_millionaire(n, VARIANT.RIPPLE)) == (0, n, 1)
        assert circuitlib.count_interactive(circuitlib.build_millionaire(n, VARIANT.TREE)) == (0, 3 * n - 2, 1)

    def test_millionaire_ripple_starts_with_zero(self):
        c = circuitlib.build_millionaire(2, VARIANT.RIPPLE)
        assert c.gates[4].kind == GATE_KIND.CONST_ZERO
        assert [g.kind for g in c.gates[5:9]] == [GATE_KIND.XOR, GATE_KIND.XOR, GATE_KIND.AND, GATE_KIND.XOR]

    def test_millionaire_bad_variant(self):
        with pytest.raises(DomainError):
            circuitlib.build_millionaire(4, VARIANT.NONE)
        with pytest.raises(DomainError):
            circuitlib.build_millionaire(0)

    def test_builds_are_deterministic(self):
        assert circuitlib.build_millionaire(16).structurally_equal(circuitlib.build_millionaire(16))
        assert not circuitlib.build_millionaire(16).structurally_equal(circuitlib.build_millionaire(16, VARIANT.RIPPLE))

    # endregion [builders]

    # region [validate]
    def test_validate_rejects_bool_gate_in_arith(self):
        b = CircuitBuilder(WORLD.ARITHMETIC, RingSpec(16))
        x = b.gate(GATE_KIND.INPUT_P0)
        y = b.gate(GATE_KIND.INPUT_P1)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.XOR, x, y))
        with pytest.raises(StructuralError):
            b.build()

    def test_validate_rejects_arity(self):
        b = CircuitBuilder(WORLD.BOOLEAN)
        x = b.gate(GATE_KIND.INPUT_P0)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.AND, x))
        with pytest.raises(StructuralError):
            b.build()

    def test_validate_rejects_forward_reference(self):
        b = CircuitBuilder(WORLD.BOOLEAN)
        x = b.gate(GATE_KIND.INPUT_P0)
        b.gates.append(Gate(1, GATE_KIND.XOR, (x, 2), WORLD.BOOLEAN))
        b.gate(GATE_KIND.OUTPUT, 1)
        with pytest.raises(StructuralError):
            b.build()

    def test_validate_rejects_unreachable_output(self):
        b = CircuitBuilder(WORLD.BOOLEAN)
        b.gate(GATE_KIND.INPUT_P0)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.CONST_ONE))
        with pytest.raises(StructuralError):
            b.build()

    def test_validate_rejects_consumed_output(self):
        b = CircuitBuilder(WORLD.BOOLEAN)
        x = b.gate(GATE_KIND.INPUT_P0)
        out = b.gate(GATE_KIND.OUTPUT, x)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.NOT, out))
        with pytest.raises(StructuralError):
            b.build()

    def test_arith_circuit_needs_ring(self):
        b = CircuitBuilder(WORLD.ARITHMETIC)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.INPUT_P0))
        with pytest.raises(StructuralError):
            b.build()

    # endregion [validate]

    def test_eval_plaintext_input_count(self):
        c = circuitlib.build_inner_product(3)
        with pytest.raises(DomainError):
            circuitlib.eval_plaintext(c, [1, 2], [1, 2, 3])

    def test_eval_plaintext_constants(self):
        b = CircuitBuilder(WORLD.BOOLEAN)
        x = b.gate(GATE_KIND.INPUT_P0)
        b.gate(GATE_KIND.INPUT_P1)
        one = b.gate(GATE_KIND.CONST_ONE)
        b.gate(GATE_KIND.OUTPUT, b.gate(GATE_KIND.XOR, x, one))
        c = b.build()
        assert circuitlib.eval_plaintext(c, [1], [0]) == [0]
        assert circuitlib.eval_plaintext(c, [0], [1]) == [1]

    def test_dump(self):
        text = circuitlib.dump(circuitlib.build_inner_product(2, RingSpec(16)))
        lines = text.splitlines()
        assert lines[0] == 'world=A l=16 inputs0=2 inputs1=2 outputs=1'
        assert lines[1:] == ['0 INPUT_P0', '1 INPUT_P0', '2 INPUT_P1', '3 INPUT_P1',
                             '4 MUL 0 2', '5 MUL 1 3', '6 ADD 4 5', '7 OUTPUT 6']
        assert circuitlib.dump(circuitlib.build_millionaire(2)).startswith('world=B l=1 inputs0=2 inputs1=2 outputs=1\n')
