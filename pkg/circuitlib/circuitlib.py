from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from circuitlib import ARITH_ONLY_KINDS, ARITY, BOOL_ONLY_KINDS, GATE_KIND, INPUT_KINDS, VARIANT
from loglib.loglib import loglib
from misclib.errlib import DomainError, StructuralError
from sharelib import WORLD
from sharelib.ringlib import RingSpec, ringlib


@dataclass(frozen=True)
class Gate:
    gate_id: int
    kind: GATE_KIND
    inputs: Tuple[int, ...]
    share_world: WORLD


@dataclass(frozen=True, eq=False)
class Circuit:
    """
    Topologically numbered gate list. `input_map[p]` lists party p's input
    gates in input order; `ring` is None for Boolean circuits.
    """

    gates: Tuple[Gate, ...]
    input_map: Tuple[Tuple[int, ...], Tuple[int, ...]]
    output_ids: Tuple[int, ...]
    world: WORLD
    ring: Optional[RingSpec] = None

    def __len__(self):
        return len(self.gates)

    @cached_property
    def kinds(self) -> np.ndarray:
        return np.fromiter((g.kind for g in self.gates), dtype=np.int8, count=len(self.gates))

    @cached_property
    def in0(self) -> np.ndarray:
        return np.fromiter((g.inputs[0] if g.inputs else -1 for g in self.gates),
                           dtype=np.int64, count=len(self.gates))

    @cached_property
    def in1(self) -> np.ndarray:
        return np.fromiter((g.inputs[1] if len(g.inputs) > 1 else -1 for g in self.gates),
                           dtype=np.int64, count=len(self.gates))

    def structurally_equal(self, other: 'Circuit') -> bool:
        return (self.gates == other.gates and self.input_map == other.input_map
                and self.output_ids == other.output_ids and self.world == other.world
                and self.ring == other.ring)


class CircuitBuilder:
    """
    Appends gates with dense ids; inputs always reference earlier gates.
    """

    def __init__(self, world: WORLD, ring: Optional[RingSpec] = None):
        self.world = world
        self.ring = ring
        self.gates: List[Gate] = []
        self.inputs: Tuple[List[int], List[int]] = ([], [])
        self.outputs: List[int] = []

    def gate(self, kind: GATE_KIND, *inputs: int) -> int:
        gate_id = len(self.gates)
        self.gates.append(Gate(gate_id, kind, tuple(inputs), self.world))
        if kind in INPUT_KINDS:
            self.inputs[int(kind == GATE_KIND.INPUT_P1)].append(gate_id)
        elif kind == GATE_KIND.OUTPUT:
            self.outputs.append(gate_id)
        return gate_id

    def build(self) -> Circuit:
        c = Circuit(gates=tuple(self.gates),
                    input_map=(tuple(self.inputs[0]), tuple(self.inputs[1])),
                    output_ids=tuple(self.outputs),
                    world=self.world,
                    ring=self.ring)
        circuitlib.validate(c)
        return c


class circuitlib:
    slogger = loglib(__name__)

    # region [builders]
    @staticmethod
    def build_inner_product(n: int, spec: RingSpec = None) -> Circuit:
        """
        Inner product of P0's and P1's n-element vectors over Z_2^l.

        Parameters
        ----------
        n : int
            element count, n >= 1
        spec : RingSpec
            ring of the elements (default l=16)

        Returns
        -------
        Circuit
            n MUL gates, balanced tree of n-1 ADD gates, one OUTPUT
        """

        if n < 1:
            raise DomainError(f'inner product needs n >= 1, got {n}')
        spec = spec or RingSpec()

        b = CircuitBuilder(WORLD.ARITHMETIC, spec)
        xs = [b.gate(GATE_KIND.INPUT_P0) for _ in range(n)]
        ys = [b.gate(GATE_KIND.INPUT_P1) for _ in range(n)]
        terms = [b.gate(GATE_KIND.MUL, x, y) for x, y in zip(xs, ys)]

        # balanced reduction, odd element carried to the next level
        while len(terms) > 1:
            nxt = [b.gate(GATE_KIND.ADD, terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
            if len(terms) % 2:
                nxt.append(terms[-1])
            terms = nxt

        b.gate(GATE_KIND.OUTPUT, terms[0])
        return b.build()

    @staticmethod
    def build_millionaire(n_bits: int, variant: VARIANT = VARIANT.TREE) -> Circuit:
        """
        Boolean GT(x, y) = 1 iff x > y, x from P0 and y from P1, LSB-first bits.
        """

        if n_bits < 1:
            raise DomainError(f'millionaire needs n_bits >= 1, got {n_bits}')
        variant = VARIANT(variant)

        b = CircuitBuilder(WORLD.BOOLEAN)
        xs = [b.gate(GATE_KIND.INPUT_P0) for _ in range(n_bits)]
        ys = [b.gate(GATE_KIND.INPUT_P1) for _ in range(n_bits)]

        if variant == VARIANT.RIPPLE:
            gt = circuitlib._ripple_gt(b, xs, ys)
        elif variant == VARIANT.TREE:
            gt = circuitlib._tree_gt(b, xs, ys)
        else:
            raise DomainError(f'unknown millionaire variant: {variant}')

        b.gate(GATE_KIND.OUTPUT, gt)
        return b.build()

    @staticmethod
    def _ripple_gt(b: CircuitBuilder, xs: List[int], ys: List[int]) -> int:
        # gt_{i+1} = x_i ^ ((x_i ^ gt_i) & (y_i ^ gt_i)), gt_0 = 0
        gt = b.gate(GATE_KIND.CONST_ZERO)
        for x, y in zip(xs, ys):
            tx = b.gate(GATE_KIND.XOR, x, gt)
            ty = b.gate(GATE_KIND.XOR, y, gt)
            both = b.gate(GATE_KIND.AND, tx, ty)
            gt = b.gate(GATE_KIND.XOR, x, both)
        return gt

    @staticmethod
    def _tree_gt(b: CircuitBuilder, xs: List[int], ys: List[int]) -> int:
        # leaves: gt_i = x_i & ~y_i, eq_i = ~(x_i ^ y_i); segments ordered MSB first
        segments = []
        for x, y in zip(reversed(xs), reversed(ys)):
            not_y = b.gate(GATE_KIND.NOT, y)
            gt = b.gate(GATE_KIND.AND, x, not_y)
            eq = b.gate(GATE_KIND.NOT, b.gate(GATE_KIND.XOR, x, y))
            segments.append((gt, eq))

        # GT = gt_hi ^ (eq_hi & gt_lo), EQ = eq_hi & eq_lo
        while len(segments) > 1:
            merged = []
            for i in range(0, len(segments) - 1, 2):
                (gt_hi, eq_hi), (gt_lo, eq_lo) = segments[i], segments[i + 1]
                carry = b.gate(GATE_KIND.AND, eq_hi, gt_lo)
                gt = b.gate(GATE_KIND.XOR, gt_hi, carry)
                eq = b.gate(GATE_KIND.AND, eq_hi, eq_lo)
                merged.append((gt, eq))
            if len(segments) % 2:
                merged.append(segments[-1])
            segments = merged

        return segments[0][0]

    # endregion [builders]

    @staticmethod
    def validate(c: Circuit):
        """
        Check numbering, arity, world discipline, input map and output reachability.
        Raises StructuralError on the first violation.
        """

        reached = np.zeros(len(c.gates), dtype=bool)
        for idx, g in enumerate(c.gates):
            if g.gate_id != idx:
                raise StructuralError(f'gate {idx} carries id {g.gate_id}')
            if len(g.inputs) != ARITY[g.kind]:
                raise StructuralError(f'gate {idx} {g.kind.name} has {len(g.inputs)} inputs')
            for src in g.inputs:
                if not 0 <= src < idx:
                    raise StructuralError(f'gate {idx} references gate {src} (not topological)')
                if c.gates[src].kind == GATE_KIND.OUTPUT:
                    raise StructuralError(f'gate {idx} consumes OUTPUT gate {src}')
            if g.share_world != c.world:
                raise StructuralError(f'gate {idx} lives in {g.share_world.name}, circuit in {c.world.name}')
            if c.world == WORLD.ARITHMETIC and g.kind in BOOL_ONLY_KINDS:
                raise StructuralError(f'gate {idx} {g.kind.name} in an arithmetic circuit')
            if c.world == WORLD.BOOLEAN and g.kind in ARITH_ONLY_KINDS:
                raise StructuralError(f'gate {idx} {g.kind.name} in a Boolean circuit')
            reached[idx] = g.kind in INPUT_KINDS or any(reached[s] for s in g.inputs)

        for party, ids in enumerate(c.input_map):
            kind = INPUT_KINDS[party]
            if any(c.gates[i].kind != kind for i in ids):
                raise StructuralError(f'input_map[{party}] lists a gate that is not {kind.name}')
        n_inputs = sum(1 for g in c.gates if g.kind in INPUT_KINDS)
        if n_inputs != len(c.input_map[0]) + len(c.input_map[1]):
            raise StructuralError('input_map does not cover every input gate')
        for out in c.output_ids:
            if c.gates[out].kind != GATE_KIND.OUTPUT:
                raise StructuralError(f'output id {out} is not an OUTPUT gate')
            if not reached[out]:
                raise StructuralError(f'OUTPUT {out} is not reachable from any input')
        if c.world == WORLD.ARITHMETIC and c.ring is None:
            raise StructuralError('arithmetic circuit without a ring')

    @staticmethod
    def eval_plaintext(c: Circuit, x0: Sequence[int], x1: Sequence[int]) -> List[int]:
        """
        Reference semantics: evaluate gates in id order over plain values.

        Parameters
        ----------
        c : Circuit
            circuit to evaluate
        x0, x1 : Sequence[int]
            plain inputs of P0 / P1 in input_map order (ring elements or bits)

        Returns
        -------
        List[int]
            values of the OUTPUT gates in output_ids order
        """

        for party, xs in enumerate((x0, x1)):
            if len(xs) != len(c.input_map[party]):
                raise DomainError(f'party {party} supplies {len(xs)} inputs, circuit expects '
                                  f'{len(c.input_map[party])}')

        mask = c.ring.mask if c.world == WORLD.ARITHMETIC else 1
        values: Dict[int, int] = {}
        for gate_id, v in zip(c.input_map[0], x0):
            values[gate_id] = int(v) & mask
        for gate_id, v in zip(c.input_map[1], x1):
            values[gate_id] = int(v) & mask

        for g in c.gates:
            k = g.kind
            if k in INPUT_KINDS:
                continue
            elif k == GATE_KIND.CONST_ZERO:
                values[g.gate_id] = 0
            elif k == GATE_KIND.CONST_ONE:
                values[g.gate_id] = 1
            elif k == GATE_KIND.ADD:
                values[g.gate_id] = ringlib.ring_add(values[g.inputs[0]], values[g.inputs[1]], c.ring)
            elif k == GATE_KIND.MUL:
                values[g.gate_id] = ringlib.ring_mul(values[g.inputs[0]], values[g.inputs[1]], c.ring)
            elif k == GATE_KIND.XOR:
                values[g.gate_id] = values[g.inputs[0]] ^ values[g.inputs[1]]
            elif k == GATE_KIND.AND:
                values[g.gate_id] = values[g.inputs[0]] & values[g.inputs[1]]
            elif k == GATE_KIND.NOT:
                values[g.gate_id] = values[g.inputs[0]] ^ 1
            elif k == GATE_KIND.OUTPUT:
                values[g.gate_id] = values[g.inputs[0]]

        return [values[o] for o in c.output_ids]

    @staticmethod
    def count_interactive(c: Circuit) -> Tuple[int, int, int]:
        """
        (n_mul, n_and, n_output)
        """
        kinds = c.kinds
        return (int(np.count_nonzero(kinds == GATE_KIND.MUL)),
                int(np.count_nonzero(kinds == GATE_KIND.AND)),
                int(np.count_nonzero(kinds == GATE_KIND.OUTPUT)))

    @staticmethod
    def count_kinds(c: Circuit) -> Dict[str, int]:
        counts = np.bincount(c.kinds, minlength=len(GATE_KIND))
        return {kind.name: int(counts[kind]) for kind in GATE_KIND if counts[kind]}

    @staticmethod
    def dump(c: Circuit) -> str:
        """
        Diagnostic text: header line, then `<id> <KIND> [<in1> [<in2>]]` per gate.
        """
        bits = c.ring.bit_length if c.ring else 1
        lines = [f'world={c.world.tag} l={bits} inputs0={len(c.input_map[0])} '
                 f'inputs1={len(c.input_map[1])} outputs={len(c.output_ids)}']
        for g in c.gates:
            lines.append(' '.join([str(g.gate_id), g.kind.name, *map(str, g.inputs)]))
        return '\n'.join(lines) + '\n'
