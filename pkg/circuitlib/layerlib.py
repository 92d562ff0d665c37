from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from circuitlib import GATE_KIND, INPUT_KINDS
from circuitlib.circuitlib import Circuit
from loglib.loglib import loglib
from misclib.errlib import StructuralError


@dataclass(frozen=True)
class Layer:
    local_ids: Tuple[int, ...]
    interactive_ids: Tuple[int, ...]


@dataclass(frozen=True)
class LayerPlan:
    """
    layer(g) = 0 for inputs and constants, max(layer(inputs)) for other local
    gates and 1 + max(layer(inputs)) for interactive gates. Every layer >= 1
    holds at least one interactive gate, so round_count == len(layers) - 1.
    """

    layer_of: Dict[int, int]
    layers: Tuple[Layer, ...]
    round_count: int

    def rounds(self):
        """
        Yield (round_no, local gates evaluated before the exchange, interactive gates).

        Local gates of layer k-1 consume results finished in round k-1, so they
        run in step 1 of round k.
        """
        for k in range(1, len(self.layers)):
            yield k, self.layers[k - 1].local_ids, self.layers[k].interactive_ids


class layerlib:
    slogger = loglib(__name__)

    @staticmethod
    def assign_layers(c: Circuit) -> LayerPlan:
        """
        Level the circuit into rounds.

        Parameters
        ----------
        c : Circuit
            a validated circuit

        Returns
        -------
        LayerPlan
            per-gate layer, per-layer (local, interactive) ids ordered by gate id
        """

        n = len(c.gates)
        layer = np.full(n, -1, dtype=np.int64)
        for g in c.gates:
            if any(src >= g.gate_id or layer[src] < 0 for src in g.inputs):
                # unreachable for builder circuits, numbering is topological
                raise StructuralError(f'cycle or forward reference at gate {g.gate_id}')
            if not g.inputs:
                layer[g.gate_id] = 0
                continue
            deepest = max(int(layer[src]) for src in g.inputs)
            layer[g.gate_id] = deepest + 1 if g.kind.interactive else deepest

        depth = int(layer.max()) + 1 if n else 0
        local = [[] for _ in range(depth)]
        interactive = [[] for _ in range(depth)]
        for g in c.gates:
            if g.kind in INPUT_KINDS:
                continue
            bucket = interactive if g.kind.interactive else local
            bucket[layer[g.gate_id]].append(g.gate_id)

        layers = tuple(Layer(tuple(lo), tuple(it)) for lo, it in zip(local, interactive))
        round_count = sum(1 for lay in layers if lay.interactive_ids)
        if round_count != max(depth - 1, 0):
            raise StructuralError(f'{depth} layers but {round_count} interactive rounds')

        plan = LayerPlan(layer_of={i: int(v) for i, v in enumerate(layer)},
                         layers=layers,
                         round_count=round_count)
        layerlib.slogger.d(f'{n} gates in {depth} layers, {round_count} rounds')
        return plan

    @staticmethod
    def check_soundness(c: Circuit, plan: LayerPlan) -> bool:
        for g in c.gates:
            for src in g.inputs:
                if plan.layer_of[src] > plan.layer_of[g.gate_id]:
                    return False
                if g.kind.interactive and plan.layer_of[src] >= plan.layer_of[g.gate_id]:
                    return False
        return True

    @staticmethod
    def has_output_round(c: Circuit, plan: LayerPlan) -> bool:
        last = plan.layers[-1].interactive_ids if plan.layers else ()
        return bool(last) and all(c.gates[i].kind == GATE_KIND.OUTPUT for i in last)
