import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from circuitlib import GATE_KIND
from circuitlib.circuitlib import Circuit
from circuitlib.layerlib import LayerPlan, layerlib
from loglib.loglib import loglib
from misclib.errlib import DomainError, ProtocolError
from netlib import MSG_TYPE, PROTOCOL_VERSION
from netlib.framelib import Frame, HelloParams, framelib
from netlib.translib import Transport
from proflib import STEP
from proflib.clocklib import ClockMode, StepMeter, ThrottleConfig, exact
from proflib.reportlib import StepTimings
from runlib import INPUT_SHARE_LABEL
from sharelib import WORLD
from sharelib.bitlib import bitlib
from sharelib.ringlib import ringlib
from sharelib.rnglib import SeededRng
from sharelib.sharelib import PartyId, sharelib
from triplelib.triplelib import TriplePool


@dataclass(frozen=True)
class LocalGroup:
    """
    Local gates of one kind that can be evaluated together.
    """

    kind: GATE_KIND
    ids: np.ndarray
    in0: np.ndarray
    in1: np.ndarray


@dataclass(frozen=True)
class RoundSchedule:
    layer_id: int
    local_groups: Tuple[LocalGroup, ...]
    local_count: int
    pair_ids: np.ndarray
    pair_in0: np.ndarray
    pair_in1: np.ndarray
    out_ids: np.ndarray
    out_in: np.ndarray

    @property
    def interactive_count(self) -> int:
        return len(self.pair_ids) + len(self.out_ids)


class Session:
    """
    One party's view of a two-party online execution.

    Per round: (1) local gates, (2) masked differences and output shares
    serialized into one LAYER_DATA frame, (3) send then blocking receive,
    (4) open d/e, finish products, reconstruct outputs.
    """

    def __init__(self,
                 party: int,
                 transport: Transport,
                 circuit: Circuit,
                 pool: Optional[TriplePool] = None,
                 seed: int = 0,
                 clock: ClockMode = None,
                 throttle: ThrottleConfig = None,
                 plan: LayerPlan = None,
                 time_input_sharing: bool = False):
        self.party = PartyId(party)
        self.transport = transport
        self.circuit = circuit
        self.plan = plan or layerlib.assign_layers(circuit)
        self.pool = pool
        self.seed = seed
        self.clock = clock or ClockMode()
        self.throttle = throttle or ThrottleConfig()
        self.time_input_sharing = time_input_sharing
        self.logger = loglib(f'{__name__}_p{party}')

        self.world = circuit.world
        self.spec = circuit.ring
        self.dtype = np.uint64 if self.world == WORLD.ARITHMETIC else np.uint8
        self.wire_store = np.zeros(len(circuit.gates), dtype=self.dtype)
        self.evaluated = np.zeros(len(circuit.gates), dtype=bool)
        self.outputs: Dict[int, int] = {}
        self.negotiated: Optional[HelloParams] = None
        self.meter = StepMeter(party, self.clock, self.throttle)
        self.schedule = self._build_schedule()

    # region [schedule]
    def _build_schedule(self) -> List[RoundSchedule]:
        c = self.circuit
        kinds, in0, in1 = c.kinds, c.in0, c.in1
        rounds = []
        for layer_id, local_ids, inter_ids in self.plan.rounds():
            rounds.append(self._round(layer_id, np.asarray(local_ids, dtype=np.int64),
                                      np.asarray(inter_ids, dtype=np.int64), kinds, in0, in1))
        return rounds

    @staticmethod
    def _round(layer_id, local_ids, inter_ids, kinds, in0, in1) -> RoundSchedule:
        # depth of each local gate among the local gates of the same layer
        depth: Dict[int, int] = {}
        for g in local_ids.tolist():
            srcs = (int(in0[g]), int(in1[g]))
            depth[g] = 1 + max((depth.get(s, -1) for s in srcs if s >= 0), default=-1)
        groups = []
        for level in sorted(set(depth.values())):
            at_level = np.array([g for g in local_ids.tolist() if depth[g] == level], dtype=np.int64)
            for kind in sorted(set(kinds[at_level].tolist())):
                ids = at_level[kinds[at_level] == kind]
                groups.append(LocalGroup(GATE_KIND(kind), ids, in0[ids], in1[ids]))

        is_out = kinds[inter_ids] == GATE_KIND.OUTPUT
        pair_ids, out_ids = inter_ids[~is_out], inter_ids[is_out]
        return RoundSchedule(layer_id=layer_id,
                             local_groups=tuple(groups),
                             local_count=len(local_ids),
                             pair_ids=pair_ids, pair_in0=in0[pair_ids], pair_in1=in1[pair_ids],
                             out_ids=out_ids, out_in=in0[out_ids])

    # endregion [schedule]

    def prepare(self, pool: Optional[TriplePool], seed: int):
        """
        Reset per-execution state so one handshaken session can run the next repetition.
        """
        self.pool = pool
        self.seed = seed
        self.wire_store[:] = 0
        self.evaluated[:] = False
        self.outputs = {}
        self.meter = StepMeter(self.party.id, self.clock, self.throttle)

    def params(self, app: int, size: int, variant: int, bitlen: int = None) -> HelloParams:
        bits = bitlen if bitlen is not None else (self.spec.bit_length if self.spec else 1)
        return HelloParams(version=PROTOCOL_VERSION, app=int(app), world=int(self.world), bitlen=bits,
                           size=size, variant=int(variant), seed=HelloParams.commit(self.seed))

    def handshake(self, params: HelloParams) -> HelloParams:
        """
        Exchange HELLO and require identical parameters on both sides.
        """
        self.transport.send(framelib.hello_frame(params))
        frame, _ = self.transport.receive()
        theirs = framelib.parse_hello(frame)
        try:
            self.negotiated = framelib.negotiate(params, theirs)
        except ProtocolError as e:
            self.logger.error(f'{type(e).__name__}!!! {e}')
            raise
        self.logger.d(f'handshake ok: {self.negotiated}')
        return self.negotiated

    # region [inputs]
    def distribute_inputs(self, local_plain_inputs: Sequence[int], meter: StepMeter = None):
        """
        Share own inputs, send the peer's shares in one INPUT_SHARE frame and
        store the shares received for the peer's input gates.

        Parameters
        ----------
        local_plain_inputs : Sequence[int]
            one value per own input gate (ring elements, or bits for Boolean)
        meter : StepMeter
            charge the sharing to the online timings when given

        Returns
        -------
        Stamp
            the later of the two send stamps, the start barrier of an untimed sharing
        """

        me, peer = self.party.id, self.party.peer.id
        own_ids = np.asarray(self.circuit.input_map[me], dtype=np.int64)
        peer_ids = np.asarray(self.circuit.input_map[peer], dtype=np.int64)
        if len(local_plain_inputs) != len(own_ids):
            raise DomainError(f'party {me} supplies {len(local_plain_inputs)} inputs, '
                              f'circuit expects {len(own_ids)}')

        if meter:
            meter.begin()
        rng = SeededRng(self.seed).derive(INPUT_SHARE_LABEL, me)
        if self.world == WORLD.ARITHMETIC:
            xs = np.array([ringlib.check(x, self.spec) for x in local_plain_inputs], dtype=np.uint64)
            own, to_peer = sharelib.arith_share_vector(xs, self.spec, rng)
        else:
            plain = sharelib.bitvector([int(x) & 1 for x in local_plain_inputs])
            own_share, peer_share = sharelib.bool_share(plain, rng)
            own = bitlib.unpack(own_share.bits, plain.n_bits)
            to_peer = bitlib.unpack(peer_share.bits, plain.n_bits)
        self._store(own_ids, own)
        frame = Frame(MSG_TYPE.INPUT_SHARE, 0, framelib.encode_values(to_peer, self.world, self.spec))
        if meter:
            meter.end(STEP.INTERACTIVE, exact(self.clock.costs.interactive_prepare) * len(own_ids))

        if meter:
            meter.begin()
        sent = meter.stamp() if meter else StepMeter.wall_ns()
        self.transport.send(frame, sent)
        reply, stamp = self.transport.receive()
        if meter:
            meter.end_wait(stamp)
        framelib.expect(reply, MSG_TYPE.INPUT_SHARE, 0)
        self._store(peer_ids, framelib.decode_values(reply.payload, len(peer_ids), self.world, self.spec))
        return max(sent, stamp) if stamp is not None else None

    # endregion [inputs]

    def _store(self, ids: np.ndarray, values: np.ndarray):
        self.wire_store[ids] = values
        self.evaluated[ids] = True

    # region [online]
    def run_online(self, local_plain_inputs: Sequence[int]) -> Tuple[List[int], StepTimings]:
        """
        Execute the online phase.

        Parameters
        ----------
        local_plain_inputs : Sequence[int]
            this party's plain inputs in input_map order

        Returns
        -------
        tuple
            (reconstructed outputs in output_ids order, this party's StepTimings)
        """

        if self.time_input_sharing:
            self.meter.start()
            self.distribute_inputs(local_plain_inputs, self.meter)
        else:
            self.meter.start(since_ns=self.distribute_inputs(local_plain_inputs))

        for rnd in self.schedule:
            self._run_round(rnd)

        self._close_execution()
        timings = self.meter.timings()
        outputs = [self.outputs[o] for o in self.circuit.output_ids]
        self.logger.d(f'outputs {outputs} timings {timings}')
        return outputs, timings

    def _run_round(self, rnd: RoundSchedule):
        meter, costs = self.meter, self.clock.costs

        # (1) local evaluation
        meter.begin()
        for group in rnd.local_groups:
            self._eval_local(group)
        local_unit = costs.local_arith if self.world == WORLD.ARITHMETIC else costs.local_bool_word
        meter.end(STEP.LOCAL, exact(local_unit) * rnd.local_count)

        # (2) interactive evaluation
        meter.begin()
        d, e, triple = self._mask(rnd)
        out_own = self.wire_store[rnd.out_in]
        payload = framelib.encode_layer_payload(d, e, out_own, self.world, self.spec)
        frame = Frame(MSG_TYPE.LAYER_DATA, rnd.layer_id, payload)
        meter.end(STEP.INTERACTIVE, exact(costs.interactive_prepare) * rnd.interactive_count)

        # (3) perform interactive
        meter.begin()
        self.transport.send(frame, meter.stamp())
        reply, stamp = self.transport.receive()
        meter.end_wait(stamp)

        # (4) finish layer
        meter.begin()
        framelib.expect(reply, MSG_TYPE.LAYER_DATA, rnd.layer_id)
        d_peer, e_peer, out_peer = framelib.decode_layer_payload(
            reply.payload, len(rnd.pair_ids), len(rnd.out_ids), self.world, self.spec)
        self._finish(rnd, d, e, d_peer, e_peer, triple)
        self._reconstruct(rnd, out_own, out_peer)
        meter.end(STEP.FINISH, exact(costs.layer_finish) * rnd.interactive_count)

        if self.logger.enabled(logging.DEBUG):
            self.logger.d(f'layer {rnd.layer_id}: {rnd.local_count} local, {len(rnd.pair_ids)} pairs, '
                          f'{len(rnd.out_ids)} outputs')

    def _eval_local(self, g: LocalGroup):
        w = self.wire_store
        k = g.kind
        if k == GATE_KIND.ADD:
            w[g.ids] = ringlib.vadd(w[g.in0], w[g.in1], self.spec)
        elif k == GATE_KIND.XOR:
            w[g.ids] = w[g.in0] ^ w[g.in1]
        elif k == GATE_KIND.NOT:
            # party 0 holds the constant one, party 1 a zero share
            w[g.ids] = w[g.in0] ^ self.dtype(1) if self.party.id == 0 else w[g.in0]
        elif k == GATE_KIND.CONST_ZERO:
            w[g.ids] = 0
        elif k == GATE_KIND.CONST_ONE:
            w[g.ids] = 1 if self.party.id == 0 else 0
        else:
            raise ProtocolError(f'{k.name} is not a local gate')
        self.evaluated[g.ids] = True

    def _mask(self, rnd: RoundSchedule):
        k = len(rnd.pair_ids)
        if k == 0:
            empty = np.zeros(0, dtype=self.dtype)
            return empty, empty, (empty, empty, empty)
        if self.pool is None:
            raise DomainError('interactive gates need a triple pool')
        a, b, c = self.pool.take(k)
        x, y = self.wire_store[rnd.pair_in0], self.wire_store[rnd.pair_in1]
        if self.world == WORLD.ARITHMETIC:
            return ringlib.vsub(x, a, self.spec), ringlib.vsub(y, b, self.spec), (a, b, c)
        return x ^ a, y ^ b, (a, b, c)

    def _finish(self, rnd: RoundSchedule, d, e, d_peer, e_peer, triple):
        if not len(rnd.pair_ids):
            return
        a, b, c = triple
        i = self.party.id
        if self.world == WORLD.ARITHMETIC:
            spec = self.spec
            d = ringlib.vadd(d, d_peer, spec)
            e = ringlib.vadd(e, e_peer, spec)
            # z_i = i*d*e + d*b_i + e*a_i + c_i
            z = ringlib.vadd(ringlib.vadd(ringlib.vmul(d, b, spec), ringlib.vmul(e, a, spec), spec), c, spec)
            if i == 1:
                z = ringlib.vadd(z, ringlib.vmul(d, e, spec), spec)
        else:
            d = d ^ d_peer
            e = e ^ e_peer
            z = (d & b) ^ (e & a) ^ c
            if i == 1:
                z = z ^ (d & e)
        self._store(rnd.pair_ids, z)

    def _reconstruct(self, rnd: RoundSchedule, out_own, out_peer):
        if not len(rnd.out_ids):
            return
        self._store(rnd.out_ids, out_own)
        if self.world == WORLD.ARITHMETIC:
            plain = ringlib.vadd(out_own, out_peer, self.spec)
        else:
            plain = out_own ^ out_peer
        for gate_id, v in zip(rnd.out_ids.tolist(), plain.tolist()):
            self.outputs[gate_id] = int(v)

    def _close_execution(self):
        # completion barrier; closes the timed region
        meter = self.meter
        meter.begin()
        self.transport.send(Frame(MSG_TYPE.DONE, 0), meter.stamp())
        reply, stamp = self.transport.receive()
        framelib.expect(reply, MSG_TYPE.DONE)
        meter.end_online(stamp)

    # endregion [online]
