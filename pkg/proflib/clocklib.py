import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from loglib.loglib import loglib
from misclib.errlib import ConfigError
from proflib import (CLOCK_MODE, COST_INTERACTIVE_PREPARE, COST_LAYER_FINISH, COST_LOCAL_ARITH,
                     COST_LOCAL_BOOL_WORD, DEFAULT_LATENCY_MS, STEP, UNIT_MS)
from proflib.reportlib import StepTimings

Number = Union[int, float, Fraction]
# virtual ready time in ms, or a monotonic send time in ns on the real clock
Stamp = Optional[Union[Fraction, int]]


def exact(x: Number) -> Fraction:
    """
    Decimal literal to an exact fraction (0.1 -> 1/10, not the nearest double).
    """
    if isinstance(x, Fraction):
        return x
    return Fraction(str(x))


@dataclass(frozen=True)
class CostTable:
    local_arith: float = COST_LOCAL_ARITH
    local_bool_word: float = COST_LOCAL_BOOL_WORD
    interactive_prepare: float = COST_INTERACTIVE_PREPARE
    layer_finish: float = COST_LAYER_FINISH
    unit_ms: float = UNIT_MS


@dataclass(frozen=True)
class ThrottleConfig:
    """
    factor 1.0 is native speed; applies to local, interactive and finish steps,
    never to communication waiting. Cost units per gate kind come from the
    clock's CostTable, so both parties charge the same table.
    """

    factor: float = 1.0

    def __post_init__(self):
        if not self.factor >= 1.0:
            raise ConfigError(f'throttle factor must be >= 1.0, got {self.factor}')


@dataclass(frozen=True)
class ClockMode:
    mode: CLOCK_MODE = CLOCK_MODE.REAL
    latency_ms: float = DEFAULT_LATENCY_MS
    costs: CostTable = field(default_factory=CostTable)

    def __post_init__(self):
        if self.latency_ms < 0:
            raise ConfigError(f'latency must be >= 0 ms, got {self.latency_ms}')

    @property
    def virtual(self) -> bool:
        return self.mode == CLOCK_MODE.VIRTUAL


class clocklib:
    slogger = loglib(__name__)

    @staticmethod
    def virtual_exchange_stall(sender_ready_t: Number, receiver_ready_t: Number, latency_ms: Number) -> Fraction:
        """
        Time the receiver blocks for the sender's frame:
        max(0, sender_ready + latency - receiver_ready).
        """
        return max(Fraction(0), exact(sender_ready_t) + exact(latency_ms) - exact(receiver_ready_t))

    @staticmethod
    def virtual_barrier(own_ready_t: Number, peer_ready_t: Number, latency_ms: Number) -> Tuple[Fraction, Fraction]:
        """
        Symmetric exchange of one layer.

        A party's step 3 ends once the peer's frame has arrived and its own
        frame has been delivered, so both clocks meet at max(ready) + latency.

        Returns
        -------
        tuple
            (communication time charged to this party, post-exchange clock)
        """

        own, peer, lat = exact(own_ready_t), exact(peer_ready_t), exact(latency_ms)
        stall = clocklib.virtual_exchange_stall(peer, own, lat)
        post = max(own + stall, own + lat)
        return post - own, post

    @staticmethod
    def spin_until(deadline_ns: int):
        # busy loop: a throttled node must stay CPU-bound, sleep would free the core
        while time.perf_counter_ns() < deadline_ns:
            pass

    @staticmethod
    def apply_throttle(base_cost: Number, cfg: ThrottleConfig, mode: ClockMode = None) -> Number:
        """
        Stretch one compute step by the throttle factor.

        Parameters
        ----------
        base_cost : Number
            virtual mode: cost units of the step; real mode: native step time in ms
        cfg : ThrottleConfig
            throttle of this party
        mode : ClockMode
            clock in use (default real)

        Returns
        -------
        Number
            elapsed step time in ms: exact Fraction in virtual mode
        """

        if cfg.factor < 1.0:
            raise ConfigError(f'throttle factor must be >= 1.0, got {cfg.factor}')
        mode = mode or ClockMode()
        if mode.virtual:
            return exact(base_cost) * exact(cfg.factor) * exact(mode.costs.unit_ms)

        extra_ns = int(float(base_cost) * (cfg.factor - 1.0) * 1e6)
        start = time.perf_counter_ns()
        if extra_ns > 0:
            clocklib.spin_until(start + extra_ns)
        return float(base_cost) + (time.perf_counter_ns() - start) / 1e6


class StepMeter:
    """
    Per-session accumulator of the four online steps.

    Real mode reads the monotonic clock around each step (never per gate) and
    spins to emulate a slower node. Virtual mode charges cost-table units and
    synchronises on the stamps exchanged beside each frame.
    """

    def __init__(self, party: int, mode: ClockMode, throttle: ThrottleConfig):
        self.party = party
        self.mode = mode
        self.throttle = throttle
        self.acc = {step: Fraction(0) if mode.virtual else 0.0 for step in STEP}
        self.now = Fraction(0)
        self._t0 = 0
        self._online_t0 = 0
        self._online_ms: Optional[float] = None
        self._sent_ns: Optional[int] = None

    # region [real clock]
    @staticmethod
    def wall_ns() -> int:
        return time.perf_counter_ns()

    def start(self, since_ns: Optional[int] = None):
        """
        Open the timed region.

        since_ns is the shared start barrier of a real-clock loopback run (the
        later of the two input-share sends); the wait from it until now is
        communication. Ignored in virtual mode, where both clocks start at 0.
        """
        self.acc = {step: Fraction(0) if self.mode.virtual else 0.0 for step in STEP}
        self.now = Fraction(0)
        self._online_ms = None
        self._sent_ns = None
        self._online_t0 = time.perf_counter_ns()
        if since_ns is not None and not self.mode.virtual and since_ns <= self._online_t0:
            self.acc[STEP.COMM] += (self._online_t0 - since_ns) / 1e6
            self._online_t0 = since_ns
        self._t0 = self._online_t0

    def begin(self):
        if not self.mode.virtual:
            self._t0 = time.perf_counter_ns()

    # endregion [real clock]

    def end(self, step: STEP, units: Number = 0):
        """
        Close a compute step (local, interactive or finish).
        """
        if self.mode.virtual:
            elapsed = clocklib.apply_throttle(units, self.throttle, self.mode)
            self.now += elapsed
        else:
            native_ms = (time.perf_counter_ns() - self._t0) / 1e6
            elapsed = clocklib.apply_throttle(native_ms, self.throttle, self.mode)
        self.acc[step] += elapsed

    def stamp(self) -> Stamp:
        """
        Ready time sent beside this party's frame: virtual ms, or the
        monotonic send time in ns on the real clock.
        """
        if self.mode.virtual:
            return self.now
        self._sent_ns = time.perf_counter_ns()
        return self._sent_ns

    def end_wait(self, peer_stamp: Stamp, latency_ms: Number = None):
        """
        Close step 3; begin() must have been called before blocking on receive.
        latency_ms overrides the link latency of the clock (virtual mode only).
        """
        if self.mode.virtual:
            if peer_stamp is None:
                raise ConfigError('virtual clock needs peer stamps; use the loopback transport')
            latency = self.mode.latency_ms if latency_ms is None else latency_ms
            comm, self.now = clocklib.virtual_barrier(self.now, peer_stamp, latency)
            self.acc[STEP.COMM] += comm
        else:
            self.acc[STEP.COMM] += (time.perf_counter_ns() - self._t0) / 1e6

    def end_online(self, peer_stamp: Stamp):
        """
        Close the completion barrier and the timed region.

        Virtual: both clocks stop at max(ready), no link latency. Real with a
        peer send time (loopback, one monotonic clock): both stop at the later
        DONE send, so waking up after it is outside the region. Real without
        one (TCP): stop on receipt.
        """
        if self.mode.virtual:
            self.end_wait(peer_stamp, latency_ms=0)
            self.stop()
            return
        if peer_stamp is not None and self._sent_ns is not None:
            end_ns = max(self._sent_ns, peer_stamp)
        else:
            end_ns = time.perf_counter_ns()
        self.acc[STEP.COMM] += max(end_ns - self._t0, 0) / 1e6
        self.stop(end_ns)

    def stop(self, at_ns: Optional[int] = None):
        if self.mode.virtual:
            self._online_ms = float(self.now)
        else:
            end_ns = at_ns if at_ns is not None else time.perf_counter_ns()
            self._online_ms = (end_ns - self._online_t0) / 1e6

    def timings(self) -> StepTimings:
        if self._online_ms is None:
            self.stop()
        return StepTimings(party=self.party,
                           local_gates_ms=float(self.acc[STEP.LOCAL]),
                           interactive_gate_ms=float(self.acc[STEP.INTERACTIVE]),
                           layer_finish_ms=float(self.acc[STEP.FINISH]),
                           communication_ms=float(self.acc[STEP.COMM]),
                           online_phase_ms=self._online_ms)
