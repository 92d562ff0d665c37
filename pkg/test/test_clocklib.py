import time
from fractions import Fraction

import numpy as np
import pytest

from misclib.errlib import ConfigError
from proflib import CLOCK_MODE, STEP
from proflib.clocklib import ClockMode, CostTable, StepMeter, ThrottleConfig, clocklib, exact


class Test_clocklib:
    def test_exact(self):
        assert exact(0.1) == Fraction(1, 10)
        assert exact(3) == Fraction(3)
        assert exact(Fraction(1, 3)) == Fraction(1, 3)

    # region [virtual]
    def test_exchange_stall(self):
        # sender ready at 5 ms, receiver at 2 ms, 1 ms link
        assert clocklib.virtual_exchange_stall(5, 2, 1) == 4
        # the slow receiver finds the frame already there
        assert clocklib.virtual_exchange_stall(2, 5, 1) == 0
        assert clocklib.virtual_exchange_stall(0, 0, 0) == 0

    def test_barrier_meets_at_max_plus_latency(self):
        comm_fast, post_fast = clocklib.virtual_barrier(2, 5, 1)
        comm_slow, post_slow = clocklib.virtual_barrier(5, 2, 1)
        assert post_fast == post_slow == 6
        assert comm_fast == 4
        assert comm_slow == 1

    def test_barrier_zero_latency(self):
        assert clocklib.virtual_barrier(3, 3, 0) == (0, 3)

    def test_apply_throttle_virtual(self):
        mode = ClockMode(CLOCK_MODE.VIRTUAL)
        assert clocklib.apply_throttle(100, ThrottleConfig(1.0), mode) == Fraction(1, 10)
        assert clocklib.apply_throttle(100, ThrottleConfig(3.0), mode) == Fraction(3, 10)

    def test_apply_throttle_uses_clock_costs(self):
        mode = ClockMode(CLOCK_MODE.VIRTUAL, costs=CostTable(unit_ms=0.01))
        assert clocklib.apply_throttle(100, ThrottleConfig(3.0), mode) == Fraction(3)

    # endregion [virtual]

    def test_throttle_below_one(self):
        with pytest.raises(ConfigError):
            ThrottleConfig(0.5)
        with pytest.raises(ConfigError):
            ClockMode(CLOCK_MODE.VIRTUAL, latency_ms=-1)

    def test_apply_throttle_real_spins(self):
        start = time.perf_counter()
        elapsed = clocklib.apply_throttle(2.0, ThrottleConfig(3.0))
        spent_ms = (time.perf_counter() - start) * 1e3
        assert elapsed >= 6.0
        assert spent_ms >= 4.0

    def test_apply_throttle_real_native(self):
        assert clocklib.apply_throttle(1.5, ThrottleConfig(1.0)) == pytest.approx(1.5, abs=0.5)

    # region [meter]
    def test_meter_virtual_round(self):
        mode = ClockMode(CLOCK_MODE.VIRTUAL, latency_ms=0.1)
        meter = StepMeter(0, mode, ThrottleConfig(1.0))
        meter.start()
        meter.begin()
        meter.end(STEP.LOCAL, 1)
        meter.begin()
        meter.end(STEP.INTERACTIVE, 2)
        assert meter.stamp() == Fraction(3, 1000)
        meter.begin()
        meter.end_wait(Fraction(3, 1000))
        meter.begin()
        meter.end(STEP.FINISH, 3)
        t = meter.timings()
        assert t.party == 0
        assert t.local_gates_ms == pytest.approx(0.001)
        assert t.interactive_gate_ms == pytest.approx(0.002)
        assert t.communication_ms == pytest.approx(0.1)
        assert t.layer_finish_ms == pytest.approx(0.003)
        assert t.online_phase_ms == pytest.approx(0.106)
        assert t.residual_ms == pytest.approx(0.0)

    def test_meter_virtual_needs_stamp(self):
        meter = StepMeter(1, ClockMode(CLOCK_MODE.VIRTUAL), ThrottleConfig())
        meter.start()
        with pytest.raises(ConfigError):
            meter.end_wait(None)

    def test_meter_real(self):
        meter = StepMeter(1, ClockMode(), ThrottleConfig())
        meter.start()
        meter.begin()
        time.sleep(0.002)
        meter.end(STEP.LOCAL)
        meter.begin()
        meter.end_wait(None)
        meter.stop()
        t = meter.timings()
        assert t.local_gates_ms >= 1.5
        assert t.online_phase_ms >= t.local_gates_ms + t.communication_ms
        assert isinstance(meter.stamp(), int)

    def test_meter_virtual_completion_barrier(self):
        mode = ClockMode(CLOCK_MODE.VIRTUAL, latency_ms=0.1)
        fast, slow = StepMeter(0, mode, ThrottleConfig(1.0)), StepMeter(1, mode, ThrottleConfig(3.0))
        for meter in (fast, slow):
            meter.start()
            meter.begin()
            meter.end(STEP.FINISH, 3)
        fast_ready, slow_ready = fast.stamp(), slow.stamp()
        fast.begin()
        fast.end_online(slow_ready)
        slow.begin()
        slow.end_online(fast_ready)
        tf, ts = fast.timings(), slow.timings()
        # no link latency at DONE: both stop when the slow party is ready
        assert tf.online_phase_ms == ts.online_phase_ms == pytest.approx(0.009)
        assert tf.communication_ms == pytest.approx(0.006)
        assert ts.communication_ms == 0.0

    def test_meter_real_shared_barriers(self):
        meter = StepMeter(0, ClockMode(), ThrottleConfig())
        since = StepMeter.wall_ns() - 2_000_000
        meter.start(since_ns=since)
        meter.begin()
        sent = meter.stamp()
        time.sleep(0.005)
        # the peer's DONE left 1 ms after ours; waking up later is outside the timed region
        meter.end_online(sent + 1_000_000)
        t = meter.timings()
        assert t.online_phase_ms == pytest.approx((sent + 1_000_000 - since) / 1e6)
        assert t.online_phase_ms < 5.0
        assert t.communication_ms >= 3.0
        assert t.residual_ms >= -1e-6

    def test_meter_real_stops_on_receipt_without_peer_stamp(self):
        meter = StepMeter(1, ClockMode(), ThrottleConfig())
        meter.start()
        meter.begin()
        meter.stamp()
        time.sleep(0.002)
        meter.end_online(None)
        t = meter.timings()
        assert t.communication_ms >= 1.5
        assert t.online_phase_ms >= t.communication_ms

    def test_throttle_slows_local_step(self):
        work = np.arange(1 << 20, dtype=np.uint64)

        def local_ms(factor):
            best = None
            for _ in range(5):
                meter = StepMeter(0, ClockMode(), ThrottleConfig(factor))
                meter.start()
                meter.begin()
                int((work * work + work).sum())
                meter.end(STEP.LOCAL)
                ms = meter.timings().local_gates_ms
                best = ms if best is None else min(best, ms)
            return best

        assert local_ms(3.0) >= 2 * local_ms(1.0)

    # endregion [meter]

    def test_cost_table_defaults(self):
        costs = CostTable()
        assert (costs.local_arith, costs.local_bool_word, costs.interactive_prepare, costs.layer_finish) == (1, 0.25, 2, 3)
        assert costs.unit_ms == 0.001
