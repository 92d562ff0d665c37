import pytest

from circuitlib import APP, VARIANT
from misclib.threadlib import threadlib
from netlib.translib import translib
from proflib.clocklib import ThrottleConfig
from runlib.sessionlib import Session
from triplelib.triplelib import triplelib


def run_sessions(circuit, inputs, pools=None, seed=1, clock=None, throttles=(1.0, 1.0), sizes=None):
    """
    One handshake, then one online execution per (x0, x1) pair in `inputs`.

    Returns ([(out0, out1), ...], [(timings0, timings1), ...], (t0, t1)).
    """
    pools = pools or triplelib.deal_for(circuit, seed, copies=len(inputs))
    t0, t1 = translib.memory_pair(timeout=10, record=True)
    sizes = sizes or (len(circuit.input_map[0]), len(circuit.input_map[0]))

    def party(p, transport):
        s = Session(p, transport, circuit, pools[p], seed=seed, clock=clock, throttle=ThrottleConfig(throttles[p]))
        s.handshake(s.params(APP.INNERPRODUCT, sizes[p], VARIANT.NONE))
        results = []
        for rep, pair in enumerate(inputs):
            if rep:
                s.prepare(pools[p], seed + rep)
            results.append(s.run_online(pair[p]))
        return results

    def close(err):
        t0.close()
        t1.close()

    r0, r1 = threadlib.run_pair(lambda: party(0, t0), lambda: party(1, t1), cb_fail=close)
    outputs = [(a[0], b[0]) for a, b in zip(r0, r1)]
    timings = [(a[1], b[1]) for a, b in zip(r0, r1)]
    return outputs, timings, (t0, t1)


@pytest.fixture
def run_both():
    return run_sessions
