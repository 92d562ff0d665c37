import argparse
import dataclasses
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from benchcli import (APPS, DEFAULT_REPS, DEFAULT_SEED, DEFAULT_SIZE, DEFAULT_TIMEOUT_S, EXIT_FAIL, EXIT_OK,
                      EXIT_USAGE, NODE_PRESETS, POOL_MODES, RIPPLE_WARN_ROUNDS, ROLES, VARIANTS)
from circuitlib import VARIANT
from circuitlib.circuitlib import Circuit, circuitlib
from circuitlib.layerlib import LayerPlan, layerlib
from filelib import FILE_FMT
from filelib.filelib import filelib
from loglib import LOG_LEVELS
from loglib.loglib import loglib
from misclib.errlib import ConfigError, MpcError, UsageError
from misclib.syslib import syslib
from misclib.threadlib import threadlib
from netlib import DEFAULT_PORT
from netlib.translib import Transport, translib
from proflib import CLOCK_MODE, DEFAULT_LATENCY_MS, WEAK_NODE_FACTOR
from proflib.clocklib import ClockMode, ThrottleConfig
from proflib.reportlib import REPORT_FORMATS, OnlineReport, StepTimings, reportlib
from proflib.sweeplib import SweepResult, sweeplib
from runlib.sessionlib import Session
from sharelib import WORLD
from sharelib.bitlib import bitlib
from sharelib.ringlib import RingSpec
from sharelib.rnglib import SeededRng, hash64
from triplelib.triplelib import TriplePool, triplelib


@dataclass(frozen=True)
class RunConfig:
    role: str
    app: str = 'innerproduct'
    size: int = DEFAULT_SIZE['innerproduct']
    bitlen: int = 16
    variant: str = 'tree'
    connect: Optional[Tuple[str, int]] = None
    listen: Optional[int] = None
    throttle: Tuple[float, ...] = (1.0, 1.0)
    clock: CLOCK_MODE = CLOCK_MODE.REAL
    latency_ms: float = DEFAULT_LATENCY_MS
    reps: int = DEFAULT_REPS
    seed: int = DEFAULT_SEED
    fmt: str = 'table'
    sweep: Optional[Tuple[int, int]] = None
    time_input_sharing: bool = False
    dump_circuit: Optional[str] = None
    triples: Optional[str] = None
    pool_mode: str = 'regen'
    compare_size: Optional[int] = None
    report_file: Optional[str] = None
    log_level: str = 'WARNING'
    log_file: Optional[str] = None
    progress: bool = False
    timeout: float = DEFAULT_TIMEOUT_S
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def loopback(self) -> bool:
        return self.role == 'loopback'

    @property
    def party(self) -> Optional[int]:
        return None if self.loopback else int(self.role)

    @property
    def world(self) -> WORLD:
        return WORLD.ARITHMETIC if self.app == 'innerproduct' else WORLD.BOOLEAN

    @property
    def clock_mode(self) -> ClockMode:
        return ClockMode(self.clock, self.latency_ms)

    def throttle_of(self, party: int) -> ThrottleConfig:
        return ThrottleConfig(self.throttle[party] if self.loopback else self.throttle[0])

    def sweep_sizes(self) -> List[int]:
        lo, hi = self.sweep
        return [1 << k for k in range(lo, hi + 1)]


@dataclass
class LoopbackResult:
    outputs: List[Tuple[List[int], List[int]]]
    timings: List[StepTimings]
    transports: Tuple[Transport, Transport]
    plan: LayerPlan


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        tokens = message.replace('/', ' ').split()
        flag = next((tok.strip(":,'\"") for tok in tokens if tok.startswith('--')), None)
        raise UsageError(message, flag)


class benchcli:
    slogger = loglib(__name__)

    # region [config]
    @staticmethod
    def build_parser() -> argparse.ArgumentParser:
        p = _Parser(prog='pympc2-bench',
                    description='Two-party online-phase benchmark: per-step timings of both parties.')
        p.add_argument('--role', required=True, choices=ROLES, help='party 0 (connects), party 1 (listens) or both in one process')
        p.add_argument('--app', default='innerproduct', choices=sorted(APPS))
        p.add_argument('--size', type=int, help='vector length (innerproduct) or bit length (millionaire)')
        p.add_argument('--bitlen', type=int, help='ring bits l (innerproduct, default 16) or input bits (millionaire)')
        p.add_argument('--variant', default='tree', choices=sorted(VARIANTS))
        p.add_argument('--connect', metavar='HOST:PORT')
        p.add_argument('--listen', metavar='PORT', type=int)
        p.add_argument('--throttle', metavar='F | F0,F1', help='compute slowdown factor(s) >= 1')
        p.add_argument('--nodes', choices=NODE_PRESETS, help=f'throttle preset, weak node = x{WEAK_NODE_FACTOR:g}')
        p.add_argument('--clock', default='real', choices=[m.value for m in CLOCK_MODE])
        p.add_argument('--latency-ms', type=float, default=DEFAULT_LATENCY_MS, help='virtual link latency')
        p.add_argument('--reps', type=int, default=DEFAULT_REPS)
        p.add_argument('--seed', type=int, default=DEFAULT_SEED)
        p.add_argument('--format', default='table', choices=REPORT_FORMATS)
        p.add_argument('--sweep', metavar='LO:HI', help='sizes 2^LO .. 2^HI, CSV on stdout')
        p.add_argument('--time-input-sharing', action='store_true')
        p.add_argument('--dump-circuit', metavar='PATH')
        p.add_argument('--triples', metavar='PREFIX', help='loopback writes PREFIX.p0/.p1, party i loads PREFIX.p<i>')
        p.add_argument('--pool-mode', default='regen', choices=POOL_MODES)
        p.add_argument('--compare-size', type=int, metavar='N', help='also run size N and print both side by side')
        p.add_argument('--report-file', metavar='PATH', help='also write the report; .json/.csv pick the format')
        p.add_argument('--log-level', default='WARNING', choices=LOG_LEVELS)
        p.add_argument('--log-file', metavar='PATH')
        p.add_argument('--progress', action='store_true')
        p.add_argument('--timeout', type=float, default=DEFAULT_TIMEOUT_S, help='TCP connect/accept timeout (s)')
        return p

    @staticmethod
    def parse_args(argv: Sequence[str] = None) -> RunConfig:
        """
        Parse and validate the command line.

        Raises
        ------
        UsageError
            unknown flag, missing role, conflicting or missing transport flags
        """

        ns = benchcli.build_parser().parse_args(argv)
        warnings = []
        loopback = ns.role == 'loopback'

        # transport
        connect = None
        if ns.connect:
            host, sep, port = ns.connect.rpartition(':')
            if not sep or not host or not port.isdigit():
                raise UsageError(f'--connect expects HOST:PORT, got {ns.connect}', '--connect')
            connect = (host, int(port))
        if loopback and (connect or ns.listen is not None):
            raise UsageError('--role loopback takes neither --connect nor --listen', '--connect' if connect else '--listen')
        if ns.role == '0' and not connect:
            raise UsageError('--role 0 needs --connect HOST:PORT', '--connect')
        if ns.role == '0' and ns.listen is not None:
            raise UsageError('--role 0 connects; --listen belongs to role 1', '--listen')
        if ns.role == '1' and connect:
            raise UsageError('--role 1 listens; --connect belongs to role 0', '--connect')
        listen = ns.listen if ns.listen is not None else (DEFAULT_PORT if ns.role == '1' else None)

        # sizes
        size, bitlen = ns.size, ns.bitlen
        if ns.app == 'innerproduct':
            size = size if size is not None else DEFAULT_SIZE['innerproduct']
            bitlen = bitlen if bitlen is not None else 16
            if not 1 <= bitlen <= 64:
                raise UsageError(f'--bitlen must be in [1, 64] for innerproduct, got {bitlen}', '--bitlen')
        else:
            if size is not None and bitlen is not None and size != bitlen:
                raise UsageError(f'millionaire: --size {size} and --bitlen {bitlen} disagree', '--bitlen')
            size = next((v for v in (size, bitlen) if v is not None), DEFAULT_SIZE['millionaire'])
            bitlen = size
        if size < 1:
            raise UsageError(f'size must be >= 1, got {size}', '--size')

        # throttle
        throttle = benchcli._parse_throttle(ns.throttle, ns.nodes, loopback)

        clock = CLOCK_MODE(ns.clock)
        if clock == CLOCK_MODE.VIRTUAL and not loopback:
            raise UsageError('--clock virtual needs --role loopback', '--clock')
        if ns.latency_ms < 0:
            raise UsageError('--latency-ms must be >= 0', '--latency-ms')
        if ns.reps < 1:
            raise UsageError(f'--reps must be >= 1, got {ns.reps}', '--reps')

        sweep = None
        if ns.sweep:
            lo, sep, hi = ns.sweep.partition(':')
            if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
                raise UsageError(f'--sweep expects LO:HI with LO <= HI, got {ns.sweep}', '--sweep')
            if not loopback:
                raise UsageError('--sweep runs both parties; use --role loopback', '--sweep')
            sweep = (int(lo), int(hi))

        pool_mode = ns.pool_mode
        if ns.triples and loopback:
            pool_mode = 'shared'

        if ns.app == 'millionaire' and ns.variant == 'ripple':
            rounds = (max(1 << sweep[1], size) if sweep else size) + 1
            if rounds > RIPPLE_WARN_ROUNDS:
                warnings.append(f'ripple variant with {rounds - 1} bits runs {rounds} rounds; '
                                f'consider --variant tree')

        cfg = RunConfig(role=ns.role, app=ns.app, size=size, bitlen=bitlen, variant=ns.variant,
                        connect=connect, listen=listen, throttle=throttle, clock=clock,
                        latency_ms=ns.latency_ms, reps=ns.reps, seed=ns.seed, fmt=ns.format, sweep=sweep,
                        time_input_sharing=ns.time_input_sharing, dump_circuit=ns.dump_circuit,
                        triples=ns.triples, pool_mode=pool_mode, compare_size=ns.compare_size,
                        report_file=ns.report_file, log_level=ns.log_level, log_file=ns.log_file,
                        progress=ns.progress, timeout=ns.timeout, warnings=tuple(warnings))
        for msg in warnings:
            benchcli.slogger.w(msg)
        return cfg

    @staticmethod
    def _parse_throttle(text: Optional[str], nodes: Optional[str], loopback: bool) -> Tuple[float, ...]:
        if text is None:
            k = WEAK_NODE_FACTOR
            preset = {None: (1.0, 1.0), 'strong': (1.0, 1.0), 'weak': (k, k), 'hetero': (1.0, k)}[nodes]
            return preset if loopback else (preset[0],)
        try:
            factors = tuple(float(t) for t in text.split(','))
        except ValueError:
            raise UsageError(f'--throttle expects numbers, got {text}', '--throttle') from None
        if loopback and len(factors) != 2:
            raise UsageError('--role loopback needs both throttles: --throttle F0,F1', '--throttle')
        if not loopback and len(factors) != 1:
            raise UsageError('a TCP party takes one throttle: --throttle F', '--throttle')
        if any(not f >= 1.0 for f in factors):
            raise UsageError(f'throttle factors must be >= 1, got {text}', '--throttle')
        return factors

    # endregion [config]

    # region [experiment]
    @staticmethod
    def build_circuit(cfg: RunConfig) -> Circuit:
        if cfg.app == 'innerproduct':
            return circuitlib.build_inner_product(cfg.size, RingSpec(cfg.bitlen))
        return circuitlib.build_millionaire(cfg.size, VARIANTS[cfg.variant])

    @staticmethod
    def plain_inputs(cfg: RunConfig, circuit: Circuit, party: int, rep: int) -> List[int]:
        """
        Uniformly random inputs of one party for one repetition, derived from --seed.
        """
        rng = SeededRng(cfg.seed).derive(f'plain-inputs/{rep}', party)
        n = len(circuit.input_map[party])
        if circuit.world == WORLD.ARITHMETIC:
            return rng.ring_elements(n, circuit.ring).tolist()
        return bitlib.int_to_bits(rng.integer(n), n).tolist()

    @staticmethod
    def session_seed(cfg: RunConfig, rep: int) -> int:
        return hash64(cfg.seed, 'session', rep)

    @staticmethod
    def deal_pools(cfg: RunConfig, circuit: Circuit) -> List[Tuple[TriplePool, TriplePool]]:
        """
        Per-repetition pools of both parties, dealt before any timing starts.
        """
        if cfg.pool_mode == 'shared':
            shared = triplelib.deal_for(circuit, hash64(cfg.seed, 'triples', 0), copies=cfg.reps)
            return [shared] * cfg.reps
        return [triplelib.deal_for(circuit, hash64(cfg.seed, 'triples', rep)) for rep in range(cfg.reps)]

    @staticmethod
    def hello(cfg: RunConfig, session: Session):
        variant = VARIANTS[cfg.variant] if cfg.app == 'millionaire' else VARIANT.NONE
        return session.params(APPS[cfg.app], cfg.size, variant, cfg.bitlen if cfg.app == 'innerproduct' else 1)

    @staticmethod
    def run_party(cfg: RunConfig, party: int, transport: Transport, circuit: Circuit, plan: LayerPlan,
                  pools: Sequence[TriplePool], inputs: Sequence[List[int]]):
        """
        One party's side of all repetitions over an established transport.

        Returns
        -------
        tuple
            (outputs per repetition, StepTimings per repetition)
        """

        session = Session(party, transport, circuit, seed=benchcli.session_seed(cfg, 0),
                          clock=cfg.clock_mode, throttle=cfg.throttle_of(party), plan=plan,
                          time_input_sharing=cfg.time_input_sharing)
        session.handshake(benchcli.hello(cfg, session))
        outputs, timings = [], []
        for rep in range(cfg.reps):
            session.prepare(pools[rep], benchcli.session_seed(cfg, rep))
            out, t = session.run_online(inputs[rep])
            outputs.append(out)
            timings.append(t)
            session.logger.i(f'rep {rep}: online {t.online_phase_ms:.3f} ms, comm {t.communication_ms:.3f} ms')
        return outputs, timings

    @staticmethod
    def run_loopback(cfg: RunConfig, circuit: Circuit = None, record: bool = False) -> LoopbackResult:
        """
        Both parties in one process over the in-memory duplex transport;
        record keeps every sent frame in the transports' transcripts.
        """

        circuit = circuit or benchcli.build_circuit(cfg)
        plan = layerlib.assign_layers(circuit)
        pools = benchcli.deal_pools(cfg, circuit)
        if cfg.triples:
            for party in (0, 1):
                triplelib.save_pool(pools[0][party], f'{cfg.triples}.p{party}')
        inputs = [[benchcli.plain_inputs(cfg, circuit, p, rep) for rep in range(cfg.reps)] for p in (0, 1)]

        t0, t1 = translib.memory_pair(record=record)

        def close_all(err):
            t0.close()
            t1.close()

        (out0, tim0), (out1, tim1) = threadlib.run_pair(
            lambda: benchcli.run_party(cfg, 0, t0, circuit, plan, [p[0] for p in pools], inputs[0]),
            lambda: benchcli.run_party(cfg, 1, t1, circuit, plan, [p[1] for p in pools], inputs[1]),
            cb_fail=close_all)

        for rep in range(cfg.reps):
            expected = circuitlib.eval_plaintext(circuit, inputs[0][rep], inputs[1][rep])
            if out0[rep] != out1[rep] or out0[rep] != expected:
                raise MpcError(f'rep {rep}: outputs P0={out0[rep]} P1={out1[rep]}, plaintext says {expected}')
        return LoopbackResult(outputs=list(zip(out0, out1)), timings=tim0 + tim1, transports=(t0, t1), plan=plan)

    @staticmethod
    def run_tcp(cfg: RunConfig, circuit: Circuit) -> List[StepTimings]:
        party = cfg.party
        plan = layerlib.assign_layers(circuit)
        if cfg.triples:
            pool = triplelib.load_pool(f'{cfg.triples}.p{party}')
            pools = [pool] * cfg.reps
        else:
            pools = [p[party] for p in benchcli.deal_pools(cfg, circuit)]
        inputs = [benchcli.plain_inputs(cfg, circuit, party, rep) for rep in range(cfg.reps)]

        if party == 0:
            transport = translib.connect(cfg.connect[0], cfg.connect[1], cfg.timeout)
        else:
            transport = translib.listen(cfg.listen, timeout=cfg.timeout)
        with transport:
            outputs, timings = benchcli.run_party(cfg, party, transport, circuit, plan, pools, inputs)

        # the peer's inputs derive from the same seed, so the plaintext result is checkable here
        for rep in range(cfg.reps):
            both = [benchcli.plain_inputs(cfg, circuit, p, rep) for p in (0, 1)]
            expected = circuitlib.eval_plaintext(circuit, both[0], both[1])
            if outputs[rep] != expected:
                raise MpcError(f'rep {rep}: output {outputs[rep]}, plaintext says {expected}')
        return timings

    @staticmethod
    def metadata(cfg: RunConfig, circuit: Circuit, plan: LayerPlan) -> dict:
        meta = {
            'app': cfg.app,
            'size': cfg.size,
            'bitlen': cfg.bitlen,
            'world': circuit.world.tag,
            'variant': cfg.variant if cfg.app == 'millionaire' else None,
            'role': cfg.role,
            'throttle': list(cfg.throttle),
            'clock': cfg.clock.value,
            'latency_ms': cfg.latency_ms if cfg.clock == CLOCK_MODE.VIRTUAL else None,
            'seed': cfg.seed,
            'rounds': plan.round_count,
            'gates': len(circuit.gates),
            'time_input_sharing': cfg.time_input_sharing,
            'pool_mode': cfg.pool_mode,
            'host': syslib.host_info(),
        }
        return meta

    @staticmethod
    def run_experiment(cfg: RunConfig) -> OnlineReport:
        """
        Build, deal, run every repetition and aggregate.

        Returns
        -------
        OnlineReport
            two party columns in loopback, one in TCP mode
        """

        circuit = benchcli.build_circuit(cfg)
        benchcli.slogger.i(f'{cfg.app} size {cfg.size}: {circuitlib.count_kinds(circuit)}')
        if cfg.dump_circuit and not filelib.file_write_text(circuitlib.dump(circuit), cfg.dump_circuit):
            raise ConfigError(f'cannot write circuit dump to {cfg.dump_circuit}')

        if cfg.loopback:
            result = benchcli.run_loopback(cfg, circuit)
            timings, plan = result.timings, result.plan
        else:
            timings = benchcli.run_tcp(cfg, circuit)
            plan = layerlib.assign_layers(circuit)
        return reportlib.aggregate(timings, benchcli.metadata(cfg, circuit, plan))

    @staticmethod
    def run_sweep(cfg: RunConfig, stream=None) -> SweepResult:
        """
        Sweep sizes 2^LO .. 2^HI in loopback and write the CSV series.
        """
        if not cfg.loopback:
            raise ConfigError('sweeps need --role loopback')

        def run_fn(size):
            return benchcli.run_experiment(dataclasses.replace(cfg, size=size, bitlen=size if cfg.app == 'millionaire' else cfg.bitlen,
                                                               dump_circuit=None, triples=None))

        result = sweeplib.sweep(cfg.sweep_sizes(), run_fn, progress=cfg.progress)
        sweeplib.write_csv(result, stream if stream is not None else sys.stdout)
        return result

    # endregion [experiment]

    @staticmethod
    def emit(cfg: RunConfig, report, stream=None):
        stream = stream if stream is not None else sys.stdout
        stream.write(reportlib.render_report(report, cfg.fmt))
        if cfg.report_file:
            fmt = {FILE_FMT.REPORT_JSON: 'json', FILE_FMT.REPORT_CSV: 'csv'}.get(filelib.get_format(cfg.report_file), 'table')
            if not filelib.file_write_text(reportlib.render_report(report, fmt), cfg.report_file):
                raise ConfigError(f'cannot write report to {cfg.report_file}')


def main(argv: Sequence[str] = None) -> int:
    try:
        cfg = benchcli.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f'usage error: {e}\n')
        return EXIT_USAGE

    loglib.configure(cfg.log_level, cfg.log_file)
    try:
        if cfg.sweep:
            result = benchcli.run_sweep(cfg)
            return EXIT_FAIL if result.partial else EXIT_OK

        report = benchcli.run_experiment(cfg)
        if cfg.compare_size:
            extra = benchcli.run_experiment(dataclasses.replace(
                cfg, size=cfg.compare_size, bitlen=cfg.compare_size if cfg.app == 'millionaire' else cfg.bitlen,
                dump_circuit=None))
            report = sorted([report, extra], key=lambda r: r.meta['size'])
        benchcli.emit(cfg, report)
        return EXIT_OK
    except MpcError as e:
        benchcli.slogger.error(f'{type(e).__name__}!!! {e}')
        sys.stderr.write(f'error: {type(e).__name__}: {e}\n')
        return EXIT_FAIL


# region [main]
if __name__ == "__main__":
    sys.exit(main())
# endregion [main]
