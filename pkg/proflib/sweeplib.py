import csv
import io
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, TextIO

from loglib.loglib import loglib
from loglib.printlib import printlib
from misclib.errlib import DomainError, MpcError
from proflib import PARTIAL_MARKER, SWEEP_HEADER
from proflib.reportlib import OnlineReport


@dataclass(frozen=True)
class SweepRow:
    size: int
    party0_comm_ms: float
    party1_comm_ms: float
    party0_online_ms: float
    party1_online_ms: float

    @staticmethod
    def from_report(size: int, r: OnlineReport) -> 'SweepRow':
        return SweepRow(size,
                        r.mean(0, 'communication_ms'), r.mean(1, 'communication_ms'),
                        r.mean(0, 'online_phase_ms'), r.mean(1, 'online_phase_ms'))

    def values(self):
        return (self.size, self.party0_comm_ms, self.party1_comm_ms, self.party0_online_ms, self.party1_online_ms)


@dataclass
class SweepResult:
    rows: List[SweepRow]
    failed_size: Optional[int] = None
    error: Optional[Exception] = None

    @property
    def partial(self) -> bool:
        return self.error is not None


class sweeplib:
    slogger = loglib(__name__)

    @staticmethod
    def sweep(sizes: Sequence[int], run_fn: Callable[[int], OnlineReport], progress: bool = False) -> SweepResult:
        """
        Run one loopback experiment per size and collect its communication and
        online means.

        Parameters
        ----------
        sizes : Sequence[int]
            ascending input sizes (elements or bits)
        run_fn : Callable[[int], OnlineReport]
            runs the configured experiment at one size
        progress : bool
            draw a progress bar on stderr

        Returns
        -------
        SweepResult
            rows for completed sizes; a failure stops the sweep and is kept
        """

        sizes = list(sizes)
        if not sizes:
            raise DomainError('sweep needs at least one size')
        if sizes != sorted(sizes):
            raise DomainError(f'sweep sizes must be ascending: {sizes}')

        result = SweepResult(rows=[])
        for i, size in enumerate(sizes):
            if progress:
                printlib.draw_percent(i / len(sizes), f'size {size}')
            try:
                report = run_fn(size)
            except MpcError as e:
                sweeplib.slogger.error(f'size {size} {type(e).__name__}!!! {e}')
                result.failed_size, result.error = size, e
                break
            result.rows.append(SweepRow.from_report(size, report))
            sweeplib.slogger.i(f'size {size}: comm {report.mean(0, "communication_ms"):.3f} / '
                               f'{report.mean(1, "communication_ms"):.3f} ms')
        if progress and not result.partial:
            printlib.draw_percent(1.0, 'done')
        return result

    @staticmethod
    def write_csv(result: SweepResult, stream: TextIO = None) -> str:
        """
        CSV series; a partial sweep ends with a `# PARTIAL` marker line.
        """
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(SWEEP_HEADER)
        for row in result.rows:
            writer.writerow([row.size, *(repr(v) for v in row.values()[1:])])
        if result.partial:
            out.write(f'{PARTIAL_MARKER}: aborted at size {result.failed_size}: '
                      f'{type(result.error).__name__}: {result.error}\n')
        text = out.getvalue()
        if stream:
            stream.write(text)
        return text

    @staticmethod
    def parse_csv(text: str) -> List[SweepRow]:
        rows = []
        for rec in csv.reader(line for line in io.StringIO(text) if not line.startswith('#')):
            if not rec or rec[0] == SWEEP_HEADER[0]:
                continue
            rows.append(SweepRow(int(rec[0]), *map(float, rec[1:])))
        return rows
