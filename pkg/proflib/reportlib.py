import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence, Union

import numpy as np

from loglib.loglib import loglib
from misclib.errlib import DomainError, UsageError
from proflib import CELL_NAMES, CELLS

REPORT_FORMATS = ('table', 'csv', 'json')

APP_TITLES = {
    'innerproduct': 'Inner Product',
    'millionaire': 'Millionaire Probability',
}


@dataclass(frozen=True)
class StepTimings:
    """
    One party's online-phase breakdown for one execution, in milliseconds.
    """

    party: int
    local_gates_ms: float = 0.0
    interactive_gate_ms: float = 0.0
    layer_finish_ms: float = 0.0
    communication_ms: float = 0.0
    online_phase_ms: float = 0.0

    @property
    def components_ms(self) -> float:
        return self.local_gates_ms + self.interactive_gate_ms + self.layer_finish_ms + self.communication_ms

    @property
    def residual_ms(self) -> float:
        return self.online_phase_ms - self.components_ms

    @property
    def stall_pct(self) -> float:
        return 100.0 * self.communication_ms / self.online_phase_ms if self.online_phase_ms else 0.0

    def cells(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in CELL_NAMES}


@dataclass
class PartyCells:
    party: int
    cells: Dict[str, float]
    stddev: Dict[str, float]

    @property
    def stall_pct(self) -> float:
        online = self.cells['online_phase_ms']
        return 100.0 * self.cells['communication_ms'] / online if online else 0.0


@dataclass
class OnlineReport:
    """
    Mean and sample standard deviation per cell over `reps` completed runs.
    """

    parties: List[PartyCells]
    reps: int
    meta: Dict[str, object] = field(default_factory=dict)

    def party(self, p: int) -> PartyCells:
        return next(pc for pc in self.parties if pc.party == p)

    def mean(self, p: int, cell: str) -> float:
        return self.party(p).cells[cell]

    @property
    def comm_skew(self) -> float:
        """
        party 0 communication over party 1 communication (0 when undefined).
        """
        if len(self.parties) != 2:
            return 0.0
        c0, c1 = self.mean(0, 'communication_ms'), self.mean(1, 'communication_ms')
        return c0 / c1 if c1 else 0.0


class reportlib:
    slogger = loglib(__name__)

    @staticmethod
    def aggregate(runs: Sequence[StepTimings], meta: Dict[str, object] = None) -> OnlineReport:
        """
        Cellwise mean and sample standard deviation per party.

        Parameters
        ----------
        runs : Sequence[StepTimings]
            per-party timings of every completed repetition, any order
        meta : dict
            experiment metadata attached to the report

        Returns
        -------
        OnlineReport
            one PartyCells per party seen, ordered by party id
        """

        if not runs:
            raise DomainError('cannot aggregate zero runs')

        by_party: Dict[int, List[StepTimings]] = {}
        for run in runs:
            by_party.setdefault(run.party, []).append(run)
        counts = {len(v) for v in by_party.values()}
        if len(counts) != 1:
            raise DomainError(f'parties completed different repetition counts: {sorted(counts)}')

        parties = []
        for party in sorted(by_party):
            table = np.array([[getattr(r, name) for name in CELL_NAMES] for r in by_party[party]], dtype=float)
            means = table.mean(axis=0)
            stds = table.std(axis=0, ddof=1) if len(table) > 1 else np.zeros(len(CELL_NAMES))
            parties.append(PartyCells(party=party,
                                      cells={n: float(v) for n, v in zip(CELL_NAMES, means)},
                                      stddev={n: float(v) for n, v in zip(CELL_NAMES, stds)}))

        report = OnlineReport(parties=parties, reps=counts.pop(), meta=dict(meta or {}))
        if len(parties) == 2 and report.comm_skew:
            report.meta['comm_skew'] = report.comm_skew
        return report

    # region [render]
    @staticmethod
    def render_report(r: Union[OnlineReport, Sequence[OnlineReport]], fmt: str = 'table') -> str:
        """
        Render a report, or a (small, large) bundle, as table, csv or json.
        """

        reports = [r] if isinstance(r, OnlineReport) else list(r)
        if not reports:
            raise DomainError('nothing to render')
        if fmt == 'table':
            return reportlib._render_table(reports)
        elif fmt == 'csv':
            return reportlib._render_csv(reports)
        elif fmt == 'json':
            docs = [reportlib.to_dict(rep) for rep in reports]
            doc = docs[0] if len(docs) == 1 else {'reports': docs}
            return json.dumps(doc, indent=2) + '\n'
        raise UsageError(f'unknown report format: {fmt} (expected one of {", ".join(REPORT_FORMATS)})', '--format')

    @staticmethod
    def row_labels(world: str) -> List[str]:
        col = 2 if world == 'B' else 1
        return [c[col] for c in CELLS]

    @staticmethod
    def title(r: OnlineReport) -> str:
        meta = r.meta
        name = APP_TITLES.get(meta.get('app'), str(meta.get('app', 'Online phase')))
        throttle = meta.get('throttle')
        if throttle and len(set(throttle)) == 1:
            nodes = 'Homogeneous Nodes'
        elif throttle:
            nodes = 'Heterogeneous Nodes'
        else:
            nodes = 'Nodes'
        return f'{name} on {nodes}'

    @staticmethod
    def _column_names(r: OnlineReport) -> List[str]:
        throttle = r.meta.get('throttle') or []
        names = []
        for pc in r.parties:
            if pc.party < len(throttle):
                names.append(f'P{pc.party} x{float(throttle[pc.party]):g}')
            else:
                names.append(f'P{pc.party}')
        return names

    @staticmethod
    def _render_table(reports: List[OnlineReport]) -> str:
        first = reports[0]
        labels = reportlib.row_labels(first.meta.get('world', 'A'))
        width = max(len(s) for s in labels) + 2
        col = 12
        lines = [reportlib.title(first)]

        if len(reports) > 1:
            group = ''.join(f'{"size " + str(rep.meta.get("size", "?")):>{col * len(rep.parties)}}'
                            for rep in reports)
            lines.append(' ' * width + group)
        lines.append(' ' * width + ''.join(f'{name:>{col}}' for rep in reports
                                           for name in reportlib._column_names(rep)))

        for label, name in zip(labels, CELL_NAMES):
            values = ''.join(f'{pc.cells[name]:>{col}.3f}' for rep in reports for pc in rep.parties)
            lines.append(f'{label:<{width}}{values}')

        stall = ''.join(f'{pc.stall_pct:>{col - 1}.1f}%' for rep in reports for pc in rep.parties)
        lines.append(f'{"Stall share":<{width}}{stall}')
        lines.append('reps={} clock={} seed={}'.format(first.reps, first.meta.get('clock', '?'),
                                                      first.meta.get('seed', '?')))
        return '\n'.join(lines) + '\n'

    @staticmethod
    def _render_csv(reports: List[OnlineReport]) -> str:
        out = io.StringIO()
        for key, value in reports[0].meta.items():
            out.write(f'# {key}={json.dumps(value)}\n')
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['size', 'party', 'stat', *CELL_NAMES])
        for rep in reports:
            for pc in rep.parties:
                size = rep.meta.get('size', '')
                writer.writerow([size, pc.party, 'mean', *(repr(pc.cells[n]) for n in CELL_NAMES)])
                writer.writerow([size, pc.party, 'stddev', *(repr(pc.stddev[n]) for n in CELL_NAMES)])
        return out.getvalue()

    # endregion [render]

    # region [json]
    @staticmethod
    def to_dict(r: OnlineReport) -> Dict[str, object]:
        meta = dict(r.meta)
        meta['reps'] = r.reps
        return {'meta': meta, 'parties': [asdict(pc) for pc in r.parties]}

    @staticmethod
    def parse_report(text: str) -> OnlineReport:
        """
        Inverse of render_report(r, 'json') for a single report.
        """
        try:
            doc = json.loads(text)
            meta = dict(doc['meta'])
            reps = int(meta.pop('reps'))
            parties = [PartyCells(party=int(p['party']), cells=dict(p['cells']), stddev=dict(p['stddev']))
                       for p in doc['parties']]
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f'not a report document: {type(e).__name__} {e}') from e
        return OnlineReport(parties=parties, reps=reps, meta=meta)

    # endregion [json]
