import io
import json
from pathlib import Path

import pytest

from misclib.errlib import DomainError, ProtocolError, UsageError
from proflib import CELL_NAMES, SWEEP_HEADER
from proflib.reportlib import OnlineReport, PartyCells, StepTimings, reportlib
from proflib.sweeplib import SweepRow, sweeplib

GOLDEN = Path(__file__).parent / 'golden'


def party(p, local, inter, finish, comm, online):
    cells = dict(zip(CELL_NAMES, (local, inter, finish, comm, online)))
    return PartyCells(party=p, cells=cells, stddev={n: 0.0 for n in CELL_NAMES})


def inner_product_report():
    return OnlineReport(parties=[party(0, 0.127, 0.256, 0.384, 1.536, 2.303),
                                 party(1, 0.381, 0.768, 1.152, 0.2, 2.501)],
                        reps=10,
                        meta={'app': 'innerproduct', 'size': 128, 'world': 'A', 'throttle': [1.0, 3.0],
                              'clock': 'virtual', 'seed': 1})


def millionaire_report(size, local, inter, finish, comm, online):
    return OnlineReport(parties=[party(0, local, inter, finish, comm, online),
                                 party(1, local, inter, finish, comm, online)],
                        reps=3,
                        meta={'app': 'millionaire', 'size': size, 'world': 'B', 'throttle': [1.0, 1.0],
                              'clock': 'virtual', 'seed': 7})


class Test_reportlib:
    # region [render]
    def test_table_golden(self):
        text = reportlib.render_report(inner_product_report(), 'table')
        assert text == (GOLDEN / 'innerproduct_hetero.txt').read_text()

    def test_table_bundle_golden(self):
        bundle = [millionaire_report(4, 0.004, 0.022, 0.033, 0.4, 0.459),
                  millionaire_report(32, 0.032, 0.19, 0.285, 0.7, 1.207)]
        text = reportlib.render_report(bundle, 'table')
        assert text == (GOLDEN / 'millionaire_bundle.txt').read_text()

    def test_row_labels(self):
        assert reportlib.row_labels('A') == ['Arithmetic local gates(ms)', 'Interactive gate(ms)', 'Layer finish(ms)',
                                             'Communication(ms)', 'Online phase(ms)']
        assert reportlib.row_labels('B')[0] == 'Boolean local gates(ms)'

    def test_csv(self):
        text = reportlib.render_report(inner_product_report(), 'csv')
        lines = text.splitlines()
        assert '# app="innerproduct"' in lines
        assert '# throttle=[1.0, 3.0]' in lines
        body = [ln for ln in lines if not ln.startswith('#')]
        assert body[0] == 'size,party,stat,' + ','.join(CELL_NAMES)
        assert body[1] == '128,0,mean,0.127,0.256,0.384,1.536,2.303'
        assert body[2].startswith('128,0,stddev,0.0')
        assert len(body) == 5

    def test_json_round_trip(self):
        r = inner_product_report()
        doc = json.loads(reportlib.render_report(r, 'json'))
        assert doc['meta']['reps'] == 10
        parsed = reportlib.parse_report(reportlib.render_report(r, 'json'))
        assert parsed.reps == r.reps
        assert parsed.meta == r.meta
        assert parsed.mean(1, 'communication_ms') == 0.2

    def test_json_bundle(self):
        bundle = [millionaire_report(4, 0.004, 0.022, 0.033, 0.4, 0.459),
                  millionaire_report(32, 0.032, 0.19, 0.285, 0.7, 1.207)]
        doc = json.loads(reportlib.render_report(bundle, 'json'))
        assert [rep['meta']['size'] for rep in doc['reports']] == [4, 32]

    def test_parse_report_rejects(self):
        with pytest.raises(DomainError):
            reportlib.parse_report('{"parties": []}')
        with pytest.raises(DomainError):
            reportlib.parse_report('not json')

    def test_unknown_format(self):
        with pytest.raises(UsageError) as e:
            reportlib.render_report(inner_product_report(), 'xml')
        assert e.value.flag == '--format'

    def test_titles(self):
        r = inner_product_report()
        assert reportlib.title(r) == 'Inner Product on Heterogeneous Nodes'
        r.meta['throttle'] = [3.0, 3.0]
        assert reportlib.title(r) == 'Inner Product on Homogeneous Nodes'

    # endregion [render]

    # region [aggregate]
    def test_aggregate_mean_and_stddev(self):
        runs = [StepTimings(0, 1.0, 2.0, 3.0, 4.0, 10.0), StepTimings(0, 3.0, 2.0, 3.0, 6.0, 14.0),
                StepTimings(1, 2.0, 2.0, 2.0, 2.0, 8.0), StepTimings(1, 2.0, 2.0, 2.0, 2.0, 8.0)]
        r = reportlib.aggregate(runs, {'clock': 'real'})
        assert r.reps == 2
        assert r.mean(0, 'local_gates_ms') == pytest.approx(2.0)
        assert r.party(0).stddev['local_gates_ms'] == pytest.approx(2 ** 0.5)
        assert r.party(1).stddev['online_phase_ms'] == 0.0
        assert r.meta['comm_skew'] == pytest.approx(2.5)
        assert r.party(0).stall_pct == pytest.approx(100 * 5 / 12)

    def test_aggregate_single_run(self):
        r = reportlib.aggregate([StepTimings(1, 1.0, 1.0, 1.0, 1.0, 5.0)])
        assert [pc.party for pc in r.parties] == [1]
        assert r.party(1).stddev['online_phase_ms'] == 0.0
        assert r.comm_skew == 0.0

    def test_aggregate_empty(self):
        with pytest.raises(DomainError):
            reportlib.aggregate([])

    def test_aggregate_uneven(self):
        with pytest.raises(DomainError):
            reportlib.aggregate([StepTimings(0), StepTimings(0), StepTimings(1)])

    def test_step_timings(self):
        t = StepTimings(0, 1.0, 2.0, 3.0, 4.0, 11.0)
        assert t.components_ms == 10.0
        assert t.residual_ms == 1.0
        assert t.stall_pct == pytest.approx(100 * 4 / 11)
        assert StepTimings(0).stall_pct == 0.0

    # endregion [aggregate]


class Test_sweeplib:
    def test_sweep_rows(self):
        reports = {4: millionaire_report(4, 0.004, 0.022, 0.033, 0.4, 0.459),
                   32: millionaire_report(32, 0.032, 0.19, 0.285, 0.7, 1.207)}
        result = sweeplib.sweep([4, 32], reports.__getitem__)
        assert not result.partial
        assert result.rows[1] == SweepRow(32, 0.7, 0.7, 1.207, 1.207)

        text = sweeplib.write_csv(result)
        assert text.splitlines()[0] == ','.join(SWEEP_HEADER)
        assert text.splitlines()[1] == '4,0.4,0.4,0.459,0.459'
        assert sweeplib.parse_csv(text) == result.rows

    def test_sweep_partial(self):
        def run_fn(size):
            if size > 8:
                raise ProtocolError('peer went away')
            return millionaire_report(size, 0.004, 0.022, 0.033, 0.4, 0.459)

        stream = io.StringIO()
        result = sweeplib.sweep([4, 8, 16, 32], run_fn)
        sweeplib.write_csv(result, stream)
        assert result.partial
        assert result.failed_size == 16
        assert [row.size for row in result.rows] == [4, 8]
        assert stream.getvalue().splitlines()[-1] == '# PARTIAL: aborted at size 16: ProtocolError: peer went away'
        assert len(sweeplib.parse_csv(stream.getvalue())) == 2

    def test_sweep_sizes_checked(self):
        with pytest.raises(DomainError):
            sweeplib.sweep([], lambda size: None)
        with pytest.raises(DomainError):
            sweeplib.sweep([8, 4], lambda size: None)

    def test_sweep_progress(self, capsys):
        report = millionaire_report(4, 0.004, 0.022, 0.033, 0.4, 0.459)
        sweeplib.sweep([4], lambda size: report, progress=True)
        captured = capsys.readouterr()
        assert captured.out == ''
        assert '100.00%...done...' in captured.err
