import os
from xml.etree import ElementTree

import numpy as np
import pytest
from configobj import ConfigObj

from robquant import errors, experiment, report


@pytest.fixture(scope='module')
def gridstats():
    rates = np.arange(1, 21) / 20.0
    cells = [(100, 0.0), (100, 0.4), (25, 0.0), (25, 0.4)]
    metrics = experiment.METRICS
    mean, std = {}, {}
    for k, cell in enumerate(cells):
        base = np.linspace(0.95 - 0.05 * k, 0.7, 20)
        mean[cell] = np.vstack([base - 0.01 * j for j in range(len(metrics))])
        std[cell] = np.full((len(metrics), 20), 0.02 + 0.001 * k)
    return experiment.GridStats(cells, rates, mean, std, dict((c, 6) for c in cells), metrics)


def test_curves_csv(tmpdir, gridstats):
    path = str(tmpdir.join('curves.csv'))
    report.write_curves_csv(gridstats, path)
    with open(path) as f:
        header = f.readline().strip()
    assert header == ",".join(experiment.CURVE_COLUMNS)
    restored = report.read_curves_csv(path)
    assert restored.cells == gridstats.cells
    for cell in gridstats.cells:
        assert np.array_equal(restored.mean[cell], gridstats.mean[cell])
        assert np.array_equal(restored.std[cell], gridstats.std[cell])


@pytest.mark.parametrize("content", ['', 'n_train,gamma,metric\n1,0,u_m\n'])
def test_read_curves_csv_errors(tmpdir, content):
    path = tmpdir.join('curves.csv')
    path.write(content)
    with pytest.raises(errors.ParseError) as e:
        report.read_curves_csv(str(path))
    assert e.value.lineno == 1


def test_read_curves_csv_missing(tmpdir):
    with pytest.raises(errors.ParseError):
        report.read_curves_csv(str(tmpdir.join('nothere.csv')))


def test_plot_grid_is_deterministic(tmpdir, gridstats):
    a = str(tmpdir.join('a.svg'))
    b = str(tmpdir.join('b.svg'))
    report.plot_grid(gridstats, a, 'mean')
    report.plot_grid(gridstats, b, 'mean')
    with open(a, 'rb') as fa, open(b, 'rb') as fb:
        content = fa.read()
        assert content == fb.read()
    assert content.startswith(b"<?xml")
    assert ElementTree.fromstring(content).tag.endswith("svg")
    assert b'<dc:date>' not in content


def test_plot_grid_invalid(tmpdir, gridstats):
    with pytest.raises(ValueError):
        report.plot_grid(gridstats, str(tmpdir.join('x.svg')), 'median')
    with pytest.raises(errors.ExportError):
        report.plot_grid(gridstats, str(tmpdir.join('missing', 'dir', 'x.svg')), 'std')


def test_export_grid(tmpdir, gridstats):
    out = str(tmpdir.join('out'))
    written = report.export_reports(gridstats, out, step=0.25)
    names = [os.path.basename(p) for p in written]
    assert names == ['curves.csv', 'curves_mean.svg', 'curves_std.svg']
    restored = report.read_curves_csv(written[0])
    assert restored.rates.tolist() == [0.25, 0.5, 0.75, 1.0]


def test_export_empty_grid(tmpdir):
    empty = experiment.GridStats([], [], {}, {})
    written = report.export_reports(empty, str(tmpdir))
    assert [os.path.basename(p) for p in written] == ['curves.csv']


def test_export_report(tmpdir, gapmodel):
    result = experiment.score(gapmodel, [[0], [1]], classes=[0, 0])
    result.metadata = {'alpha_selected': 0.5, 'n_train': 30, 'gamma': None}
    written = report.export_reports(result, str(tmpdir))
    assert written == [str(tmpdir.join('report.csv'))]
    with open(written[0]) as f:
        lines = f.read().split('\n')
    assert lines[0] == ",".join(experiment.REPORT_COLUMNS)
    assert lines[1].startswith('0,0,0,1,')
    assert lines[2].startswith('1,0,1,0,')
    meta = ConfigObj(str(tmpdir.join('report.ini')))
    assert meta['alpha_selected'] == '0.5'
    assert meta['gamma'] == 'None'


def test_export_unknown(tmpdir):
    with pytest.raises(TypeError):
        report.export_reports(object(), str(tmpdir))


def test_write_csv_error(tmpdir, gridstats):
    with pytest.raises(errors.ExportError) as e:
        report.write_csv(gridstats.to_frame(), str(tmpdir.join('no', 'such', 'file.csv')))
    assert e.value.path.endswith('file.csv')
