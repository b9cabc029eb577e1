"""Writing results to disk

:func:`export_reports` writes either a single :class:`robquant.experiment.ReliabilityReport`
or the aggregated :class:`robquant.experiment.GridStats` of a grid run:

  ``report.csv``
    one row per test instance. The metadata goes into ``report.ini`` next to it.
  ``curves.csv``
    the mean and std curves of every cell and metric. :func:`read_curves_csv` restores the stats.
  ``curves_mean.svg`` and ``curves_std.svg``
    one panel per cell with one line per metric. Rows go from the largest ``n_train`` at the top
    to the smallest, columns from the smallest ``gamma`` to the largest.

All floats are written with 17 significant digits. SVG files do not contain a date and use a fixed
hash salt, so the same stats always give the same bytes.
"""
import os

import numpy as np
import pandas as pd
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant import iniconf
from robquant.constants import FLOAT_FORMAT
from robquant.experiment import CURVE_COLUMNS, GridStats, ReliabilityReport

METRIC_STYLES = {'u_m': ('#1b9e77', '-'),
                 'u_H': ('#d95f02', '-'),
                 'u_a': ('#7570b3', '--'),
                 'u_t': ('#e7298a', '--'),
                 'u_e': ('#66a61e', '--'),
                 'eps_glob': ('#000000', '-'),
                 'eps_loc': ('#e6ab02', ':')}
"""Color and line style per metric"""

METRIC_LABELS = {'u_m': 'max. probability', 'u_H': 'entropy', 'u_a': 'aleatoric', 'u_t': 'total',
                 'u_e': 'epistemic', 'eps_glob': 'global robustness', 'eps_loc': 'local robustness'}

SVG_HASHSALT = 'robquant'


def write_csv(frame, path):
    """Write a table with 17 significant digits and unix line endings

    :raises: :class:`robquant.errors.ExportError`
    """
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    except (IOError, OSError) as e:
        raise errors.ExportError(str(e), path)
    log.info("Wrote %s", path)


def write_report_csv(report, path):
    """Write a report as CSV and its metadata as ini file with the same base name

    :raises: :class:`robquant.errors.ExportError`
    """
    write_csv(report.frame, path)
    if report.metadata:
        meta = dict((k, FLOAT_FORMAT % v if isinstance(v, float) else str(v))
                    for k, v in report.metadata.items())
        iniconf.write_document(meta, os.path.splitext(path)[0] + '.ini')


def write_curves_csv(stats, path, step=None):
    """Write the curves of the stats as CSV, see :meth:`robquant.experiment.GridStats.to_frame`

    :raises: :class:`robquant.errors.ExportError`
    """
    write_csv(stats.to_frame(step), path)


def read_curves_csv(path):
    """Read a curves CSV written by :func:`write_curves_csv`

    :returns: the stats
    :rtype: :class:`robquant.experiment.GridStats`
    :raises: :class:`robquant.errors.ParseError`
    """
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except pd.errors.EmptyDataError:
        raise errors.ParseError("file is empty, expected a header", path, 1)
    except (pd.errors.ParserError, IOError, OSError) as e:
        raise errors.ParseError(str(e).strip(), path)
    if list(frame.columns) != list(CURVE_COLUMNS):
        raise errors.ParseError("expected header %s" % ",".join(CURVE_COLUMNS), path, 1)
    try:
        return GridStats.from_frame(frame)
    except ValueError as e:
        raise errors.ParseError(str(e), path)


def plot_grid(stats, path, which='mean'):
    """Plot the mean or std curves of every cell into one SVG file

    :param stats: the stats
    :type stats: :class:`robquant.experiment.GridStats`
    :param path: the SVG file
    :type path: str
    :param which: ``'mean'`` or ``'std'``
    :type which: str
    :returns: None
    :raises: :class:`robquant.errors.ExportError`, :class:`ValueError`
    """
    if which not in ('mean', 'std'):
        raise ValueError("Can only plot 'mean' or 'std', got %r" % which)
    curves = stats.mean if which == 'mean' else stats.std
    rows = sorted(set(n for n, g in stats.cells), reverse=True)
    cols = sorted(set(g for n, g in stats.cells))
    with matplotlib.rc_context({'svg.hashsalt': SVG_HASHSALT, 'font.size': 8}):
        fig, axes = plt.subplots(len(rows), len(cols), sharex=True, sharey=True, squeeze=False,
                                 figsize=(3.0 * len(cols), 2.4 * len(rows)))
        top = 0.0
        for cell in stats.cells:
            top = max(top, float(np.max(curves[cell])) if curves[cell].size else 0.0)
        for r, n in enumerate(rows):
            for c, g in enumerate(cols):
                ax = axes[r][c]
                cell = (n, g)
                if cell not in curves:
                    ax.set_axis_off()
                    continue
                for j, metric in enumerate(stats.metrics):
                    color, style = METRIC_STYLES.get(metric, ('#999999', '-'))
                    ax.plot(stats.rates, curves[cell][j], color=color, linestyle=style, linewidth=1,
                            label=METRIC_LABELS.get(metric, metric))
                ax.set_xlim(0, 1)
                if which == 'mean':
                    ax.set_ylim(0.4, 1)
                else:
                    ax.set_ylim(0, max(top * 1.05, 1e-3))
                ax.set_title("n_train=%s, gamma=%s" % (n, g))
                if r == len(rows) - 1:
                    ax.set_xlabel("acceptance rate")
                if c == 0:
                    ax.set_ylabel("accuracy" if which == 'mean' else "std of accuracy")
        handles, labels = axes[0][0].get_legend_handles_labels()
        if handles:
            fig.legend(handles, labels, loc='lower center', ncol=len(labels))
        fig.tight_layout(rect=(0, 0.06, 1, 1))
        try:
            fig.savefig(path, format='svg', metadata={'Date': None})
        except (IOError, OSError) as e:
            raise errors.ExportError(str(e), path)
        finally:
            plt.close(fig)
    log.info("Wrote %s", path)


def export_reports(result, directory, step=None):
    """Write a report or grid stats into a directory

    :param result: what to write
    :type result: :class:`robquant.experiment.ReliabilityReport` | :class:`robquant.experiment.GridStats`
    :param directory: the output directory, created if missing
    :type directory: str
    :param step: thin the curves CSV to multiples of this acceptance rate
    :type step: float | None
    :returns: the written files
    :rtype: list of str
    :raises: :class:`robquant.errors.ExportError`, :class:`TypeError`
    """
    try:
        if not os.path.isdir(directory):
            os.makedirs(directory)
    except OSError as e:
        raise errors.ExportError(str(e), directory)
    if isinstance(result, ReliabilityReport):
        path = os.path.join(directory, 'report.csv')
        write_report_csv(result, path)
        return [path]
    if not isinstance(result, GridStats):
        raise TypeError("Cannot export %r" % (result,))
    path = os.path.join(directory, 'curves.csv')
    write_curves_csv(result, path, step)
    written = [path]
    if not result.cells:
        log.warning("No cells, skipping the figures")
        return written
    for which in ('mean', 'std'):
        svg = os.path.join(directory, 'curves_%s.svg' % which)
        plot_grid(result, svg, which)
        written.append(svg)
    return written
