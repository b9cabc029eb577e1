"""Experiments that compare how well each metric ranks predictions by reliability

A single experiment learns a model on a training set, scores every test instance with all metrics and
records whether the prediction was correct (:func:`run_single`). Ordering the test instances by a metric,
most reliable first, gives an accuracy-acceptance curve (:func:`accuracy_acceptance`): the accuracy on the
first ``N`` instances over the acceptance rate ``N / N_test``.

:func:`run_grid` repeats this for every cell ``(n_train, gamma)``: for each of ``shifts`` random shift
distributions it draws ``train_sets`` training sets, and aggregates the curves of the cell into
pointwise mean and population standard deviation (:class:`GridStats`).

Seeds
  Every random draw has its own seed, derived from the master seed with
  :func:`robquant.categorical.derive_seed` and the keys below. A cell gives the same result
  no matter which other cells run, in which order, or in how many processes.

  ============================  ==================================================
  draw                          keys
  ============================  ==================================================
  random part of P_test         ``0``
  test set                      ``1``
  shift distribution            ``2, gamma_key, shift_index``
  training set                  ``3, n_train, gamma_key, shift_index, train_index``
  cross validation, bootstrap   ``4, n_train, gamma_key, shift_index, train_index``
  ============================  ==================================================

  ``gamma_key`` is ``gamma`` in units of ``1e-9``.
"""
import functools

import numpy as np
import pandas as pd

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant import nbc, uncertainty, robustness, synthetic
from robquant.action import ActionCollection, ActionStatus, ActionUnit
from robquant.categorical import derive_seed
from robquant.constants import BISECTION_TOL, METRICS, UNCERTAINTY_METRICS

STREAM_RANDOM = 0
STREAM_TEST = 1
STREAM_SHIFT = 2
STREAM_TRAIN = 3
STREAM_RUN = 4

REPORT_COLUMNS = ('instance_index', 'true_class', 'predicted_class', 'correct', 'u_m', 'u_H', 'u_a', 'u_t',
                  'u_e_literal', 'u_e_standard', 'eps_glob', 'eps_loc')
"""Columns of a :class:`ReliabilityReport` in output order"""

CURVE_COLUMNS = ('n_train', 'gamma', 'metric', 'acceptance_rate', 'mean_accuracy', 'std_accuracy')
"""Columns of the curves table, see :meth:`GridStats.to_frame`"""


def gamma_key(gamma):
    """Return the integer seed key of a mixture weight"""
    return int(round(float(gamma) * 10 ** 9))


def metric_column(metric_name):
    """Return the report column that orders instances for a metric

    :raises: :class:`ValueError` for an unknown metric
    """
    if metric_name not in METRICS:
        raise ValueError("Unknown metric %r. Known metrics: %s" % (metric_name, ", ".join(METRICS)))
    return 'u_e_standard' if metric_name == 'u_e' else metric_name


class ReliabilityReport(object):
    """All metrics of every test instance of one experiment

    :data:`ReliabilityReport.frame` is a :class:`pandas.DataFrame` with the :data:`REPORT_COLUMNS`.
    ``true_class`` and ``correct`` are missing if the classes are unknown; the ensemble metrics are
    missing if there is no ensemble or the posterior is undefined.
    :data:`ReliabilityReport.metadata` is a dictionary, e.g. ``alpha_selected``, ``n_train``, ``gamma``,
    ``shift_tv`` and ``seed``.
    """

    def __init__(self, frame, metadata=None):
        super(ReliabilityReport, self).__init__()
        self.frame = frame
        self.metadata = metadata or {}

    def __len__(self):
        return len(self.frame)

    @property
    def accuracy(self):
        """The plain test accuracy

        :raises: :class:`ValueError` if the classes are unknown
        """
        correct = self.correct
        return float(correct.mean()) if len(correct) else float('nan')

    @property
    def correct(self):
        """Integer array with 1 for every correct prediction

        :raises: :class:`ValueError` if the classes are unknown
        """
        col = self.frame['correct']
        if col.isna().any():
            raise ValueError("Report has no true classes")
        return col.to_numpy(dtype=np.int64)

    def __repr__(self):
        return "ReliabilityReport(%s rows, %s)" % (len(self), self.metadata)


def score(model, features, classes=None, ensemble=None, tol=BISECTION_TOL, credal_eps=None):
    """Compute prediction and all metrics for every row of ``features``

    :param model: the model that predicts
    :type model: :class:`robquant.nbc.NbcModel`
    :param features: shape ``(n, N)``
    :type features: array like
    :param classes: the true classes or None
    :type classes: array like | None
    :param ensemble: the bootstrap ensemble for ``u_a``, ``u_t`` and ``u_e`` or None
    :type ensemble: :class:`robquant.uncertainty.Ensemble` | None
    :param tol: bracket width of the local robustness
    :type tol: float
    :param credal_eps: if given, add the columns ``credal_global`` and ``credal_local``
                       with the space separated classes of the credal prediction at this contamination
    :type credal_eps: float | None
    :returns: the report without metadata
    :rtype: :class:`ReliabilityReport`
    :raises: :class:`robquant.errors.ConvergenceError`, :class:`ValueError`
    """
    features = np.asarray(features, dtype=np.int64).reshape(-1, model.domain.num_features)
    n = features.shape[0]
    values = nbc.batch_class_joints(model, features)
    predicted = nbc.batch_predict(values)
    frame = pd.DataFrame({'instance_index': np.arange(n, dtype=np.int64)})
    if classes is None:
        frame['true_class'] = pd.array([None] * n, dtype='Int64')
        frame['predicted_class'] = predicted
        frame['correct'] = pd.array([None] * n, dtype='Int64')
    else:
        classes = np.asarray(classes, dtype=np.int64)
        frame['true_class'] = pd.array(classes, dtype='Int64')
        frame['predicted_class'] = predicted
        frame['correct'] = pd.array((classes == predicted).astype(np.int64), dtype='Int64')
    frame['u_m'] = uncertainty.batch_max_prob(model, features)
    frame['u_H'] = uncertainty.batch_entropy(model, features)
    if ensemble is not None:
        u_a, u_t, u_e = uncertainty.batch_ensemble_uncertainties(ensemble, features)
    else:
        u_a = u_t = u_e = np.full(n, np.nan)
    frame['u_a'] = u_a
    frame['u_t'] = u_t
    frame['u_e_literal'] = u_e
    frame['u_e_standard'] = 0.0 - u_e
    frame['eps_glob'] = robustness.batch_global_robustness(values)
    frame['eps_loc'] = robustness.batch_local_robustness(model, features, tol)[0]
    if credal_eps is not None:
        for kind in (robustness.GLOBAL, robustness.LOCAL):
            sets = [robustness.credal_prediction(model, f, credal_eps, kind) for f in features]
            frame['credal_%s' % kind] = [" ".join(str(c) for c in sorted(s)) for s in sets]
    return ReliabilityReport(frame)


def run_single(train, test, config, seed, gamma=None, shift_tv=None):
    """Learn on ``train`` and score every instance of ``test``

    Selects alpha by cross validation, fits the final model on all of ``train`` and a bootstrap
    ensemble with the same alpha.

    :param train: the training set
    :type train: :class:`robquant.categorical.Dataset`
    :param test: the test set
    :type test: :class:`robquant.categorical.Dataset`
    :param config: provides ``alpha_grid``, ``folds``, ``m_ensemble`` and ``bisection_tol``
    :type config: :class:`robquant.iniconf.RunConfig`
    :param seed: the seed of this experiment
    :type seed: int
    :param gamma: the shift weight, only stored in the metadata
    :type gamma: float | None
    :param shift_tv: the total variation of the shift, only stored in the metadata
    :type shift_tv: float | None
    :returns: the report
    :rtype: :class:`ReliabilityReport`
    :raises: :class:`robquant.errors.ShapeMismatchError` if the domains differ
    """
    if train.domain != test.domain:
        raise errors.ShapeMismatchError("Training domain %r differs from test domain %r" % (train.domain, test.domain))
    alpha, cv = nbc.select_alpha(train, config.alpha_grid, config.folds, derive_seed(seed, 0))
    model = nbc.fit(train, alpha)
    ensemble = uncertainty.fit_ensemble(train, alpha, config.m_ensemble, derive_seed(seed, 1))
    report = score(model, test.features, test.classes, ensemble, config.bisection_tol)
    report.metadata = {'alpha_selected': alpha, 'cv_accuracy': max(cv), 'n_train': len(train),
                       'gamma': gamma, 'shift_tv': shift_tv, 'seed': seed}
    return report


class AccuracyAcceptanceCurve(object):
    """Accuracy on the ``N`` most reliable instances for ``N = 1 ... N_test``"""

    def __init__(self, metric_name, counts):
        """
        :param metric_name: the metric that ordered the instances
        :type metric_name: str
        :param counts: the number of correct predictions among the first ``N`` instances, for every ``N``
        :type counts: array like
        :raises: None
        """
        super(AccuracyAcceptanceCurve, self).__init__()
        self.metric_name = metric_name
        self.counts = np.asarray(counts, dtype=np.int64)
        size = np.arange(1, len(self.counts) + 1)
        self.rates = size / float(max(len(self.counts), 1))
        self.accuracies = self.counts / size

    @property
    def rejection_rates(self):
        """``1 - r``, to read the curve as accuracy-rejection curve"""
        return 1.0 - self.rates

    @property
    def points(self):
        """List of ``(acceptance_rate, accuracy)``"""
        return list(zip(self.rates.tolist(), self.accuracies.tolist()))

    def __len__(self):
        return len(self.counts)

    def __repr__(self):
        return "AccuracyAcceptanceCurve(%r, %s points)" % (self.metric_name, len(self))


def accuracy_acceptance(report, metric_name):
    """Return the accuracy-acceptance curve of a metric

    Uncertainty metrics order ascending, robustness metrics descending. ``u_e`` orders by
    ``u_e_standard``. Ties keep the order of ``instance_index``.

    :param report: a report with true classes
    :type report: :class:`ReliabilityReport`
    :param metric_name: one of :data:`robquant.constants.METRICS`
    :type metric_name: str
    :returns: the curve
    :rtype: :class:`AccuracyAcceptanceCurve`
    :raises: :class:`ValueError` for an unknown metric or a report without classes
    """
    col = metric_column(metric_name)
    frame = report.frame
    values = frame[col].to_numpy(dtype=float)
    key = values if metric_name in UNCERTAINTY_METRICS else -values
    order = np.lexsort((frame['instance_index'].to_numpy(), key))
    return AccuracyAcceptanceCurve(metric_name, np.cumsum(report.correct[order]))


def rate_index(rates, rate):
    """Return the index of the smallest acceptance rate that is at least ``rate``

    :raises: :class:`ValueError` if ``rate`` is not in ``(0, 1]`` or beyond the rates
    """
    rate = float(rate)
    if not 0.0 < rate <= 1.0:
        raise ValueError("Acceptance rate has to be in (0, 1], got %s" % rate)
    i = int(np.searchsorted(rates, rate - 1e-12, side='left'))
    if i >= len(rates):
        raise ValueError("No acceptance rate reaches %s" % rate)
    return i


def accuracy_at(curve, rate):
    """Return the accuracy of the curve at the smallest ``N`` with ``N / N_test >= rate``"""
    return float(curve.accuracies[rate_index(curve.rates, rate)])


class GridStats(object):
    """Mean and standard deviation of the accuracy-acceptance curves of every cell

    ``mean[cell]`` and ``std[cell]`` are arrays with shape ``(len(metrics), len(rates))``.
    """

    def __init__(self, cells, rates, mean, std, replicates=None, metrics=METRICS):
        """
        :param cells: the ``(n_train, gamma)`` pairs in order
        :type cells: list of tuple
        :param rates: the acceptance rates shared by all curves
        :type rates: array like
        :param mean: mean curves per cell
        :type mean: dict
        :param std: standard deviation curves per cell
        :type std: dict
        :param replicates: number of experiments per cell
        :type replicates: dict | None
        :param metrics: the metric names in row order of the arrays
        :type metrics: tuple
        :raises: None
        """
        super(GridStats, self).__init__()
        self.cells = [(int(n), float(g)) for n, g in cells]
        self.rates = np.asarray(rates, dtype=float)
        self.mean = mean
        self.std = std
        self.replicates = replicates or {}
        self.metrics = tuple(metrics)

    def curve(self, cell, metric_name):
        """Return the mean and std curve of a metric in a cell"""
        j = self.metrics.index(metric_name)
        return self.mean[cell][j], self.std[cell][j]

    def to_frame(self, step=None):
        """Return the curves as table with the :data:`CURVE_COLUMNS`

        Rows are ordered by cell, metric and acceptance rate.

        :param step: if given, keep only the first rate reaching each multiple of ``step``
        :type step: float | None
        :rtype: :class:`pandas.DataFrame`
        """
        keep = np.arange(len(self.rates))
        if step is not None and len(self.rates):
            targets = np.arange(1, int(round(1.0 / step)) + 1) * step
            keep = np.unique([rate_index(self.rates, min(t, 1.0)) for t in targets])
        parts = []
        for cell in self.cells:
            for j, metric in enumerate(self.metrics):
                parts.append(pd.DataFrame({'n_train': cell[0], 'gamma': cell[1], 'metric': metric,
                                           'acceptance_rate': self.rates[keep],
                                           'mean_accuracy': self.mean[cell][j][keep],
                                           'std_accuracy': self.std[cell][j][keep]}))
        if not parts:
            return pd.DataFrame(columns=list(CURVE_COLUMNS))
        return pd.concat(parts, ignore_index=True)[list(CURVE_COLUMNS)]

    @classmethod
    def from_frame(cls, frame):
        """Restore stats from a table created by :meth:`GridStats.to_frame`

        :raises: :class:`ValueError` if the table is not complete
        """
        if list(frame.columns) != list(CURVE_COLUMNS):
            raise ValueError("Expected columns %s" % ",".join(CURVE_COLUMNS))
        cells = []
        for key in zip(frame['n_train'], frame['gamma']):
            cell = (int(key[0]), float(key[1]))
            if cell not in cells:
                cells.append(cell)
        metrics = tuple(dict.fromkeys(frame['metric']))
        rates = None
        mean, std = {}, {}
        for cell in cells:
            sub = frame[(frame['n_train'] == cell[0]) & (frame['gamma'] == cell[1])]
            mrows, srows = [], []
            for metric in metrics:
                part = sub[sub['metric'] == metric]
                r = part['acceptance_rate'].to_numpy(dtype=float)
                if rates is None:
                    rates = r
                elif not np.array_equal(rates, r):
                    raise ValueError("Curves of cell %s metric %s have different rates" % (cell, metric))
                mrows.append(part['mean_accuracy'].to_numpy(dtype=float))
                srows.append(part['std_accuracy'].to_numpy(dtype=float))
            mean[cell] = np.array(mrows)
            std[cell] = np.array(srows)
        return cls(cells, rates if rates is not None else [], mean, std, metrics=metrics or METRICS)

    def __repr__(self):
        return "GridStats(%s cells, %s rates)" % (len(self.cells), len(self.rates))


def summarize(stats, rate=0.2):
    """Return mean and std accuracy of every cell and metric at one acceptance rate

    :returns: table with columns ``n_train, gamma, metric, mean_accuracy, std_accuracy``
    :rtype: :class:`pandas.DataFrame`
    :raises: :class:`ValueError` if the rate is out of range
    """
    rows = []
    if stats.cells:
        i = rate_index(stats.rates, rate)
    for cell in stats.cells:
        for metric in stats.metrics:
            mean, std = stats.curve(cell, metric)
            rows.append({'n_train': cell[0], 'gamma': cell[1], 'metric': metric,
                         'mean_accuracy': float(mean[i]), 'std_accuracy': float(std[i])})
    return pd.DataFrame(rows, columns=['n_train', 'gamma', 'metric', 'mean_accuracy', 'std_accuracy'])


class GridContext(object):
    """Everything the replicates of a grid share"""

    def __init__(self, config, master_seed, test_dist, test_data):
        super(GridContext, self).__init__()
        self.config = config
        self.master_seed = master_seed
        self.test_dist = test_dist
        self.test_data = test_data


def build_context(config, master_seed):
    """Draw the test distribution and the test set of a grid run"""
    gen = synthetic.GeneratorConfig(config.domain, config.beta, config.class_probs, config.peak,
                                    derive_seed(master_seed, STREAM_RANDOM))
    test_dist = synthetic.make_test(gen)
    test_data = synthetic.sample_dataset(test_dist, config.n_test, derive_seed(master_seed, STREAM_TEST))
    return GridContext(config, master_seed, test_dist, test_data)


def shift_seed(master_seed, gamma, shift_index):
    """Return the seed of a shift distribution"""
    return derive_seed(master_seed, STREAM_SHIFT, gamma_key(gamma), shift_index)


def run_replicate(n_train, gamma, shift_index, train_index, context):
    """Run one experiment of the grid and return its curves

    The return value of the status is a dictionary with ``accuracies`` of shape ``(len(METRICS), N_test)``,
    ``shift_tv`` and ``alpha``.
    A robquant error, e.g. a bisection that does not converge, gives a ``FAILURE`` status with its message.

    :rtype: :class:`robquant.action.ActionStatus`
    """
    master = context.master_seed
    keys = (n_train, gamma_key(gamma), shift_index, train_index)
    train_dist, tv = synthetic.make_train(context.test_dist, gamma, shift_seed(master, gamma, shift_index))
    train = synthetic.sample_dataset(train_dist, n_train, derive_seed(master, STREAM_TRAIN, *keys))
    try:
        report = run_single(train, context.test_data, context.config, derive_seed(master, STREAM_RUN, *keys),
                            gamma=gamma, shift_tv=tv)
    except errors.RobquantException as e:
        return ActionStatus(ActionStatus.FAILURE, str(e))
    accuracies = np.array([accuracy_acceptance(report, m).accuracies for m in METRICS])
    msg = "accuracy %s with alpha %s" % (report.accuracy, report.metadata['alpha_selected'])
    return ActionStatus(ActionStatus.SUCCESS, msg,
                        returnvalue={'accuracies': accuracies, 'shift_tv': tv,
                                     'alpha': report.metadata['alpha_selected']})


def run_grid(config, cells=None, workers=1, shifts=None, train_sets=None):
    """Run the experiment grid and aggregate the curves of every cell

    :param config: the run config, ``master_seed`` has to be set
    :type config: :class:`robquant.iniconf.RunConfig`
    :param cells: the ``(n_train, gamma)`` cells, by default every combination from the config
    :type cells: list of tuple | None
    :param workers: the number of processes
    :type workers: int
    :param shifts: shift distributions per cell, by default from the config
    :type shifts: int | None
    :param train_sets: training sets per shift distribution, by default from the config
    :type train_sets: int | None
    :returns: the aggregated curves
    :rtype: :class:`GridStats`
    :raises: :class:`robquant.errors.ConfigError` without master seed,
             :class:`robquant.errors.ExperimentError` if any replicate fails
    """
    if config.master_seed is None:
        raise errors.ConfigError("A grid run needs a master seed")
    if cells is None:
        cells = [(n, g) for n in config.n_train for g in config.gamma]
    cells = [(int(n), float(g)) for n, g in cells]
    shifts = config.shifts if shifts is None else int(shifts)
    train_sets = config.train_sets if train_sets is None else int(train_sets)
    if sorted(set(config.n_train)) == [25, 50, 100]:
        log.info("Figure rows show n_train 100, 50, 25 from top to bottom, not 100, 50, 35.")
    context = build_context(config, config.master_seed)
    units = []
    for n, g in cells:
        for s in range(shifts):
            for t in range(train_sets):
                name = "n_train=%s gamma=%s shift=%s train=%s" % (n, g, s, t)
                units.append(ActionUnit(name, "Run one experiment of cell (%s, %s)" % (n, g),
                                        functools.partial(run_replicate, n, g, s, t)))
    log.info("Running %s experiments in %s cells with %s workers", len(units), len(cells), workers)
    collection = ActionCollection(units)
    collection.execute(context, workers=workers)
    status = collection.status()
    if status.value != ActionStatus.SUCCESS:
        log.error("%s\n%s", status.message, status.traceback)
        raise errors.ExperimentError(status.message)
    results = collection.results()
    per_cell = shifts * train_sets
    mean, std, replicates = {}, {}, {}
    for k, cell in enumerate(cells):
        chunk = results[k * per_cell:(k + 1) * per_cell]
        stack = np.stack([r['accuracies'] for r in chunk])
        mean[cell] = stack.mean(axis=0)
        std[cell] = stack.std(axis=0)
        replicates[cell] = per_cell
        tvs = [r['shift_tv'] for r in chunk]
        log.info("Cell n_train=%s gamma=%s: mean shift %.4f, accuracy %.4f", cell[0], cell[1],
                 np.mean(tvs), mean[cell][0][-1])
    n_test = len(context.test_data)
    rates = np.arange(1, n_test + 1) / float(n_test)
    return GridStats(cells, rates, mean, std, replicates)
