"""Naive Bayes classifiers over categorical features

A model stores the class marginal ``p(c)`` and per class and feature the conditional ``p(f_i | c)``.
Learning uses Dirichlet smoothing with a single parameter ``alpha``::

  p(c)       = (n(c) + alpha) / (n + alpha * |C|)
  p(f_i | c) = (n(c, f_i) + alpha) / (n(c) + alpha * |F_i|)

``alpha = 0`` gives the observed relative frequencies. :func:`select_alpha` picks ``alpha`` from a grid by
k-fold cross validation.

Most functions have a batch sibling that works on a feature matrix with one row per instance, e.g.
:func:`class_joints` and :func:`batch_class_joints`. The single instance versions call the batch versions,
so both give bit identical results.
"""
import numpy as np

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant.categorical import (DomainSpec, MassFunction, JointMassFunction, argmax_classes, class_posterior,
                                  product_table, make_rng)
from robquant.constants import TIE_TOLERANCE, MODEL_SPEC_PATH, CV_FOLDS, ALPHA_GRID, FLOAT_FORMAT
from robquant import iniconf


class CountTable(object):
    """Sufficient statistics of a dataset for a Naive Bayes classifier

    :data:`CountTable.class_counts` has shape ``(|C|,)``.
    :data:`CountTable.feature_counts` holds per feature an array with shape ``(|C|, |F_i|)``.
    """

    def __init__(self, domain, class_counts, feature_counts):
        """
        :param domain: the domain
        :type domain: :class:`robquant.categorical.DomainSpec`
        :param class_counts: counts per class
        :type class_counts: array like
        :param feature_counts: per feature the counts per class and value
        :type feature_counts: sequence of array like
        :raises: None
        """
        super(CountTable, self).__init__()
        self.domain = domain
        self.class_counts = np.asarray(class_counts, dtype=np.int64)
        self.feature_counts = tuple(np.asarray(fc, dtype=np.int64) for fc in feature_counts)

    @property
    def n(self):
        """The total number of instances"""
        return int(self.class_counts.sum())

    @property
    def n_c(self):
        """List with the number of instances per class"""
        return self.class_counts.tolist()

    @property
    def n_cf(self):
        """Nested list of counts indexed by ``[class][feature][value]``"""
        return [[fc[c].tolist() for fc in self.feature_counts] for c in range(self.domain.num_classes)]


def count(dataset):
    """Count classes and class/feature value combinations

    :param dataset: a non empty dataset
    :type dataset: :class:`robquant.categorical.Dataset`
    :returns: the counts
    :rtype: :class:`CountTable`
    :raises: :class:`robquant.errors.DomainError` if the dataset is empty
    """
    if not len(dataset):
        raise errors.DomainError("Cannot count an empty dataset")
    domain = dataset.domain
    nc = domain.num_classes
    classes = dataset.classes
    class_counts = np.bincount(classes, minlength=nc)
    feature_counts = []
    for i, card in enumerate(domain.feature_cards):
        flat = classes * card + dataset.features[:, i]
        feature_counts.append(np.bincount(flat, minlength=nc * card).reshape(nc, card))
    return CountTable(domain, class_counts, feature_counts)


class NbcModel(object):
    """A Naive Bayes classifier: ``p(c, f) = p(c) * prod_i p(f_i | c)``"""

    def __init__(self, domain, class_marginal, conditionals, alpha):
        """Create a model from its local mass functions

        :param domain: the domain
        :type domain: :class:`robquant.categorical.DomainSpec`
        :param class_marginal: mass function over the classes
        :type class_marginal: :class:`robquant.categorical.MassFunction` | sequence of float
        :param conditionals: ``conditionals[c][i]`` is the mass function over the values of feature ``i`` given ``c``
        :type conditionals: nested sequence of :class:`robquant.categorical.MassFunction`
        :param alpha: the smoothing used to learn the model
        :type alpha: float
        :raises: :class:`robquant.errors.ShapeMismatchError`, :class:`robquant.errors.DegenerateDistributionError`
        """
        super(NbcModel, self).__init__()
        prior = class_marginal if isinstance(class_marginal, MassFunction) else MassFunction(class_marginal)
        if prior.domain_size != domain.num_classes:
            raise errors.ShapeMismatchError("Class marginal has %s entries for %s classes"
                                            % (prior.domain_size, domain.num_classes))
        if len(conditionals) != domain.num_classes:
            raise errors.ShapeMismatchError("Expected conditionals for %s classes" % domain.num_classes)
        tables = []
        for i, card in enumerate(domain.feature_cards):
            rows = []
            for c in range(domain.num_classes):
                if len(conditionals[c]) != domain.num_features:
                    raise errors.ShapeMismatchError("Class %s needs %s conditionals" % (c, domain.num_features))
                cond = conditionals[c][i]
                cond = cond if isinstance(cond, MassFunction) else MassFunction(cond)
                if cond.domain_size != card:
                    raise errors.ShapeMismatchError("Conditional of f%s given class %s has %s entries instead of %s"
                                                    % (i + 1, c, cond.domain_size, card))
                rows.append(cond.probs)
            tables.append(np.array(rows))
        self._domain = domain
        self._prior = prior.probs
        self._tables = tuple(tables)
        for t in self._tables:
            t.flags.writeable = False
        self._alpha = float(alpha)

    @classmethod
    def from_arrays(cls, domain, prior, tables, alpha):
        """Create a model from a prior vector and per feature ``(|C|, |F_i|)`` tables"""
        conditionals = [[tables[i][c] for i in range(domain.num_features)] for c in range(domain.num_classes)]
        return cls(domain, prior, conditionals, alpha)

    @property
    def domain(self):
        return self._domain

    @property
    def alpha(self):
        return self._alpha

    @property
    def class_marginal(self):
        """:class:`robquant.categorical.MassFunction` over the classes"""
        return MassFunction(self._prior)

    @property
    def prior(self):
        """Read only array ``p(c)``"""
        return self._prior

    @property
    def tables(self):
        """Tuple with one read only ``(|C|, |F_i|)`` array ``p(f_i | c)`` per feature"""
        return self._tables

    def conditional(self, c, i):
        """Return ``p(F_i | c)`` as :class:`robquant.categorical.MassFunction`"""
        return MassFunction(self._tables[i][c])

    @property
    def conditionals(self):
        """Nested list ``[class][feature]`` of :class:`robquant.categorical.MassFunction`"""
        return [[self.conditional(c, i) for i in range(self._domain.num_features)]
                for c in range(self._domain.num_classes)]

    def __eq__(self, other):
        if not isinstance(other, NbcModel):
            return NotImplemented
        return (self._domain == other._domain and self._alpha == other._alpha
                and np.array_equal(self._prior, other._prior)
                and all(np.array_equal(a, b) for a, b in zip(self._tables, other._tables)))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        return "NbcModel(%r, alpha=%s)" % (self._domain, self._alpha)


def fit_counts(counts, alpha):
    """Learn a model from counts

    :param counts: the sufficient statistics
    :type counts: :class:`CountTable`
    :param alpha: the smoothing parameter, non negative
    :type alpha: float
    :returns: the model
    :rtype: :class:`NbcModel`
    :raises: :class:`ValueError`, :class:`robquant.errors.EmptyClassError`
    """
    alpha = float(alpha)
    if not alpha >= 0:
        raise ValueError("alpha has to be non negative, got %s" % alpha)
    domain = counts.domain
    n_c = counts.class_counts.astype(float)
    if alpha == 0 and np.any(n_c == 0):
        raise errors.EmptyClassError("unsmoothed fit with empty class")
    prior = (n_c + alpha) / (counts.n + alpha * domain.num_classes)
    tables = []
    for fc, card in zip(counts.feature_counts, domain.feature_cards):
        tables.append((fc + alpha) / (n_c + alpha * card)[:, None])
    return NbcModel.from_arrays(domain, prior, tables, alpha)


def fit(dataset, alpha):
    """Learn a Naive Bayes classifier with Dirichlet smoothing

    :param dataset: the training data
    :type dataset: :class:`robquant.categorical.Dataset`
    :param alpha: the smoothing parameter, non negative
    :type alpha: float
    :returns: the model
    :rtype: :class:`NbcModel`
    :raises: :class:`robquant.errors.DomainError` for an empty dataset,
             :class:`robquant.errors.EmptyClassError` if ``alpha`` is 0 and a class is absent
    """
    return fit_counts(count(dataset), alpha)


def batch_class_joints(model, features):
    """Return ``p(c, f)`` for every class and every row of ``features``

    :param model: the model
    :type model: :class:`NbcModel`
    :param features: shape ``(n, N)``
    :type features: array like
    :returns: shape ``(n, |C|)``
    :rtype: :class:`numpy.ndarray`
    :raises: None
    """
    features = np.asarray(features, dtype=np.int64)
    out = np.tile(model.prior, (features.shape[0], 1))
    for i, table in enumerate(model.tables):
        out = out * table[:, features[:, i]].T
    return out


def class_joints(model, f):
    """Return the vector ``p(., f)`` over the classes

    :raises: :class:`robquant.errors.DomainError`
    """
    f = model.domain.check_features(f)
    return batch_class_joints(model, [f])[0]


def joint(model, c, f):
    """Return ``p(c, f) = p(c) * prod_i p(f_i | c)``

    :raises: :class:`robquant.errors.DomainError`
    """
    c = model.domain.check_class(c)
    return float(class_joints(model, f)[c])


def predict(model, f):
    """Return the predicted class and the set of all maximizing classes

    Ties are detected with a relative tolerance of :data:`robquant.constants.TIE_TOLERANCE`.
    The prediction is the lowest maximizing class. If all joints are zero, every class maximizes.

    :param model: the model
    :type model: :class:`NbcModel`
    :param f: the feature vector
    :type f: sequence of int
    :returns: the prediction and the argmax set
    :rtype: (int, frozenset)
    :raises: :class:`robquant.errors.DomainError`
    """
    return argmax_classes(class_joints(model, f))


def batch_predict(values):
    """Return the prediction for every row of a ``(n, |C|)`` matrix of joints

    Same tie rule as :func:`predict`.
    """
    values = np.asarray(values, dtype=float)
    top = values.max(axis=1)
    ties = values >= (top - TIE_TOLERANCE * top)[:, None]
    return np.argmax(ties, axis=1)


def posterior(model, f):
    """Return ``p(. | f)``

    :raises: :class:`robquant.errors.ZeroMarginalError` if every joint at ``f`` is zero
    """
    return class_posterior(class_joints(model, f))


def to_joint(model):
    """Return the dense :class:`robquant.categorical.JointMassFunction` of the model"""
    table = product_table(model.domain, model.prior, model.tables)
    return JointMassFunction(model.domain, table)


def _fold_indices(n, folds, seed):
    perm = make_rng(seed).permutation(n)
    return np.array_split(perm, folds)


def select_alpha(dataset, grid=ALPHA_GRID, folds=CV_FOLDS, seed=0):
    """Select the smoothing parameter with the best cross validated accuracy

    The instance indices are shuffled with the seed and split into ``folds`` contiguous folds
    whose sizes differ by at most one. Ties in mean accuracy go to the smallest ``alpha``.

    :param dataset: the training data
    :type dataset: :class:`robquant.categorical.Dataset`
    :param grid: the candidate values, all positive
    :type grid: sequence of float
    :param folds: the number of folds, at least 2
    :type folds: int
    :param seed: seed for the shuffle
    :type seed: int
    :returns: the selected alpha and the mean accuracy per grid entry
    :rtype: (float, list of float)
    :raises: :class:`ValueError` for a bad grid or fold count,
             :class:`robquant.errors.DomainError` if the dataset has fewer instances than folds
    """
    grid = [float(a) for a in grid]
    if not grid or any(not a > 0 for a in grid):
        raise ValueError("alpha grid has to be non empty and positive: %s" % grid)
    folds = int(folds)
    if folds < 2:
        raise ValueError("Need at least 2 folds, got %s" % folds)
    n = len(dataset)
    if n < folds:
        raise errors.DomainError("dataset of %s instances is smaller than the fold count %s" % (n, folds))
    blocks = _fold_indices(n, folds, seed)
    scores = np.zeros((folds, len(grid)))
    for k, test_idx in enumerate(blocks):
        train_idx = np.concatenate([b for j, b in enumerate(blocks) if j != k])
        counts = count(dataset.subset(train_idx))
        truth = dataset.classes[test_idx]
        feats = dataset.features[test_idx]
        for j, alpha in enumerate(grid):
            pred = batch_predict(batch_class_joints(fit_counts(counts, alpha), feats))
            scores[k, j] = np.mean(pred == truth)
        log.debug("Fold %s accuracies: %s", k, scores[k].tolist())
    means = scores.mean(axis=0)
    best = means.max()
    winner = min(a for a, m in zip(grid, means) if m == best)
    log.debug("Selected alpha %s with cv accuracy %s", winner, best)
    return winner, means.tolist()


def save_model(model, path):
    """Write the model as ini document with 17 significant digits

    :raises: :class:`robquant.errors.ExportError`
    """
    def fmt(values):
        return [FLOAT_FORMAT % v for v in values]

    domain = model.domain
    conds = {}
    for c in range(domain.num_classes):
        conds['class%s' % c] = dict(('f%s' % (i + 1), fmt(model.tables[i][c])) for i in range(domain.num_features))
    data = {'alpha': FLOAT_FORMAT % model.alpha,
            'class_marginal': fmt(model.prior),
            'domain': {'num_classes': str(domain.num_classes),
                       'feature_cards': [str(c) for c in domain.feature_cards]},
            'conditionals': conds}
    iniconf.write_document(data, path)
    log.info("Saved model to %s", path)


def load_model(path):
    """Load a model written by :func:`save_model`

    :returns: the model
    :rtype: :class:`NbcModel`
    :raises: :class:`robquant.errors.ParseError`
    """
    doc = iniconf.load_document(path, MODEL_SPEC_PATH)
    try:
        domain = DomainSpec(doc['domain']['num_classes'], doc['domain']['feature_cards'])
        conditionals = []
        for c in range(domain.num_classes):
            section = doc['conditionals']['class%s' % c]
            conditionals.append([section['f%s' % (i + 1)] for i in range(domain.num_features)])
        return NbcModel(domain, doc['class_marginal'], conditionals, doc['alpha'])
    except KeyError as e:
        raise errors.ParseError("missing entry %s" % e, path)
    except errors.RobquantException as e:
        raise errors.ParseError(str(e), path)
