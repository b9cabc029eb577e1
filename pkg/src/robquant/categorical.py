"""Finite categorical domains and the mass functions that live on them.

Everything else in robquant builds on this module:

  :class:`DomainSpec` describes the class variable and the categorical features.
  :class:`MassFunction` is a mass function on a single finite set.
  :class:`JointMassFunction` is a dense table over classes times feature vectors.
  :class:`Dataset` is an ordered collection of :class:`LabeledInstance`.

Outcomes are always enumerated in the same order: the class index is slowest, then the
features in declaration order, each ascending. Sampling, CSV dumps and vertex enumeration
depend on this order.

All randomness goes through :func:`make_rng`, a numpy :class:`numpy.random.Generator` on top of the
counter-based ``Philox`` bit generator. Seeds for sub streams are derived with :func:`derive_seed`,
which hashes the master seed and a tuple of keys with :class:`numpy.random.SeedSequence`.
"""
import numpy as np
import pandas as pd

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant.constants import MASS_TOLERANCE, MAX_JOINT_CELLS, TIE_TOLERANCE, FLOAT_FORMAT


def make_rng(seed):
    """Return a random generator for the given seed

    :param seed: a non negative 64-bit integer
    :type seed: int
    :returns: a generator over the Philox bit generator
    :rtype: :class:`numpy.random.Generator`
    :raises: :class:`ValueError` if the seed is negative or too big
    """
    seed = int(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError("Seed has to be a 64-bit unsigned integer, got %s" % seed)
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(seed, *keys):
    """Derive a new 64-bit seed from a seed and some integer keys

    The derivation feeds ``seed`` as entropy and ``keys`` as spawn key into a
    :class:`numpy.random.SeedSequence` and takes the first 64-bit word of its state.
    The same seed and keys always give the same result, independent of what else was derived before.

    :param seed: the parent seed
    :type seed: int
    :param keys: non negative integers that identify the sub stream
    :type keys: int
    :returns: the derived seed
    :rtype: int
    :raises: :class:`ValueError` if a key is negative
    """
    keys = tuple(int(k) for k in keys)
    if any(k < 0 for k in keys):
        raise ValueError("Seed keys have to be non negative, got %s" % (keys,))
    sq = np.random.SeedSequence(int(seed), spawn_key=keys)
    return int(sq.generate_state(1, dtype=np.uint64)[0])


def _freeze(arr):
    arr.flags.writeable = False
    return arr


def _check_mass(arr, what):
    if arr.size == 0:
        raise errors.DegenerateDistributionError("%s has no outcomes" % what)
    if not np.all(np.isfinite(arr)):
        raise errors.DegenerateDistributionError("%s has non finite entries" % what)
    if np.any(arr < 0):
        raise errors.DegenerateDistributionError("%s has negative entries" % what)
    total = arr.sum()
    if abs(total - 1.0) > MASS_TOLERANCE:
        raise errors.DegenerateDistributionError("%s sums to %r instead of 1" % (what, float(total)))


class DomainSpec(object):
    """The cardinalities of the class variable and of every feature

    A domain is immutable and can be compared and hashed.
    """

    def __init__(self, num_classes, feature_cards):
        """Create a new domain

        :param num_classes: the number of classes, at least 2
        :type num_classes: int
        :param feature_cards: the number of values of each feature, each at least 2
        :type feature_cards: sequence of int
        :raises: :class:`robquant.errors.DomainError`
        """
        super(DomainSpec, self).__init__()
        num_classes = int(num_classes)
        feature_cards = tuple(int(c) for c in feature_cards)
        if num_classes < 2:
            raise errors.DomainError("A domain needs at least 2 classes, got %s" % num_classes)
        if not feature_cards:
            raise errors.DomainError("A domain needs at least one feature")
        if any(c < 2 for c in feature_cards):
            raise errors.DomainError("Every feature needs at least 2 values, got %s" % (feature_cards,))
        size = num_classes * int(np.prod(feature_cards, dtype=object))
        if size > MAX_JOINT_CELLS:
            raise errors.DomainError("Joint table with %s cells exceeds the limit of %s" % (size, MAX_JOINT_CELLS))
        self._num_classes = num_classes
        self._feature_cards = feature_cards

    @property
    def num_classes(self):
        """The number of classes |C|"""
        return self._num_classes

    @property
    def feature_cards(self):
        """Tuple with the cardinality of every feature"""
        return self._feature_cards

    @property
    def num_features(self):
        """The number of features N"""
        return len(self._feature_cards)

    @property
    def shape(self):
        """Shape of a dense joint table: ``(|C|, |F_1|, ..., |F_N|)``"""
        return (self._num_classes,) + self._feature_cards

    @property
    def num_feature_vectors(self):
        """The number of distinct feature vectors |F|"""
        return int(np.prod(self._feature_cards))

    @property
    def size(self):
        """The number of cells of a dense joint table"""
        return self._num_classes * self.num_feature_vectors

    def check_features(self, f):
        """Return the feature vector as tuple if it conforms to the domain

        :param f: the feature vector with 0-based values
        :type f: sequence of int
        :returns: the feature vector
        :rtype: tuple of int
        :raises: :class:`robquant.errors.DomainError`
        """
        f = tuple(int(v) for v in f)
        if len(f) != self.num_features:
            raise errors.DomainError("Expected %s feature values, got %s" % (self.num_features, len(f)))
        for i, (v, card) in enumerate(zip(f, self._feature_cards)):
            if not 0 <= v < card:
                raise errors.DomainError("Value %s of feature f%s is not in [0, %s)" % (v, i + 1, card))
        return f

    def check_class(self, c):
        """Return the class index if it conforms to the domain

        :param c: 0-based class index
        :type c: int
        :returns: the class index
        :rtype: int
        :raises: :class:`robquant.errors.DomainError`
        """
        c = int(c)
        if not 0 <= c < self._num_classes:
            raise errors.DomainError("Class %s is not in [0, %s)" % (c, self._num_classes))
        return c

    def __eq__(self, other):
        if not isinstance(other, DomainSpec):
            return NotImplemented
        return self._num_classes == other._num_classes and self._feature_cards == other._feature_cards

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self._num_classes, self._feature_cards))

    def __repr__(self):
        return "DomainSpec(num_classes=%s, feature_cards=%s)" % (self._num_classes, list(self._feature_cards))


def feature_vectors(domain):
    """Return all feature vectors of the domain in enumeration order

    :param domain: the domain
    :type domain: :class:`DomainSpec`
    :returns: an array with shape ``(|F|, N)``
    :rtype: :class:`numpy.ndarray`
    :raises: None
    """
    grid = np.indices(domain.feature_cards).reshape(domain.num_features, -1).T
    return grid


class MassFunction(object):
    """A probability mass function on a finite set ``{0, ..., domain_size - 1}``"""

    def __init__(self, probs):
        """Create a mass function

        :param probs: one non negative probability per outcome, summing to one
        :type probs: sequence of float
        :raises: :class:`robquant.errors.DegenerateDistributionError`
        """
        super(MassFunction, self).__init__()
        arr = np.array(probs, dtype=float)
        if arr.ndim != 1:
            raise errors.DegenerateDistributionError("A mass function needs a flat vector of probabilities")
        _check_mass(arr, "Mass function")
        self._probs = _freeze(arr)

    @property
    def probs(self):
        """Read only array of probabilities"""
        return self._probs

    @property
    def domain_size(self):
        """The number of outcomes"""
        return self._probs.size

    def __len__(self):
        return self._probs.size

    def __getitem__(self, key):
        return float(self._probs[key])

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return np.array_equal(self._probs, other._probs)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def tolist(self):
        return self._probs.tolist()

    def __repr__(self):
        return "MassFunction(%s)" % self._probs.tolist()


class JointMassFunction(object):
    """A dense mass function over classes and feature vectors

    The table has the shape :data:`DomainSpec.shape`. ``joint.table[c, f_1, ..., f_N]`` is ``p(c, f)``.
    """

    def __init__(self, domain, probs):
        """Create a joint mass function

        :param domain: the domain of the table
        :type domain: :class:`DomainSpec`
        :param probs: the probabilities, either flat in enumeration order or with the domain shape
        :type probs: array like
        :raises: :class:`robquant.errors.DegenerateDistributionError`, :class:`robquant.errors.ShapeMismatchError`
        """
        super(JointMassFunction, self).__init__()
        arr = np.array(probs, dtype=float)
        if arr.size != domain.size:
            raise errors.ShapeMismatchError("Expected %s probabilities for %r, got %s" % (domain.size, domain, arr.size))
        arr = arr.reshape(domain.shape)
        _check_mass(arr, "Joint mass function")
        self._domain = domain
        self._table = _freeze(arr)

    @property
    def domain(self):
        """The :class:`DomainSpec` of the table"""
        return self._domain

    @property
    def table(self):
        """Read only dense array with the domain shape"""
        return self._table

    @property
    def probs(self):
        """Read only flat array in enumeration order"""
        return self._table.reshape(-1)

    def class_slice(self, f):
        """Return the vector ``p(., f)`` over all classes

        :param f: the feature vector
        :type f: sequence of int
        :returns: array with one joint probability per class
        :rtype: :class:`numpy.ndarray`
        :raises: :class:`robquant.errors.DomainError`
        """
        f = self._domain.check_features(f)
        return self._table[(slice(None),) + f]

    def value(self, c, f):
        """Return ``p(c, f)``"""
        c = self._domain.check_class(c)
        return float(self.class_slice(f)[c])

    def __eq__(self, other):
        if not isinstance(other, JointMassFunction):
            return NotImplemented
        return self._domain == other._domain and np.array_equal(self._table, other._table)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        return "JointMassFunction(%r)" % (self._domain,)


class LabeledInstance(object):
    """A class together with a feature vector"""

    def __init__(self, class_index, feature_values):
        """
        :param class_index: 0-based class
        :type class_index: int
        :param feature_values: 0-based feature values
        :type feature_values: sequence of int
        :raises: None
        """
        super(LabeledInstance, self).__init__()
        self.class_index = int(class_index)
        self.feature_values = tuple(int(v) for v in feature_values)

    def __eq__(self, other):
        if not isinstance(other, LabeledInstance):
            return NotImplemented
        return self.class_index == other.class_index and self.feature_values == other.feature_values

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.class_index, self.feature_values))

    def __repr__(self):
        return "LabeledInstance(%s, %s)" % (self.class_index, list(self.feature_values))


class Dataset(object):
    """An ordered collection of labeled instances over one domain

    Internally the instances are kept as two integer arrays, :data:`Dataset.classes` and
    :data:`Dataset.features`. The order of the instances is significant.
    """

    def __init__(self, domain, instances=()):
        """Create a dataset from :class:`LabeledInstance` objects

        :param domain: the domain all instances conform to
        :type domain: :class:`DomainSpec`
        :param instances: the instances
        :type instances: iterable of :class:`LabeledInstance`
        :raises: :class:`robquant.errors.DomainError`
        """
        instances = list(instances)
        classes = [i.class_index for i in instances]
        features = [i.feature_values for i in instances]
        self._init_arrays(domain, classes, features)

    def _init_arrays(self, domain, classes, features):
        classes = np.array(classes, dtype=np.int64).reshape(-1)
        features = np.array(features, dtype=np.int64).reshape(len(classes), domain.num_features)
        if classes.size:
            if classes.min() < 0 or classes.max() >= domain.num_classes:
                raise errors.DomainError("Dataset holds classes outside of [0, %s)" % domain.num_classes)
            cards = np.array(domain.feature_cards)
            if np.any(features < 0) or np.any(features >= cards[None, :]):
                raise errors.DomainError("Dataset holds feature values outside of %r" % (domain,))
        self._domain = domain
        self._classes = _freeze(classes)
        self._features = _freeze(features)

    @classmethod
    def from_arrays(cls, domain, classes, features):
        """Create a dataset from a class array and a feature matrix

        :param domain: the domain
        :type domain: :class:`DomainSpec`
        :param classes: shape ``(n,)``
        :type classes: array like
        :param features: shape ``(n, N)``
        :type features: array like
        :returns: the dataset
        :rtype: :class:`Dataset`
        :raises: :class:`robquant.errors.DomainError`
        """
        ds = cls.__new__(cls)
        ds._init_arrays(domain, classes, features)
        return ds

    @property
    def domain(self):
        return self._domain

    @property
    def classes(self):
        """Read only array of class indices"""
        return self._classes

    @property
    def features(self):
        """Read only matrix of feature values, one row per instance"""
        return self._features

    @property
    def instances(self):
        """List of :class:`LabeledInstance` in dataset order"""
        return [self[i] for i in range(len(self))]

    def subset(self, indices):
        """Return a new dataset with the instances at the given indices, in that order"""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset.from_arrays(self._domain, self._classes[indices], self._features[indices])

    def __len__(self):
        return self._classes.size

    def __getitem__(self, i):
        return LabeledInstance(self._classes[i], self._features[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self._domain == other._domain and np.array_equal(self._classes, other._classes)
                and np.array_equal(self._features, other._features))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        return "Dataset(%r, %s instances)" % (self._domain, len(self))


def normalize(weights):
    """Return the mass function proportional to the given weights

    :param weights: non negative weights, at least one positive
    :type weights: sequence of float
    :returns: the normalized mass function
    :rtype: :class:`MassFunction`
    :raises: :class:`robquant.errors.DegenerateDistributionError`
    """
    arr = np.array(weights, dtype=float).reshape(-1)
    if arr.size == 0 or not np.all(np.isfinite(arr)) or np.any(arr < 0) or not np.any(arr > 0):
        raise errors.DegenerateDistributionError("degenerate weight vector: %s" % arr.tolist())
    return MassFunction(arr / arr.sum())


def _same_shape(p, q):
    if type(p) is not type(q):
        raise errors.ShapeMismatchError("Cannot combine %s with %s" % (type(p).__name__, type(q).__name__))
    if isinstance(p, JointMassFunction):
        if p.domain != q.domain:
            raise errors.ShapeMismatchError("Domains differ: %r and %r" % (p.domain, q.domain))
    elif p.domain_size != q.domain_size:
        raise errors.ShapeMismatchError("Sizes differ: %s and %s" % (p.domain_size, q.domain_size))


def mix(p, q, w):
    """Return the mixture ``(1 - w) * p + w * q``

    :param p: the first mass function
    :type p: :class:`MassFunction` | :class:`JointMassFunction`
    :param q: the second mass function, of the same kind and shape
    :type q: :class:`MassFunction` | :class:`JointMassFunction`
    :param w: the weight of ``q`` in ``[0, 1]``
    :type w: float
    :returns: the mixture, of the same kind as the inputs
    :rtype: :class:`MassFunction` | :class:`JointMassFunction`
    :raises: :class:`robquant.errors.ShapeMismatchError`, :class:`ValueError`
    """
    _same_shape(p, q)
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise ValueError("Mixture weight has to be in [0, 1], got %s" % w)
    if isinstance(p, JointMassFunction):
        return JointMassFunction(p.domain, (1.0 - w) * p.table + w * q.table)
    return MassFunction((1.0 - w) * p.probs + w * q.probs)


def total_variation(p, q):
    """Return the total variation distance ``1/2 * sum |p - q|``

    :raises: :class:`robquant.errors.ShapeMismatchError`
    """
    _same_shape(p, q)
    return float(0.5 * np.abs(p.probs - q.probs).sum())


def class_posterior(values):
    """Normalize a vector of class joints ``p(., f)`` to ``p(. | f)``

    :param values: one joint probability per class
    :type values: array like
    :returns: the conditional mass function over classes
    :rtype: :class:`MassFunction`
    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    values = np.asarray(values, dtype=float)
    total = values.sum()
    if not total > 0:
        raise errors.ZeroMarginalError("zero feature marginal")
    return MassFunction(values / total)


def condition_on_features(joint, f):
    """Return ``p(. | f)`` for a joint mass function

    :param joint: the joint
    :type joint: :class:`JointMassFunction`
    :param f: the feature vector
    :type f: sequence of int
    :returns: mass function over classes
    :rtype: :class:`MassFunction`
    :raises: :class:`robquant.errors.ZeroMarginalError` if ``p(f) = 0``
    """
    return class_posterior(joint.class_slice(f))


def marginal_class(joint):
    """Return the class marginal ``p(c) = sum_f p(c, f)``"""
    axes = tuple(range(1, joint.table.ndim))
    return MassFunction(joint.table.sum(axis=axes))


def argmax_classes(values):
    """Return the lowest maximizing class and the set of all maximizers

    Two values count as tied if they differ by at most :data:`robquant.constants.TIE_TOLERANCE`
    relative to the maximum. If every value is zero, every class maximizes.

    :param values: one value per class
    :type values: array like
    :returns: the predicted class and the set of maximizers
    :rtype: (int, frozenset)
    :raises: None
    """
    values = np.asarray(values, dtype=float)
    top = values.max()
    ties = np.flatnonzero(values >= top - TIE_TOLERANCE * top)
    return int(ties[0]), frozenset(int(c) for c in ties)


def product_table(domain, prior, conditionals):
    """Return the dense table ``p(c) * prod_i p(f_i | c)``

    :param domain: the domain
    :type domain: :class:`DomainSpec`
    :param prior: class probabilities, shape ``(|C|,)``
    :type prior: array like
    :param conditionals: per feature an array with shape ``(|C|, |F_i|)``
    :type conditionals: sequence of array like
    :returns: the table with the domain shape
    :rtype: :class:`numpy.ndarray`
    :raises: None
    """
    n = domain.num_features
    table = np.asarray(prior, dtype=float).reshape((domain.num_classes,) + (1,) * n)
    for i, cond in enumerate(conditionals):
        shape = [domain.num_classes] + [1] * n
        shape[i + 1] = domain.feature_cards[i]
        table = table * np.asarray(cond, dtype=float).reshape(shape)
    return table


def naive_bayes_residual(joint):
    """Return how far a joint is from satisfying the Naive Bayes factorization

    For every class the table ``p(c, .)`` is compared with ``p(c) * prod_i p(f_i | c)`` built
    from its own marginals. Classes without mass are skipped.

    :param joint: the joint
    :type joint: :class:`JointMassFunction`
    :returns: the largest absolute difference over all cells
    :rtype: float
    :raises: None
    """
    table = joint.table
    n = joint.domain.num_features
    prior = marginal_class(joint).probs
    conds = []
    for i in range(n):
        axes = tuple(a for a in range(1, n + 1) if a != i + 1)
        marg = table.sum(axis=axes) if axes else table
        with np.errstate(invalid='ignore', divide='ignore'):
            conds.append(np.where(prior[:, None] > 0, marg / prior[:, None], 0.0))
    rebuilt = product_table(joint.domain, prior, conds)
    return float(np.abs(rebuilt - table).max())


def sample(dist, n, seed):
    """Draw ``n`` i.i.d. outcomes by inverse CDF over the fixed outcome enumeration

    :param dist: the distribution to sample from
    :type dist: :class:`MassFunction` | :class:`JointMassFunction`
    :param n: the number of draws
    :type n: int
    :param seed: the seed for :func:`make_rng`
    :type seed: int
    :returns: a list of outcome indices for a :class:`MassFunction`, a :class:`Dataset` for a joint
    :rtype: list | :class:`Dataset`
    :raises: :class:`ValueError` if ``n`` is negative
    """
    n = int(n)
    if n < 0:
        raise ValueError("Cannot draw %s samples" % n)
    probs = dist.probs
    cdf = np.cumsum(probs)
    last = np.flatnonzero(probs > 0)[-1]
    u = make_rng(seed).random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side='right'), last)
    if isinstance(dist, JointMassFunction):
        cells = np.unravel_index(idx, dist.domain.shape)
        features = np.stack(cells[1:], axis=1) if n else np.zeros((0, dist.domain.num_features), dtype=np.int64)
        return Dataset.from_arrays(dist.domain, cells[0], features)
    return [int(i) for i in idx]


def _feature_columns(domain):
    return ['f%s' % (i + 1) for i in range(domain.num_features)]


def write_joint_csv(joint, path):
    """Write a joint as CSV with header ``class,f1,...,fN,prob`` in enumeration order

    :raises: :class:`robquant.errors.ExportError`
    """
    domain = joint.domain
    cells = np.indices(domain.shape).reshape(len(domain.shape), -1).T
    df = pd.DataFrame(cells, columns=['class'] + _feature_columns(domain))
    df['prob'] = joint.probs
    try:
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    except (IOError, OSError) as e:
        raise errors.ExportError(str(e), path)
    log.debug("Wrote joint table %s", path)


def _read_frame(path, **kwargs):
    try:
        return pd.read_csv(path, **kwargs)
    except pd.errors.EmptyDataError:
        raise errors.ParseError("file is empty, expected a header", path, 1)
    except pd.errors.ParserError as e:
        raise errors.ParseError(str(e).strip(), path)
    except (IOError, OSError) as e:
        raise errors.ParseError(str(e), path)


def read_joint_csv(path):
    """Read a joint written by :func:`write_joint_csv`

    The domain is inferred from the largest index of every column. The table has to be dense
    and in enumeration order.

    :returns: the joint
    :rtype: :class:`JointMassFunction`
    :raises: :class:`robquant.errors.ParseError`
    """
    df = _read_frame(path, float_precision='round_trip')
    cols = list(df.columns)
    if len(cols) < 3 or cols[0] != 'class' or cols[-1] != 'prob':
        raise errors.ParseError("expected header class,f1,...,fN,prob", path, 1)
    expected = ['class'] + ['f%s' % (i + 1) for i in range(len(cols) - 2)] + ['prob']
    if cols != expected:
        raise errors.ParseError("expected header %s" % ",".join(expected), path, 1)
    if df.empty:
        raise errors.ParseError("joint table has no rows", path, 2)
    index = df[cols[:-1]].to_numpy()
    try:
        domain = DomainSpec(index[:, 0].max() + 1, index[:, 1:].max(axis=0) + 1)
    except errors.DomainError as e:
        raise errors.ParseError(str(e), path)
    cells = np.indices(domain.shape).reshape(len(domain.shape), -1).T
    if index.shape != cells.shape or not np.array_equal(index, cells):
        bad = 0
        if index.shape == cells.shape:
            bad = int(np.flatnonzero(np.any(index != cells, axis=1))[0])
        else:
            bad = min(len(index), len(cells))
        raise errors.ParseError("rows are not a dense table in enumeration order", path, bad + 2)
    try:
        return JointMassFunction(domain, df['prob'].to_numpy(dtype=float))
    except errors.DegenerateDistributionError as e:
        raise errors.ParseError(str(e), path)


def write_dataset_csv(dataset, path):
    """Write a dataset as CSV with header ``class,f1,...,fN``

    :raises: :class:`robquant.errors.ExportError`
    """
    df = pd.DataFrame(dataset.features, columns=_feature_columns(dataset.domain))
    df.insert(0, 'class', dataset.classes)
    try:
        df.to_csv(path, index=False, lineterminator='\n')
    except (IOError, OSError) as e:
        raise errors.ExportError(str(e), path)
    log.debug("Wrote %s instances to %s", len(dataset), path)


def read_instances_csv(path, domain, require_class=True):
    """Read feature vectors and optional classes from a CSV file

    The header is ``class,f1,...,fN`` or ``f1,...,fN``. Blank lines are skipped. Line numbers in errors
    are lines of the file, the header is line 1.

    :param path: the file
    :type path: str
    :param domain: the domain the values have to conform to
    :type domain: :class:`DomainSpec`
    :param require_class: if True, the class column is mandatory
    :type require_class: bool
    :returns: the feature matrix and the class array or None if there is no class column
    :rtype: (:class:`numpy.ndarray`, :class:`numpy.ndarray` | None)
    :raises: :class:`robquant.errors.ParseError`
    """
    df = _read_frame(path, dtype=str, keep_default_na=False, skip_blank_lines=False).fillna('')
    fcols = _feature_columns(domain)
    cols = list(df.columns)
    if cols == ['class'] + fcols:
        has_class = True
    elif cols == fcols and not require_class:
        has_class = False
    else:
        want = ['class'] + fcols
        raise errors.ParseError("expected header %s" % ",".join(want if require_class else fcols), path, 1)
    blank = np.ones(len(df), dtype=bool)
    for col in cols:
        blank &= (df[col].str.strip() == '').to_numpy()
    df = df[~blank]
    lines = df.index.to_numpy() + 2
    limits = ([domain.num_classes] if has_class else []) + list(domain.feature_cards)
    values = np.zeros((len(df), len(cols)), dtype=np.int64)
    for j, (col, limit) in enumerate(zip(cols, limits)):
        raw = df[col].str.strip()
        num = pd.to_numeric(raw, errors='coerce')
        bad = num.isna() | (num % 1 != 0) | (num < 0) | (num >= limit)
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise errors.ParseError("value %r of column %s is not an integer in [0, %s)" % (raw.iloc[row], col, limit),
                                    path, int(lines[row]))
        values[:, j] = num.to_numpy(dtype=np.int64)
    if has_class:
        return values[:, 1:], values[:, 0]
    return values, None


def read_dataset_csv(path, domain):
    """Read a labeled dataset written by :func:`write_dataset_csv`

    :returns: the dataset
    :rtype: :class:`Dataset`
    :raises: :class:`robquant.errors.ParseError`
    """
    features, classes = read_instances_csv(path, domain, require_class=True)
    return Dataset.from_arrays(domain, classes, features)
