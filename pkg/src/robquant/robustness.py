"""Robustness of a prediction under epsilon-contamination

A prediction ``c_hat`` at ``f`` is robust for a set of joints if every joint in the set has the unique
maximizer ``c_hat`` at ``f``. Contaminating a mass function ``p`` with ``epsilon`` gives the set of all
``(1 - epsilon) * p + epsilon * p_star``. The robustness metric is the smallest ``epsilon`` at which
the prediction stops being robust.

Global
  the whole joint is contaminated. :func:`global_robustness` evaluates the closed form
  ``d / (1 + d)`` where ``d`` is the gap between the two largest joints at ``f``.
Local
  every local mass function of a Naive Bayes model is contaminated on its own.
  :func:`local_robustness` finds the root of the increasing function :func:`local_phi_max`
  with bisection on ``[0, 1/2]``.

Both metrics are in ``[0, 1/2]`` and are 0 if the argmax at ``f`` is tied or all joints are zero.
A prediction is robust at ``epsilon`` iff ``epsilon`` is strictly smaller than the metric.

The extreme points of both contaminations are available as :class:`PerturbationVertexSet`.
:func:`is_robust_finite` checks robustness over finitely many joints, which is exact on vertex sets
and serves as reference for the metrics.
"""
import abc

import numpy as np

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant import nbc
from robquant.categorical import JointMassFunction, product_table
from robquant.constants import (TIE_TOLERANCE, BISECTION_TOL, BISECTION_MAX_ITER, MAX_GLOBAL_VERTICES,
                                MAX_LOCAL_VERTICES)


GLOBAL = 'global'
LOCAL = 'local'


class RobustnessValue(object):
    """The value of a robustness metric for one prediction"""

    def __init__(self, epsilon, kind, converged=True, bracket=None):
        """
        :param epsilon: the metric value in ``[0, 1/2]``
        :type epsilon: float
        :param kind: :data:`GLOBAL` or :data:`LOCAL`
        :type kind: str
        :param converged: False if a root finder gave up
        :type converged: bool
        :param bracket: the final bisection bracket ``(lo, hi)`` or None
        :type bracket: tuple | None
        :raises: None
        """
        super(RobustnessValue, self).__init__()
        self.epsilon = float(epsilon)
        self.kind = kind
        self.converged = converged
        self.bracket = bracket

    def __float__(self):
        return self.epsilon

    def __repr__(self):
        return "RobustnessValue(%r, %r, converged=%s)" % (self.epsilon, self.kind, self.converged)


def _class_slice(model_or_joint, f):
    if isinstance(model_or_joint, JointMassFunction):
        return model_or_joint.class_slice(f)
    return nbc.class_joints(model_or_joint, f)


def _check_epsilon(epsilon):
    epsilon = float(epsilon)
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon has to be in [0, 1), got %s" % epsilon)
    return epsilon


def _beats(top, rival):
    """True where ``top`` exceeds ``rival`` by more than the tie tolerance"""
    return rival < top - TIE_TOLERANCE * top


def _top_two(values):
    """Return prediction, its joint, the best rival joint and whether the row is degenerate"""
    n = values.shape[0]
    pred = nbc.batch_predict(values)
    rows = np.arange(n)
    target = values[rows, pred]
    rivals = values.copy()
    rivals[rows, pred] = -np.inf
    runner = rivals.max(axis=1)
    top = values.max(axis=1)
    ties = (~_beats(top[:, None], values)).sum(axis=1)
    degenerate = (ties > 1) | ~(target > 0)
    return pred, target, runner, degenerate


def batch_prediction_gap(values):
    """Vectorized :func:`prediction_gap` on a ``(n, |C|)`` matrix of joints"""
    values = np.asarray(values, dtype=float)
    pred, target, runner, degenerate = _top_two(values)
    return np.where(degenerate, 0.0, target - runner)


def prediction_gap(model_or_joint, f):
    """Return ``p(c_hat, f) - max_{c != c_hat} p(c, f)``, or 0 if the argmax is tied or all zero

    :param model_or_joint: a model or a dense joint
    :type model_or_joint: :class:`robquant.nbc.NbcModel` | :class:`robquant.categorical.JointMassFunction`
    :param f: the feature vector
    :type f: sequence of int
    :rtype: float
    :raises: :class:`robquant.errors.DomainError`
    """
    return float(batch_prediction_gap(_class_slice(model_or_joint, f)[None, :])[0])


def batch_global_robustness(values):
    """Vectorized global robustness on a ``(n, |C|)`` matrix of joints"""
    d = batch_prediction_gap(values)
    return d / (1.0 + d)


def global_robustness(model_or_joint, f):
    """Return the global robustness ``d / (1 + d)`` with ``d`` from :func:`prediction_gap`

    :param model_or_joint: a model or a dense joint
    :type model_or_joint: :class:`robquant.nbc.NbcModel` | :class:`robquant.categorical.JointMassFunction`
    :param f: the feature vector
    :type f: sequence of int
    :returns: the metric, 0 for tied or all zero joints
    :rtype: :class:`RobustnessValue`
    :raises: :class:`robquant.errors.DomainError`
    """
    eps = batch_global_robustness(_class_slice(model_or_joint, f)[None, :])[0]
    return RobustnessValue(eps, GLOBAL)


def _batch_phi(model, features, epsilon):
    """``(p(c) + t) * prod_i (p(f_i | c) + t)`` with ``t = eps / (1 - eps)``, shape ``(n, |C|)``"""
    features = np.asarray(features, dtype=np.int64)
    t = (epsilon / (1.0 - epsilon))[:, None]
    out = model.prior[None, :] + t
    for i, table in enumerate(model.tables):
        out = out * (table[:, features[:, i]].T + t)
    return out


def local_phi(model, f, c, epsilon):
    """Return ``(p(c) + t) * prod_i (p(f_i | c) + t)`` with ``t = epsilon / (1 - epsilon)``

    :param model: the model
    :type model: :class:`robquant.nbc.NbcModel`
    :param f: the feature vector
    :type f: sequence of int
    :param c: the class
    :type c: int
    :param epsilon: the contamination in ``[0, 1)``
    :type epsilon: float
    :rtype: float
    :raises: :class:`ValueError` if ``epsilon`` is not in ``[0, 1)``
    """
    epsilon = _check_epsilon(epsilon)
    f = model.domain.check_features(f)
    c = model.domain.check_class(c)
    return float(_batch_phi(model, [f], np.array([epsilon]))[0, c])


def local_phi_max(model, f, epsilon, predicted=None):
    """Return the maximum of :func:`local_phi` over all classes except ``predicted``

    :param predicted: the excluded class, by default the prediction of the model
    :type predicted: int | None
    :raises: :class:`ValueError` if ``epsilon`` is not in ``[0, 1)``
    """
    epsilon = _check_epsilon(epsilon)
    f = model.domain.check_features(f)
    if predicted is None:
        predicted = nbc.predict(model, f)[0]
    phi = _batch_phi(model, [f], np.array([epsilon]))[0]
    return float(np.delete(phi, predicted).max())


def batch_local_robustness(model, features, tol=BISECTION_TOL):
    """Vectorized local robustness

    All instances are bisected together, so every bracket has the same width after each step.

    :param model: the model
    :type model: :class:`robquant.nbc.NbcModel`
    :param features: shape ``(n, N)``
    :type features: array like
    :param tol: the final bracket width
    :type tol: float
    :returns: the metric values and the final brackets ``lo`` and ``hi``
    :rtype: tuple of :class:`numpy.ndarray`
    :raises: :class:`ValueError` for a non positive ``tol``, :class:`robquant.errors.ConvergenceError`
    """
    tol = float(tol)
    if not tol > 0:
        raise ValueError("Bisection tolerance has to be positive, got %s" % tol)
    features = np.asarray(features, dtype=np.int64).reshape(-1, model.domain.num_features)
    values = nbc.batch_class_joints(model, features)
    n = values.shape[0]
    if not np.all(np.isfinite(values)):
        raise errors.ConvergenceError("non finite joints, cannot bisect")
    pred, target, runner, degenerate = _top_two(values)
    rivals = np.ones(values.shape, dtype=bool)
    rivals[np.arange(n), pred] = False
    active = ~degenerate

    def phi_max(eps):
        return np.where(rivals, _batch_phi(model, features, eps), -np.inf).max(axis=1)

    lo = np.zeros(n)
    hi = np.full(n, 0.5)
    if np.any(active & ~(phi_max(hi) >= target)):
        raise errors.ConvergenceError("phi(1/2) is below the predicted joint")
    it = 0
    while n and hi[0] - lo[0] >= tol:
        it += 1
        if it > BISECTION_MAX_ITER:
            raise errors.ConvergenceError("bisection did not reach a width of %s within %s iterations"
                                          % (tol, BISECTION_MAX_ITER))
        mid = (lo + hi) / 2.0
        below = phi_max(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    log.debug("Bisection of %s instances took %s iterations", n, it)
    eps = np.where(active, hi, 0.0)
    return eps, np.where(active, lo, 0.0), eps


def local_robustness(model, f, tol=BISECTION_TOL):
    """Return the local robustness of the prediction at ``f``

    The result is the upper end of the final bisection bracket, so the prediction is not robust at it.

    :param model: the model
    :type model: :class:`robquant.nbc.NbcModel`
    :param f: the feature vector
    :type f: sequence of int
    :param tol: the final bracket width
    :type tol: float
    :returns: the metric, 0 for tied or all zero joints
    :rtype: :class:`RobustnessValue`
    :raises: :class:`ValueError`, :class:`robquant.errors.ConvergenceError`
    """
    f = model.domain.check_features(f)
    eps, lo, hi = batch_local_robustness(model, [f], tol)
    return RobustnessValue(eps[0], LOCAL, converged=True, bracket=(float(lo[0]), float(hi[0])))


class PerturbationVertexSet(object, metaclass=abc.ABCMeta):
    """The extreme points of a contamination

    Vertices are built lazily. Iterating yields :class:`robquant.categorical.JointMassFunction`.
    :meth:`PerturbationVertexSet.class_slices` gives the joints of all vertices at one feature vector
    without building the full tables.
    """

    kind = None

    def __init__(self, domain, epsilon, size):
        super(PerturbationVertexSet, self).__init__()
        self.domain = domain
        self.epsilon = _check_epsilon(epsilon)
        self._size = size

    def __len__(self):
        return self._size

    @property
    def vertices(self):
        """List of all vertices"""
        return list(self)

    @abc.abstractmethod
    def __iter__(self):
        pass

    @abc.abstractmethod
    def class_slices(self, f):
        """Return ``p'(., f)`` of every vertex as array with shape ``(len(self), |C|)``"""
        pass

    def __repr__(self):
        return "%s(epsilon=%r, %s vertices)" % (self.__class__.__name__, self.epsilon, len(self))


class GlobalVertexSet(PerturbationVertexSet):
    """The vertices ``(1 - epsilon) * p + epsilon * delta`` for every cell of the joint, in enumeration order"""

    kind = GLOBAL

    def __init__(self, base, epsilon):
        super(GlobalVertexSet, self).__init__(base.domain, epsilon, base.domain.size)
        self.base = base

    def __iter__(self):
        scaled = (1.0 - self.epsilon) * self.base.probs
        for v in range(len(self)):
            delta = np.zeros(len(self))
            delta[v] = 1.0
            yield JointMassFunction(self.domain, scaled + self.epsilon * delta)

    def class_slices(self, f):
        s = (1.0 - self.epsilon) * self.base.class_slice(f)
        out = np.tile(s, (len(self), 1))
        fidx = np.ravel_multi_index(tuple(f), self.domain.feature_cards)
        nf = self.domain.num_feature_vectors
        for c in range(self.domain.num_classes):
            out[c * nf + fidx, c] += self.epsilon
        return out


class LocalVertexSet(PerturbationVertexSet):
    """Joints of the Naive Bayes models whose local mass functions are all contamination vertices

    Vertex ``v`` is decoded as mixed radix number with digits ``(a, b[0][0], ..., b[0][N-1], b[1][0], ...)``:
    ``a`` picks the point mass of the class marginal, ``b[c][i]`` that of ``p(F_i | c)``.
    For ``epsilon = 0`` all vertices coincide and the set holds only the model joint.
    """

    kind = LOCAL

    def __init__(self, model, epsilon):
        domain = model.domain
        epsilon = _check_epsilon(epsilon)
        if epsilon == 0:
            self._dims = ()
            size = 1
        else:
            self._dims = (domain.num_classes,) + domain.feature_cards * domain.num_classes
            size = 1
            for d in self._dims:
                size *= d
        super(LocalVertexSet, self).__init__(domain, epsilon, size)
        self.model = model
        self._digits = None

    def _decode(self):
        if self._digits is None:
            self._digits = np.unravel_index(np.arange(len(self)), self._dims)
        return self._digits

    def _local(self, probs, point):
        e = self.epsilon
        delta = np.zeros(probs.shape)
        delta[point] = 1.0
        return (1.0 - e) * probs + e * delta

    def __iter__(self):
        model = self.model
        if not self._dims:
            yield nbc.to_joint(model)
            return
        nc, nfeat = self.domain.num_classes, self.domain.num_features
        for digits in zip(*self._decode()):
            prior = self._local(model.prior, digits[0])
            tables = []
            for i, table in enumerate(model.tables):
                rows = [self._local(table[c], digits[1 + c * nfeat + i]) for c in range(nc)]
                tables.append(np.array(rows))
            yield JointMassFunction(self.domain, product_table(self.domain, prior, tables))

    def class_slices(self, f):
        model = self.model
        f = self.domain.check_features(f)
        if not self._dims:
            return nbc.class_joints(model, f)[None, :]
        e = self.epsilon
        digits = self._decode()
        nfeat = self.domain.num_features
        out = np.empty((len(self), self.domain.num_classes))
        for c in range(self.domain.num_classes):
            m = (1.0 - e) * model.prior[c] + e * (digits[0] == c)
            for i, table in enumerate(model.tables):
                b = digits[1 + c * nfeat + i]
                m = m * ((1.0 - e) * table[c, f[i]] + e * (b == f[i]))
            out[:, c] = m
        return out


def contamination_vertices_global(p, epsilon):
    """Return the extreme points of the global contamination of a joint

    :param p: the joint
    :type p: :class:`robquant.categorical.JointMassFunction`
    :param epsilon: the contamination in ``[0, 1)``
    :type epsilon: float
    :returns: ``|C| * |F|`` vertices
    :rtype: :class:`GlobalVertexSet`
    :raises: :class:`ValueError`, :class:`robquant.errors.VertexLimitError`
    """
    if p.domain.size > MAX_GLOBAL_VERTICES:
        raise errors.VertexLimitError("%s global vertices exceed the limit of %s"
                                      % (p.domain.size, MAX_GLOBAL_VERTICES))
    return GlobalVertexSet(p, epsilon)


def contamination_vertices_local(model, epsilon):
    """Return the extreme points of the local contamination of a Naive Bayes model

    :param model: the model
    :type model: :class:`robquant.nbc.NbcModel`
    :param epsilon: the contamination in ``[0, 1)``
    :type epsilon: float
    :returns: ``|C| * prod_c prod_i |F_i|`` vertices, a single one for ``epsilon = 0``
    :rtype: :class:`LocalVertexSet`
    :raises: :class:`ValueError`, :class:`robquant.errors.VertexLimitError`
    """
    vs = LocalVertexSet(model, epsilon)
    if len(vs) > MAX_LOCAL_VERTICES:
        raise errors.VertexLimitError("%s local vertices exceed the limit of %s" % (len(vs), MAX_LOCAL_VERTICES))
    return vs


def is_robust_finite(candidates, f, predicted):
    """Check robustness of a prediction over finitely many joints

    True iff every candidate gives ``predicted`` a positive joint at ``f`` and every other class a smaller one.
    Joints within :data:`robquant.constants.TIE_TOLERANCE` of each other count as tied, as in the metrics.

    :param candidates: the joints
    :type candidates: list of :class:`robquant.categorical.JointMassFunction` | :class:`PerturbationVertexSet`
    :param f: the feature vector
    :type f: sequence of int
    :param predicted: the predicted class
    :type predicted: int
    :rtype: bool
    :raises: :class:`ValueError` if there are no candidates
    """
    if isinstance(candidates, PerturbationVertexSet):
        slices = candidates.class_slices(f)
    else:
        candidates = list(candidates)
        if not candidates:
            raise ValueError("Need at least one candidate")
        slices = np.array([c.class_slice(f) for c in candidates])
    predicted = int(predicted)
    top = slices[:, predicted]
    if not top.min() > 0:
        return False
    rivals = np.delete(slices, predicted, axis=1)
    return bool(np.all(_beats(top, rivals.max(axis=1))))


def credal_prediction(model_or_joint, f, epsilon, kind=GLOBAL):
    """Return every class that is an argmax for some member of the contamination

    A class belongs to the set iff its best case joint at ``f`` is at least the worst case joint of every
    rival, up to the tie tolerance of the metrics.
    The set is a single class iff the prediction is robust at ``epsilon``.

    :param model_or_joint: the model, a joint is only allowed for the global kind
    :type model_or_joint: :class:`robquant.nbc.NbcModel` | :class:`robquant.categorical.JointMassFunction`
    :param f: the feature vector
    :type f: sequence of int
    :param epsilon: the contamination in ``[0, 1)``
    :type epsilon: float
    :param kind: :data:`GLOBAL` or :data:`LOCAL`
    :type kind: str
    :returns: the classes
    :rtype: frozenset
    :raises: :class:`ValueError`, :class:`TypeError` for a local credal set of a joint
    """
    e = _check_epsilon(epsilon)
    if kind == GLOBAL:
        s = _class_slice(model_or_joint, f)
        best = (1.0 - e) * s + e
        worst = (1.0 - e) * s
    elif kind == LOCAL:
        if isinstance(model_or_joint, JointMassFunction):
            raise TypeError("Local credal sets need a Naive Bayes model")
        model = model_or_joint
        f = model.domain.check_features(f)
        best = (1.0 - e) * model.prior + e
        worst = (1.0 - e) * model.prior
        for i, table in enumerate(model.tables):
            best = best * ((1.0 - e) * table[:, f[i]] + e)
            worst = worst * ((1.0 - e) * table[:, f[i]])
    else:
        raise ValueError("Unknown kind %r" % kind)
    classes = []
    for c in range(len(best)):
        if not _beats(np.delete(worst, c).max(), best[c]):
            classes.append(c)
    return frozenset(classes)
