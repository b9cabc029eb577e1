"""Uncertainty metrics of a prediction

Two metrics look at a single model:

  :func:`max_prob_uncertainty` one minus the posterior of the predicted class
  :func:`entropy_uncertainty` entropy of the posterior

Three more need an :class:`Ensemble` of models learned on bootstrap samples:

  :func:`aleatoric` mean entropy of the member posteriors
  :func:`total` entropy of the mean posterior
  :func:`epistemic` the difference of the two

All entropies use log base 2 with ``0 * log2(0) = 0``.
The literal epistemic value ``aleatoric - total`` is never positive.
Rankings use the standard sign ``total - aleatoric``; see :class:`EpistemicUncertainty`.
"""
from collections import namedtuple

import numpy as np

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant import nbc
from robquant.categorical import derive_seed, make_rng
from robquant.constants import ENSEMBLE_SIZE


EpistemicUncertainty = namedtuple('EpistemicUncertainty', ['literal', 'standard'])
"""Epistemic uncertainty with both signs.

``literal`` is ``aleatoric - total``, ``standard`` is ``total - aleatoric``.
"""


def entropy(probs, axis=-1):
    """Return the base 2 entropy along an axis

    :param probs: probabilities
    :type probs: array like
    :param axis: the axis that holds the distribution
    :type axis: int
    :returns: the entropies, a float for a single vector
    :rtype: float | :class:`numpy.ndarray`
    :raises: None
    """
    p = np.asarray(probs, dtype=float)
    positive = p > 0
    terms = np.where(positive, p * np.log2(np.where(positive, p, 1.0)), 0.0)
    h = np.maximum(-terms.sum(axis=axis), 0.0)
    if np.ndim(h) == 0:
        return float(h)
    return h


def batch_posteriors(model, features):
    """Return ``p(. | f)`` for every row of ``features``

    Rows whose feature marginal is zero are NaN.

    :returns: shape ``(n, |C|)``
    :rtype: :class:`numpy.ndarray`
    """
    values = nbc.batch_class_joints(model, features)
    totals = values.sum(axis=1, keepdims=True)
    with np.errstate(invalid='ignore', divide='ignore'):
        return np.where(totals > 0, values / totals, np.nan)


def _single(batch, f, model_or_ensemble):
    f = model_or_ensemble.domain.check_features(f)
    value = batch(model_or_ensemble, [f])[0]
    if np.isnan(value):
        raise errors.ZeroMarginalError("zero feature marginal at %s" % (f,))
    return float(value)


def batch_max_prob(model, features):
    """Vectorized :func:`max_prob_uncertainty`, NaN where undefined"""
    return 1.0 - batch_posteriors(model, features).max(axis=1)


def batch_entropy(model, features):
    """Vectorized :func:`entropy_uncertainty`, NaN where undefined"""
    post = batch_posteriors(model, features)
    h = entropy(np.nan_to_num(post), axis=1)
    return np.where(np.isnan(post[:, 0]), np.nan, h)


def max_prob_uncertainty(model, f):
    """Return ``1 - max_c p(c | f)``

    :param model: the model
    :type model: :class:`robquant.nbc.NbcModel`
    :param f: the feature vector
    :type f: sequence of int
    :returns: a value in ``[0, 1 - 1/|C|]``
    :rtype: float
    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    return _single(batch_max_prob, f, model)


def entropy_uncertainty(model, f):
    """Return the entropy of ``p(. | f)``

    :returns: a value in ``[0, log2 |C|]``
    :rtype: float
    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    return _single(batch_entropy, f, model)


class Ensemble(object):
    """Models learned with the same alpha on bootstrap samples of one dataset"""

    def __init__(self, members, source_seed):
        """
        :param members: at least two models over one domain with one alpha
        :type members: list of :class:`robquant.nbc.NbcModel`
        :param source_seed: the seed the bootstrap samples were drawn with
        :type source_seed: int
        :raises: :class:`ValueError`, :class:`robquant.errors.ShapeMismatchError`
        """
        super(Ensemble, self).__init__()
        members = list(members)
        if len(members) < 2:
            raise ValueError("An ensemble needs at least 2 members, got %s" % len(members))
        domain = members[0].domain
        alpha = members[0].alpha
        for m in members[1:]:
            if m.domain != domain:
                raise errors.ShapeMismatchError("Ensemble members have different domains")
            if m.alpha != alpha:
                raise ValueError("Ensemble members have different alpha")
        self.members = members
        self.source_seed = source_seed

    @property
    def m(self):
        """The number of members"""
        return len(self.members)

    @property
    def domain(self):
        return self.members[0].domain

    @property
    def alpha(self):
        return self.members[0].alpha

    def __repr__(self):
        return "Ensemble(m=%s, alpha=%s, source_seed=%s)" % (self.m, self.alpha, self.source_seed)


def fit_ensemble(dataset, alpha, m=ENSEMBLE_SIZE, seed=0):
    """Learn ``m`` models on bootstrap samples of the dataset

    Member ``i`` resamples with ``derive_seed(seed, i)``, drawing ``len(dataset)`` instances with replacement.

    :param dataset: the training data, not empty
    :type dataset: :class:`robquant.categorical.Dataset`
    :param alpha: the smoothing of every member, positive
    :type alpha: float
    :param m: the number of members, at least 2, by default :data:`robquant.constants.ENSEMBLE_SIZE`
    :type m: int
    :param seed: the bootstrap seed
    :type seed: int
    :returns: the ensemble
    :rtype: :class:`Ensemble`
    :raises: :class:`ValueError`, :class:`robquant.errors.DomainError`
    """
    if not float(alpha) > 0:
        raise ValueError("Ensembles need a positive alpha, got %s" % alpha)
    if int(m) < 2:
        raise ValueError("An ensemble needs at least 2 members, got %s" % m)
    n = len(dataset)
    if not n:
        raise errors.DomainError("Cannot bootstrap an empty dataset")
    members = []
    for i in range(int(m)):
        idx = make_rng(derive_seed(seed, i)).integers(0, n, size=n)
        members.append(nbc.fit(dataset.subset(idx), alpha))
    return Ensemble(members, seed)


def ensemble_posteriors(ensemble, features):
    """Return the member posteriors with shape ``(M, n, |C|)``"""
    return np.stack([batch_posteriors(member, features) for member in ensemble.members])


def batch_ensemble_uncertainties(ensemble, features):
    """Return aleatoric, total and literal epistemic uncertainty for every row of ``features``

    :returns: three arrays of shape ``(n,)``, NaN where some member posterior is undefined
    :rtype: tuple of :class:`numpy.ndarray`
    """
    post = ensemble_posteriors(ensemble, features)
    undefined = np.isnan(post).any(axis=(0, 2))
    post = np.nan_to_num(post)
    u_a = entropy(post, axis=2).mean(axis=0)
    u_t = entropy(post.mean(axis=0), axis=1)
    u_a = np.where(undefined, np.nan, u_a)
    u_t = np.where(undefined, np.nan, u_t)
    return u_a, u_t, u_a - u_t


def _ensemble_single(ensemble, f):
    f = ensemble.domain.check_features(f)
    values = [float(v[0]) for v in batch_ensemble_uncertainties(ensemble, [f])]
    if np.isnan(values[0]):
        raise errors.ZeroMarginalError("zero feature marginal at %s" % (f,))
    return values


def aleatoric(ensemble, f):
    """Return the mean entropy of the member posteriors at ``f``

    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    return _ensemble_single(ensemble, f)[0]


def total(ensemble, f):
    """Return the entropy of the mean member posterior at ``f``

    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    return _ensemble_single(ensemble, f)[1]


def epistemic(ensemble, f):
    """Return the epistemic uncertainty with both signs

    :returns: ``literal = aleatoric - total`` and ``standard = total - aleatoric``
    :rtype: :class:`EpistemicUncertainty`
    :raises: :class:`robquant.errors.ZeroMarginalError`
    """
    literal = _ensemble_single(ensemble, f)[2]
    return EpistemicUncertainty(literal, 0.0 - literal)
