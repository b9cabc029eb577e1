"""Synthetic test and training distributions

The test distribution is a mixture of a fixed Naive Bayes distribution and a random one::

  P_test = (1 - beta) * P_fix + beta * P_rand

so it does not satisfy the Naive Bayes assumption. Training distributions are shifted away from it::

  P_train = (1 - gamma) * P_test + gamma * P_shift

with a fresh random ``P_shift``.
"""
import numpy as np

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant.categorical import (DomainSpec, JointMassFunction, MassFunction, make_rng, mix, product_table,
                                  sample, total_variation, naive_bayes_residual)


DEFAULT_DOMAIN = DomainSpec(3, (2, 3, 3, 4))


class GeneratorConfig(object):
    """Parameters of the test distribution"""

    def __init__(self, domain=DEFAULT_DOMAIN, beta=0.3, class_probs=(0.4, 0.35, 0.25), peak=0.85, seed=0):
        """
        :param domain: the domain
        :type domain: :class:`robquant.categorical.DomainSpec`
        :param beta: weight of the random distribution in ``[0, 1]``
        :type beta: float
        :param class_probs: class marginal of the fixed distribution
        :type class_probs: sequence of float
        :param peak: probability of the peaked value of every feature, larger than ``1/|F_i|``
        :type peak: float
        :param seed: the seed of the random distribution
        :type seed: int
        :raises: :class:`ValueError`, :class:`robquant.errors.DegenerateDistributionError`
        """
        super(GeneratorConfig, self).__init__()
        self.domain = domain
        self.beta = float(beta)
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta has to be in [0, 1], got %s" % beta)
        self.class_probs = MassFunction(class_probs)
        if self.class_probs.domain_size != domain.num_classes:
            raise ValueError("class_probs needs %s entries, got %s" % (domain.num_classes, len(self.class_probs)))
        self.peak = float(peak)
        if not self.peak <= 1.0 or any(self.peak <= 1.0 / card for card in domain.feature_cards):
            raise ValueError("peak has to be in (1/|F_i|, 1] for every feature, got %s" % peak)
        self.seed = int(seed)

    def __repr__(self):
        return "GeneratorConfig(beta=%s, peak=%s, seed=%s)" % (self.beta, self.peak, self.seed)


def make_fixed(config):
    """Return the fixed Naive Bayes distribution

    Given class ``c`` the value ``c mod |F_i|`` of feature ``i`` gets ``peak``, the remaining values share the rest.

    :param config: the generator config
    :type config: :class:`GeneratorConfig`
    :returns: the joint
    :rtype: :class:`robquant.categorical.JointMassFunction`
    :raises: None
    """
    domain = config.domain
    tables = []
    for card in domain.feature_cards:
        table = np.full((domain.num_classes, card), (1.0 - config.peak) / (card - 1))
        for c in range(domain.num_classes):
            table[c, c % card] = config.peak
        tables.append(table)
    return JointMassFunction(domain, product_table(domain, config.class_probs.probs, tables))


def make_random(domain, seed):
    """Return a joint with i.i.d. uniform(0, 1) weights, normalized

    :raises: :class:`robquant.errors.DegenerateDistributionError` in the unlikely case every draw is zero
    """
    weights = make_rng(seed).random(domain.size)
    total = weights.sum()
    if not total > 0:
        raise errors.DegenerateDistributionError("degenerate weight vector")
    return JointMassFunction(domain, weights / total)


def make_test(config):
    """Return ``(1 - beta) * P_fix + beta * P_rand`` with ``P_rand`` drawn from ``config.seed``"""
    test = mix(make_fixed(config), make_random(config.domain, config.seed), config.beta)
    log.debug("Test distribution deviates from a Naive Bayes factorization by %s", naive_bayes_residual(test))
    return test


def make_train(test, gamma, seed):
    """Return a shifted training distribution and its total variation distance to ``test``

    :param test: the test distribution
    :type test: :class:`robquant.categorical.JointMassFunction`
    :param gamma: the weight of the random shift in ``[0, 1]``
    :type gamma: float
    :param seed: the seed of the random shift
    :type seed: int
    :returns: the training distribution and the shift
    :rtype: (:class:`robquant.categorical.JointMassFunction`, float)
    :raises: :class:`ValueError`
    """
    train = mix(test, make_random(test.domain, seed), gamma)
    tv = total_variation(train, test)
    log.debug("Shift with gamma %s has total variation %s", gamma, tv)
    return train, tv


def sample_dataset(joint, n, seed):
    """Draw a dataset of ``n`` instances from the joint, see :func:`robquant.categorical.sample`"""
    return sample(joint, n, seed)
