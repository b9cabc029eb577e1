import numpy as np
import pytest

from robquant.action import ActionStatus
from robquant.categorical import DomainSpec, Dataset, JointMassFunction, derive_seed, make_rng, sample
from robquant import iniconf, log, nbc, synthetic


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the slow reproduction tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full grid runs, only with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope='session', autouse=True)
def setup_package():
    """Keep the console quiet while the grid tests run"""
    log.set_level('WARNING')


@pytest.fixture(scope='session')
def successf():
    def f(obj):
        return ActionStatus(ActionStatus.SUCCESS, "Success")
    return f


@pytest.fixture(scope='session')
def failf():
    def f(obj):
        return ActionStatus(ActionStatus.FAILURE, "Failure")
    return f


@pytest.fixture(scope='session')
def errorf():
    def f(obj):
        raise Exception("Crash")
    return f


@pytest.fixture(scope='session')
def binarydomain():
    """Two classes and one binary feature"""
    return DomainSpec(2, [2])


@pytest.fixture(scope='session')
def smalldomain():
    return DomainSpec(3, [2, 3])


@pytest.fixture(scope='session')
def gapmodel(binarydomain):
    """Model with p(c0)=0.6, p(f=0|c0)=0.8, p(c1)=0.4, p(f=0|c1)=0.5

    At f=(0,) the joints are 0.48 and 0.2. The global robustness is 0.28 / 1.28,
    the local one solves ``(0.4 + t)(0.5 + t) = 0.48``.
    """
    return nbc.NbcModel(binarydomain, [0.6, 0.4], [[[0.8, 0.2]], [[0.5, 0.5]]], alpha=0.0)


@pytest.fixture(scope='session')
def gaplocal():
    t = (-0.9 + np.sqrt(1.93)) / 2.0
    return t / (1.0 + t)


@pytest.fixture(scope='session')
def tinydataset(smalldomain):
    """Hand written dataset where every class occurs"""
    classes = [0, 0, 0, 1, 1, 2, 2, 2, 2, 0]
    features = [[0, 0], [0, 1], [1, 0], [1, 1], [1, 2], [0, 2], [0, 2], [1, 2], [0, 1], [0, 0]]
    return Dataset.from_arrays(smalldomain, classes, features)


@pytest.fixture(scope='session')
def testdist():
    return synthetic.make_test(synthetic.GeneratorConfig(seed=7))


@pytest.fixture(scope='session')
def sampleddata(testdist):
    return sample(testdist, 200, 11)


@pytest.fixture(scope='function')
def smallconfig():
    """A run config for quick grid runs"""
    return iniconf.RunConfig.from_file(None, {'master_seed': 2024, 'n_test': 60, 'm_ensemble': 3, 'folds': 3,
                                              'alpha_grid': [0.5, 1.0], 'n_train': [20, 40], 'gamma': [0.0, 0.3],
                                              'shifts': 2, 'train_sets': 2})


@pytest.fixture(scope='session')
def randommodel():
    """Return a factory for models with positive random parameters"""
    def make(domain, seed):
        rng = np.random.default_rng(seed)
        prior = rng.uniform(0.05, 1, domain.num_classes)
        tables = [rng.uniform(0.05, 1, (domain.num_classes, card)) for card in domain.feature_cards]
        return nbc.NbcModel.from_arrays(domain, prior / prior.sum(), [t / t.sum(axis=1, keepdims=True) for t in tables],
                                        alpha=1.0)
    return make


@pytest.fixture(scope='session')
def fittedmodel():
    """Return a factory for models learned from data of a random seeded domain

    ``max_classes``, ``max_features`` and ``max_card`` bound the domain, every cardinality is at least 2.
    """
    def make(seed, max_classes=4, max_features=3, max_card=4):
        rng = make_rng(seed)
        nc = int(rng.integers(2, max_classes + 1))
        cards = [int(c) for c in rng.integers(2, max_card + 1, int(rng.integers(1, max_features + 1)))]
        domain = DomainSpec(nc, cards)
        w = rng.uniform(0.05, 1, domain.size)
        data = sample(JointMassFunction(domain, w / w.sum()), int(rng.integers(10, 100)), derive_seed(seed, 1))
        return nbc.fit(data, float(rng.choice([0.1, 0.5, 1.0, 2.0])))
    return make
