import numpy as np
import pytest

from robquant import categorical as cat
from robquant import errors


@pytest.mark.parametrize("num_classes,cards", [(1, [2]),
                                               (2, []),
                                               (3, [2, 1]),
                                               (10, [10] * 7)])
def test_domain_invalid(num_classes, cards):
    with pytest.raises(errors.DomainError):
        cat.DomainSpec(num_classes, cards)


def test_domain_properties():
    d = cat.DomainSpec(3, [2, 3, 3, 4])
    assert d.shape == (3, 2, 3, 3, 4)
    assert d.num_features == 4
    assert d.num_feature_vectors == 72
    assert d.size == 216
    assert d == cat.DomainSpec(3, (2, 3, 3, 4))
    assert d != cat.DomainSpec(3, (2, 3, 4, 3))
    assert hash(d) == hash(cat.DomainSpec(3, (2, 3, 3, 4)))


def test_domain_checks(smalldomain):
    assert smalldomain.check_features([1, 2]) == (1, 2)
    assert smalldomain.check_class(2) == 2
    with pytest.raises(errors.DomainError):
        smalldomain.check_features([1, 3])
    with pytest.raises(errors.DomainError):
        smalldomain.check_features([1])
    with pytest.raises(errors.DomainError):
        smalldomain.check_class(3)


def test_feature_vectors_order(smalldomain):
    fv = cat.feature_vectors(smalldomain)
    assert fv.tolist() == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2]]


@pytest.mark.parametrize("probs", [[], [0.5, 0.6], [1.5, -0.5], [np.nan, 1.0], [[0.5], [0.5]]])
def test_mass_function_invalid(probs):
    with pytest.raises(errors.DegenerateDistributionError):
        cat.MassFunction(probs)


def test_mass_function_is_read_only():
    m = cat.MassFunction([0.25, 0.75])
    assert m[1] == 0.75
    assert len(m) == 2
    with pytest.raises(ValueError):
        m.probs[0] = 1.0


def test_joint_shapes(smalldomain):
    flat = np.arange(1, smalldomain.size + 1, dtype=float)
    flat /= flat.sum()
    j = cat.JointMassFunction(smalldomain, flat)
    assert j.table.shape == smalldomain.shape
    # class slowest, features after it
    assert j.value(0, [0, 1]) == flat[1]
    assert j.value(1, [0, 0]) == flat[6]
    assert j.class_slice([1, 2]).tolist() == [flat[5], flat[11], flat[17]]
    with pytest.raises(errors.ShapeMismatchError):
        cat.JointMassFunction(smalldomain, flat[:-1])


def test_normalize():
    assert cat.normalize([1, 3]).tolist() == [0.25, 0.75]
    for w in ([0, 0], [], [1, -1], [np.inf, 1]):
        with pytest.raises(errors.DegenerateDistributionError):
            cat.normalize(w)


def test_mix_and_total_variation():
    p = cat.MassFunction([1.0, 0.0])
    q = cat.MassFunction([0.0, 1.0])
    m = cat.mix(p, q, 0.25)
    assert np.allclose(m.probs, [0.75, 0.25])
    assert cat.total_variation(p, q) == 1.0
    assert cat.total_variation(p, m) == pytest.approx(0.25)
    assert cat.mix(p, q, 0) == p
    with pytest.raises(ValueError):
        cat.mix(p, q, 1.5)
    with pytest.raises(errors.ShapeMismatchError):
        cat.mix(p, cat.MassFunction([0.2, 0.3, 0.5]), 0.5)


@pytest.mark.parametrize("seed", range(50))
def test_mix_is_convex(seed):
    rng = cat.make_rng(seed)
    size = int(rng.integers(2, 9))
    p = cat.MassFunction(rng.dirichlet(np.ones(size)))
    q = cat.MassFunction(rng.dirichlet(np.ones(size)))
    tv = cat.total_variation(p, q)
    for w in rng.uniform(0, 1, 20):
        m = cat.mix(p, q, w)
        assert m.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(m.probs >= np.minimum(p.probs, q.probs) - 1e-15)
        assert np.all(m.probs <= np.maximum(p.probs, q.probs) + 1e-15)
        assert cat.total_variation(p, m) == pytest.approx(w * tv, abs=1e-12)
        assert cat.total_variation(m, q) == pytest.approx((1 - w) * tv, abs=1e-12)


def test_mix_joints_needs_same_domain(testdist, binarydomain):
    other = cat.JointMassFunction(binarydomain, [0.25] * 4)
    with pytest.raises(errors.ShapeMismatchError):
        cat.mix(testdist, other, 0.5)
    with pytest.raises(errors.ShapeMismatchError):
        cat.total_variation(testdist, cat.MassFunction([0.5, 0.5]))


def test_condition_on_features(binarydomain):
    j = cat.JointMassFunction(binarydomain, [0.3, 0.2, 0.1, 0.4])
    post = cat.condition_on_features(j, [0])
    assert np.allclose(post.probs, [0.75, 0.25])
    assert np.allclose(cat.marginal_class(j).probs, [0.5, 0.5])
    z = cat.JointMassFunction(binarydomain, [0.5, 0.0, 0.5, 0.0])
    with pytest.raises(errors.ZeroMarginalError):
        cat.condition_on_features(z, [1])


@pytest.mark.parametrize("values,pred,ties", [([0.1, 0.3, 0.2], 1, {1}),
                                              ([0.3, 0.1, 0.3], 0, {0, 2}),
                                              ([0.3, 0.3 * (1 - 1e-13), 0.0], 0, {0, 1}),
                                              ([0.0, 0.0], 0, {0, 1})])
def test_argmax_classes(values, pred, ties):
    assert cat.argmax_classes(values) == (pred, frozenset(ties))


def test_naive_bayes_residual(testdist, smalldomain):
    prior = [0.5, 0.3, 0.2]
    conds = [np.array([[0.9, 0.1], [0.5, 0.5], [0.2, 0.8]]),
             np.array([[0.2, 0.3, 0.5], [0.6, 0.2, 0.2], [1 / 3.0] * 3])]
    nb = cat.JointMassFunction(smalldomain, cat.product_table(smalldomain, prior, conds))
    assert cat.naive_bayes_residual(nb) < 1e-14
    assert cat.naive_bayes_residual(testdist) > 1e-4


def test_derive_seed():
    assert cat.derive_seed(1, 2, 3) == cat.derive_seed(1, 2, 3)
    assert cat.derive_seed(1, 2, 3) != cat.derive_seed(1, 3, 2)
    assert cat.derive_seed(1, 2) != cat.derive_seed(2, 2)
    assert 0 <= cat.derive_seed(5) < 2 ** 64
    with pytest.raises(ValueError):
        cat.derive_seed(1, -1)
    with pytest.raises(ValueError):
        cat.make_rng(-1)
    with pytest.raises(ValueError):
        cat.make_rng(2 ** 64)


def test_sample_mass_function():
    m = cat.MassFunction([0.0, 0.5, 0.0, 0.5, 0.0])
    draws = cat.sample(m, 500, 3)
    assert draws == cat.sample(m, 500, 3)
    assert set(draws) == {1, 3}
    assert cat.sample(m, 0, 3) == []
    with pytest.raises(ValueError):
        cat.sample(m, -1, 3)


def test_sample_joint_frequencies(testdist):
    ds = cat.sample(testdist, 20000, 99)
    assert len(ds) == 20000
    flat = np.ravel_multi_index((ds.classes,) + tuple(ds.features.T), testdist.domain.shape)
    freq = np.bincount(flat, minlength=testdist.domain.size) / 20000.0
    assert np.abs(freq - testdist.probs).max() < 0.02
    empty = cat.sample(testdist, 0, 1)
    assert len(empty) == 0
    assert empty.features.shape == (0, 4)


def test_sample_prefix_stable(testdist):
    a = cat.sample(testdist, 50, 5)
    b = cat.sample(testdist, 80, 5)
    assert a == b.subset(range(50))


def test_dataset(smalldomain, tinydataset):
    assert len(tinydataset) == 10
    assert tinydataset[3] == cat.LabeledInstance(1, [1, 1])
    assert tinydataset.instances[0] == cat.LabeledInstance(0, (0, 0))
    assert cat.Dataset(smalldomain, tinydataset.instances) == tinydataset
    sub = tinydataset.subset([9, 0])
    assert sub.classes.tolist() == [0, 0]
    with pytest.raises(errors.DomainError):
        cat.Dataset(smalldomain, [cat.LabeledInstance(3, [0, 0])])
    with pytest.raises(errors.DomainError):
        cat.Dataset.from_arrays(smalldomain, [0], [[2, 0]])


def test_joint_csv(tmpdir, testdist):
    path = str(tmpdir.join('joint.csv'))
    cat.write_joint_csv(testdist, path)
    with open(path) as f:
        lines = f.read().split('\n')
    assert lines[0] == 'class,f1,f2,f3,f4,prob'
    assert lines[1].startswith('0,0,0,0,0,')
    assert cat.read_joint_csv(path) == testdist


def test_joint_csv_errors(tmpdir):
    path = tmpdir.join('bad.csv')
    path.write('class,f1,p\n0,0,0.5\n')
    with pytest.raises(errors.ParseError) as e:
        cat.read_joint_csv(str(path))
    assert e.value.lineno == 1
    path.write('class,f1,prob\n0,0,0.25\n0,1,0.25\n1,1,0.25\n1,0,0.25\n')
    with pytest.raises(errors.ParseError) as e:
        cat.read_joint_csv(str(path))
    assert e.value.lineno == 4
    path.write('class,f1,prob\n0,0,0.5\n0,1,0.25\n1,0,0.25\n1,1,0.25\n')
    with pytest.raises(errors.ParseError):
        cat.read_joint_csv(str(path))
    path.write('')
    with pytest.raises(errors.ParseError):
        cat.read_joint_csv(str(path))


def test_dataset_csv(tmpdir, tinydataset, smalldomain):
    path = str(tmpdir.join('data.csv'))
    cat.write_dataset_csv(tinydataset, path)
    assert cat.read_dataset_csv(path, smalldomain) == tinydataset


def test_instances_csv(tmpdir, smalldomain):
    path = tmpdir.join('inst.csv')
    path.write('f1,f2\n0,2\n1,0\n')
    features, classes = cat.read_instances_csv(str(path), smalldomain, require_class=False)
    assert features.tolist() == [[0, 2], [1, 0]]
    assert classes is None
    path.write('f1,f2\n0,2\n\n1,0\n\n')
    features, classes = cat.read_instances_csv(str(path), smalldomain, require_class=False)
    assert features.tolist() == [[0, 2], [1, 0]]
    with pytest.raises(errors.ParseError):
        cat.read_instances_csv(str(path), smalldomain)


@pytest.mark.parametrize("content,lineno", [('class,f1,f2\n0,0,1\n1,0,3\n', 3),
                                            ('class,f1,f2\n0,0,1\n0,x,1\n', 3),
                                            ('class,f1,f2\n0,0,1.5\n', 2),
                                            ('class,f1,f2\n3,0,1\n', 2),
                                            ('class,f2,f1\n0,0,1\n', 1),
                                            ('class,f1,f2\n0,0,1\n\n\n1,0,3\n', 5),
                                            ('class,f1,f2\n\n0,0,1\n1,,1\n', 4)])
def test_instances_csv_errors(tmpdir, smalldomain, content, lineno):
    path = tmpdir.join('inst.csv')
    path.write(content)
    with pytest.raises(errors.ParseError) as e:
        cat.read_instances_csv(str(path), smalldomain)
    assert e.value.lineno == lineno
    assert str(path) in str(e.value)
