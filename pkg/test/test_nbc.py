import numpy as np
import pytest

from robquant import errors, nbc
from robquant.categorical import Dataset, DomainSpec, feature_vectors, sample


def test_count(tinydataset):
    counts = nbc.count(tinydataset)
    assert counts.n == 10
    assert counts.n_c == [4, 2, 4]
    assert counts.n_cf[0] == [[3, 1], [3, 1, 0]]
    assert counts.n_cf[1] == [[0, 2], [0, 1, 1]]
    assert counts.n_cf[2] == [[3, 1], [0, 1, 3]]


def test_count_empty(smalldomain):
    with pytest.raises(errors.DomainError):
        nbc.count(Dataset(smalldomain))


def test_fit_unsmoothed(tinydataset):
    m = nbc.fit(tinydataset, 0)
    assert np.allclose(m.prior, [0.4, 0.2, 0.4])
    assert np.allclose(m.conditional(0, 1).probs, [0.75, 0.25, 0.0])
    assert nbc.joint(m, 0, [0, 2]) == 0.0
    assert nbc.predict(m, [0, 2]) == (2, frozenset([2]))


@pytest.mark.parametrize("dataset", ["tinydataset", "sampleddata"])
def test_fit_unsmoothed_is_relative_frequency(dataset, request):
    data = request.getfixturevalue(dataset)
    counts = nbc.count(data)
    m = nbc.fit(data, 0)
    assert m.prior.tolist() == [k / float(counts.n) for k in counts.n_c]
    for c in range(data.domain.num_classes):
        for i in range(data.domain.num_features):
            assert m.conditional(c, i).probs.tolist() == [k / float(counts.n_c[c]) for k in counts.n_cf[c][i]]


def test_fit_heavy_smoothing_is_uniform(tinydataset):
    m = nbc.fit(tinydataset, 1e6)
    domain = tinydataset.domain
    assert np.all(np.abs(m.prior - 1.0 / domain.num_classes) < 1e-5)
    for c in range(domain.num_classes):
        for i, card in enumerate(domain.feature_cards):
            assert np.all(np.abs(m.conditional(c, i).probs - 1.0 / card) < 1e-5)


def test_fit_smoothed(tinydataset):
    m = nbc.fit(tinydataset, 1.0)
    assert m.alpha == 1.0
    assert np.allclose(m.prior, [5 / 13.0, 3 / 13.0, 5 / 13.0])
    assert np.allclose(m.conditional(1, 0).probs, [0.25, 0.75])
    assert np.allclose(m.conditional(2, 1).probs, [1 / 7.0, 2 / 7.0, 4 / 7.0])
    assert np.all(nbc.to_joint(m).probs > 0)


def test_fit_errors(smalldomain):
    ds = Dataset.from_arrays(smalldomain, [0, 1], [[0, 0], [1, 1]])
    with pytest.raises(errors.EmptyClassError):
        nbc.fit(ds, 0)
    with pytest.raises(ValueError):
        nbc.fit(ds, -0.5)
    # smoothing makes empty classes fine
    m = nbc.fit(ds, 0.5)
    assert m.prior[2] > 0


def test_model_validation(binarydomain):
    with pytest.raises(errors.ShapeMismatchError):
        nbc.NbcModel(binarydomain, [0.2, 0.3, 0.5], [[[0.5, 0.5]]] * 2, 1.0)
    with pytest.raises(errors.ShapeMismatchError):
        nbc.NbcModel(binarydomain, [0.5, 0.5], [[[0.2, 0.3, 0.5]], [[0.5, 0.5]]], 1.0)
    with pytest.raises(errors.DegenerateDistributionError):
        nbc.NbcModel(binarydomain, [0.5, 0.5], [[[0.2, 0.3]], [[0.5, 0.5]]], 1.0)


def test_to_joint_factorizes(gapmodel):
    j = nbc.to_joint(gapmodel)
    assert np.allclose(j.table, [[0.48, 0.12], [0.2, 0.2]])
    assert j.probs.sum() == pytest.approx(1.0)


def test_batch_matches_single(sampleddata):
    m = nbc.fit(sampleddata, 0.5)
    features = feature_vectors(m.domain)
    values = nbc.batch_class_joints(m, features)
    preds = nbc.batch_predict(values)
    for k, f in enumerate(features):
        assert np.array_equal(values[k], nbc.class_joints(m, f))
        assert preds[k] == nbc.predict(m, f)[0]


def test_predict_tie_goes_to_lowest(binarydomain):
    m = nbc.NbcModel(binarydomain, [0.5, 0.5], [[[0.5, 0.5]], [[0.5, 0.5]]], 1.0)
    assert nbc.predict(m, [1]) == (0, frozenset([0, 1]))
    assert nbc.batch_predict([[0.2, 0.2], [0.1, 0.3], [0.0, 0.0]]).tolist() == [0, 1, 0]


def test_posterior(gapmodel, binarydomain):
    post = nbc.posterior(gapmodel, [0])
    assert np.allclose(post.probs, [0.48 / 0.68, 0.2 / 0.68])
    zero = nbc.NbcModel(binarydomain, [0.5, 0.5], [[[1.0, 0.0]], [[1.0, 0.0]]], 0.0)
    with pytest.raises(errors.ZeroMarginalError):
        nbc.posterior(zero, [1])
    with pytest.raises(errors.DomainError):
        nbc.posterior(zero, [2])


def test_select_alpha_tie_prefers_smallest(binarydomain):
    classes = [0, 1] * 10
    ds = Dataset.from_arrays(binarydomain, classes, [[c] for c in classes])
    alpha, means = nbc.select_alpha(ds, [2.0, 0.5, 1.0], folds=5, seed=3)
    assert alpha == 0.5
    assert means == [1.0, 1.0, 1.0]


def test_select_alpha_reproducible(sampleddata):
    a1 = nbc.select_alpha(sampleddata, seed=17)
    a2 = nbc.select_alpha(sampleddata, seed=17)
    assert a1 == a2
    assert a1[0] in nbc.ALPHA_GRID
    assert len(a1[1]) == len(nbc.ALPHA_GRID)
    assert max(a1[1]) == a1[1][list(nbc.ALPHA_GRID).index(a1[0])]


@pytest.mark.parametrize("grid,folds", [([], 5), ([0.0, 1.0], 5), ([1.0], 1)])
def test_select_alpha_invalid(tinydataset, grid, folds):
    with pytest.raises(ValueError):
        nbc.select_alpha(tinydataset, grid, folds)


def test_select_alpha_too_few_instances(tinydataset):
    with pytest.raises(errors.DomainError):
        nbc.select_alpha(tinydataset, folds=11)


def test_fold_sizes():
    blocks = nbc._fold_indices(23, 5, 1)
    assert [len(b) for b in blocks] == [5, 5, 5, 4, 4]
    assert sorted(np.concatenate(blocks).tolist()) == list(range(23))


def test_save_load_model(tmpdir, testdist):
    m = nbc.fit(sample(testdist, 300, 4), 0.25)
    path = str(tmpdir.join('model.ini'))
    nbc.save_model(m, path)
    loaded = nbc.load_model(path)
    assert loaded == m
    assert loaded.domain == DomainSpec(3, (2, 3, 3, 4))


def test_load_model_errors(tmpdir, gapmodel):
    with pytest.raises(errors.ParseError):
        nbc.load_model(str(tmpdir.join('missing.ini')))
    path = tmpdir.join('model.ini')
    nbc.save_model(gapmodel, str(path))
    text = path.read().replace('0.80000000000000004', '0.7')
    path.write(text)
    with pytest.raises(errors.ParseError):
        nbc.load_model(str(path))
    path.write('alpha = 1\n')
    with pytest.raises(errors.ParseError):
        nbc.load_model(str(path))
