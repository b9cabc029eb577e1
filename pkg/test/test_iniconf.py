import pytest
from configobj import ConfigObj

import robquant.iniconf as iniconf
from robquant.categorical import DomainSpec
from robquant.constants import RUN_CONFIG_SPEC_PATH, MODEL_SPEC_PATH
from robquant.errors import ConfigError, ExportError, ParseError

spec = ConfigObj(interpolation=False, list_values=False,
                 _inspec=True)
spec['key1'] = 'integer(max=20, default=10)'
spec['key2'] = 'string_list(max=3, min=3, default=list(\"c\", \"d\", \"e\"))'
spec['key3'] = 'integer'

c = ConfigObj(configspec=spec)
c['sec1'] = {'sec2': {'sec3': {}}}


def test_get_section_path():
    """Get the section path to a section"""
    sp = iniconf.get_section_path(c['sec1'])
    errmsg = "Section path is not as expected!"
    assert sp == ['sec1'], errmsg
    sp = iniconf.get_section_path(c['sec1']['sec2'])
    assert sp == ['sec1', 'sec2'], errmsg
    sp = iniconf.get_section_path(c['sec1']['sec2']['sec3'])
    assert sp == ['sec1', 'sec2', 'sec3'], errmsg


def test_check_default_values():
    """check default values in conf"""
    iniconf.check_default_values(spec, 'key1')
    iniconf.check_default_values(spec, 'key2')
    with pytest.raises(ConfigError):
        iniconf.check_default_values(spec, 'key3')


def test_run_spec_has_defaults():
    spec = ConfigObj(RUN_CONFIG_SPEC_PATH, interpolation=False, list_values=False, _inspec=True)
    spec.walk(iniconf.check_default_values)


def test_defaults():
    rc = iniconf.RunConfig.from_file()
    assert rc.master_seed is None
    assert rc.n_test == 1000
    assert rc.m_ensemble == 10
    assert rc.folds == 5
    assert rc.alpha_grid == (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
    assert rc.bisection_tol == 1e-9
    assert rc.workers == 1
    assert rc.domain == DomainSpec(3, (2, 3, 3, 4))
    assert rc.beta == 0.3
    assert rc.class_probs == (0.4, 0.35, 0.25)
    assert rc.peak == 0.85
    assert rc.n_train == (25, 50, 100)
    assert rc.gamma == (0.0, 0.2, 0.4)
    assert rc.shifts == 10
    assert rc.train_sets == 10


def test_file_and_overrides(tmpdir):
    f = tmpdir.join('run.ini')
    f.write('master_seed = 3\nn_test = 200\n[grid]\ngamma = 0.0, 0.5\nshifts = 2\n')
    rc = iniconf.RunConfig.from_file(str(f), {'n_test': 50, 'workers': None})
    assert rc.master_seed == 3
    assert rc.n_test == 50
    assert rc.workers == 1
    assert rc.gamma == (0.0, 0.5)
    assert rc.shifts == 2
    assert rc.train_sets == 10


@pytest.mark.parametrize("content", ['n_test = zero\n',
                                     '[domain]\nnum_classes = 1\n',
                                     '[generator]\nbeta = 2\n',
                                     '[generator]\nclass_probs = 0.5, 0.5\n',
                                     '[generator]\npeak = 0.3\n',
                                     '[grid]\ngamma = 0.5, 1.5\n',
                                     '[grid]\nn_train = 3, 25\n',
                                     'alpha_grid = 0, 1\n',
                                     '[domain\n'])
def test_invalid_configs(tmpdir, content):
    f = tmpdir.join('run.ini')
    f.write(content)
    with pytest.raises(ConfigError):
        iniconf.RunConfig.from_file(str(f))


def test_validation_message_names_the_key(tmpdir):
    f = tmpdir.join('run.ini')
    f.write('[domain]\nnum_classes = 1\n')
    with pytest.raises(ConfigError) as e:
        iniconf.RunConfig.from_file(str(f))
    assert '[domain] num_classes' in str(e.value)


def test_missing_config(tmpdir):
    with pytest.raises(ConfigError):
        iniconf.RunConfig.from_file(str(tmpdir.join('nothere.ini')))


def test_unknown_override():
    with pytest.raises(ConfigError):
        iniconf.RunConfig.from_file(None, {'colour': 'blue'})


def test_bad_domain_is_config_error():
    rc = iniconf.RunConfig.from_file()
    rc.feature_cards = (2, 1)
    with pytest.raises(ConfigError):
        rc.domain


def test_documents(tmpdir):
    f = str(tmpdir.join('model.ini'))
    iniconf.write_document({'alpha': '1', 'class_marginal': ['0.5', '0.5'],
                            'domain': {'num_classes': '2', 'feature_cards': ['2']},
                            'conditionals': {'class0': {'f1': ['0.5', '0.5']},
                                             'class1': {'f1': ['0.25', '0.75']}}}, f)
    doc = iniconf.load_document(f, MODEL_SPEC_PATH)
    assert doc['alpha'] == 1.0
    assert doc['domain']['feature_cards'] == [2]
    assert doc['conditionals']['class1']['f1'] == [0.25, 0.75]


def test_document_errors(tmpdir):
    f = tmpdir.join('model.ini')
    f.write('alpha = -1\n')
    with pytest.raises(ParseError):
        iniconf.load_document(str(f), MODEL_SPEC_PATH)
    with pytest.raises(ParseError):
        iniconf.load_document(str(tmpdir.join('nothere.ini')), MODEL_SPEC_PATH)
    with pytest.raises(ExportError):
        iniconf.write_document({'a': '1'}, str(tmpdir.join('no', 'dir.ini')))
