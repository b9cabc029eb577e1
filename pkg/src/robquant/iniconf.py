"""The config module manages loading of run configs and model documents

We use `ConfigObj Module <https://pypi.python.org/pypi/configobj/>`_.
With its help, we can read and write **ini**-files.
We are also able to validate it against a specification ini, so there are
always correct values after loading.

There are two kinds of files:

  run configs
    validated against :data:`robquant.constants.RUN_CONFIG_SPEC_PATH`.
    Every value has a default, so an empty file reproduces the default experiment.
    Use :meth:`RunConfig.from_file`.
  documents
    validated against a spec without defaults, e.g. :data:`robquant.constants.MODEL_SPEC_PATH`.
    Use :func:`load_document` and :func:`write_document`.

.. important:: Make sure that every value in a run config specification has a valid default value!

"""
import os

from configobj import ConfigObj, flatten_errors
try:
    from configobj.validate import Validator
except ImportError:
    from validate import Validator

from robquant.log import get_logger
log = get_logger(__name__)
from robquant import errors
from robquant.constants import RUN_CONFIG_SPEC_PATH
from robquant.categorical import DomainSpec


def get_section_path(section):
    """Return a list with keys to access the section from root

    :param section: A Section
    :type section: Section
    :returns: list of strings in the order to access the given section from root
    :raises: None
    """
    keys = []
    p = section
    for i in range(section.depth):
        keys.insert(0, p.name)
        p = p.parent
    return keys


def check_default_values(section, key, validator=None):
    """Raise a ConfigError if a value in section does not have a default value

    :param section: the section of a configspec
    :type section: section
    :param key: a key of the section
    :type key: str
    :param validator: a Validator object to get the default values
    :type validator: Validator
    :returns: None
    :raises: :class:`robquant.errors.ConfigError`

    Use this in conjunction with the walk method of a ConfigObj.
    The ConfigObj should be the configspec!
    """
    if validator is None:
        validator = Validator()
    try:
        validator.get_default_value(section[key])
    except KeyError:
        parents = get_section_path(section)
        msg = 'The Key %s in the section %s is missing a default: %s' % (key, parents, section[key])
        log.debug(msg)
        raise errors.ConfigError(msg)


def validation_errors(config, validation):
    """Return a readable message for every failed value

    :param config: a validated ConfigObj
    :type config: ConfigObj
    :param validation: the results of the validation
    :type validation: bool | dict
    :returns: list of messages like ``[domain] num_classes: the value "1" is too small.``
    :rtype: list of str
    :raises: None
    """
    msgs = []
    for sections, key, err in flatten_errors(config, validation):
        where = "".join('[%s]' % s for s in sections)
        name = key if key is not None else 'section'
        if err is False:
            reason = 'missing value'
        else:
            reason = str(err)
        msgs.append(('%s %s: %s' % (where, name, reason)).strip())
    return msgs


def _validate(config):
    vld = Validator()
    validation = config.validate(vld, preserve_errors=True)
    if validation is True:
        return []
    return validation_errors(config, validation)


def load_config(f, spec):
    """Return the validated ConfigObj for the specified run config file

    :param f: the config file path or None for defaults only
    :type f: str | None
    :param spec: the path to the configspec
    :type spec: str
    :returns: the loaded ConfigObj
    :rtype: ConfigObj
    :raises: :class:`robquant.errors.ConfigError`
    """
    if f is not None and not os.path.exists(f):
        raise errors.ConfigError("Config %s does not exist" % f)
    try:
        c = ConfigObj(infile=f, configspec=spec, interpolation=False, file_error=True)
    except (SyntaxError, IOError, OSError) as e:
        raise errors.ConfigError("Config %s could not be loaded. Reason: %s" % (f, e))
    c.configspec.walk(check_default_values, validator=Validator())
    msgs = _validate(c)
    if msgs:
        msg = "Config %s is invalid. %s" % (f or '<defaults>', " ".join(msgs))
        log.debug(msg)
        raise errors.ConfigError(msg)
    return c


def load_document(f, spec):
    """Return the validated ConfigObj of a document, e.g. a saved model

    :param f: the file path
    :type f: str
    :param spec: the path to the configspec
    :type spec: str
    :returns: the loaded ConfigObj
    :rtype: ConfigObj
    :raises: :class:`robquant.errors.ParseError`
    """
    try:
        c = ConfigObj(infile=f, configspec=spec, interpolation=False, file_error=True)
    except (SyntaxError, IOError, OSError) as e:
        lineno = getattr(e, 'line_number', None)
        raise errors.ParseError(str(e), f, lineno)
    msgs = _validate(c)
    if msgs:
        raise errors.ParseError(" ".join(msgs), f)
    return c


def write_document(data, f):
    """Write a nested dictionary as ini file

    Values have to be strings or lists of strings already.

    :param data: the content
    :type data: dict
    :param f: the file path
    :type f: str
    :returns: None
    :raises: :class:`robquant.errors.ExportError`
    """
    c = ConfigObj(interpolation=False)
    c.filename = f
    c.update(data)
    try:
        c.write()
    except (IOError, OSError) as e:
        raise errors.ExportError(str(e), f)
    log.debug("Wrote document %s", f)


class RunConfig(object):
    """All settings of a run: the generator, the grid and the learning pipeline

    Values come from the defaults in the configspec, then the config file, then the overrides.
    Attributes mirror the keys of the configspec; sections are flattened:

      ``master_seed``, ``n_test``, ``m_ensemble``, ``folds``, ``alpha_grid``, ``bisection_tol``,
      ``output_dir``, ``workers``, ``num_classes``, ``feature_cards``, ``beta``, ``class_probs``,
      ``peak``, ``n_train``, ``gamma``, ``shifts``, ``train_sets``
    """

    sections = {'domain': ('num_classes', 'feature_cards'),
                'generator': ('beta', 'class_probs', 'peak'),
                'grid': ('n_train', 'gamma', 'shifts', 'train_sets')}

    def __init__(self, config):
        """Create a run config from a validated ConfigObj

        Use :meth:`RunConfig.from_file` to get one.

        :param config: validated against the run spec
        :type config: ConfigObj
        :raises: :class:`robquant.errors.ConfigError`
        """
        super(RunConfig, self).__init__()
        for key in config.scalars:
            setattr(self, key, config[key])
        for section, keys in self.sections.items():
            for key in keys:
                setattr(self, key, config[section][key])
        self.alpha_grid = tuple(self.alpha_grid)
        self.feature_cards = tuple(self.feature_cards)
        self.class_probs = tuple(self.class_probs)
        self.n_train = tuple(self.n_train)
        self.gamma = tuple(self.gamma)

    @classmethod
    def from_file(cls, f=None, overrides=None):
        """Load a run config

        :param f: path of the config file or None to use the defaults
        :type f: str | None
        :param overrides: flattened keys with values that win over the file. None values are ignored.
        :type overrides: dict | None
        :returns: the run config
        :rtype: :class:`RunConfig`
        :raises: :class:`robquant.errors.ConfigError`
        """
        config = load_config(f, RUN_CONFIG_SPEC_PATH)
        rc = cls(config)
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if not hasattr(rc, key):
                raise errors.ConfigError("Unknown config key %s" % key)
            setattr(rc, key, tuple(value) if isinstance(value, list) else value)
        rc.check()
        return rc

    def check(self):
        """Check the constraints between values that the configspec cannot express

        :returns: None
        :raises: :class:`robquant.errors.ConfigError`
        """
        if len(self.class_probs) != self.num_classes:
            raise errors.ConfigError("[generator] class_probs needs %s entries, got %s"
                                     % (self.num_classes, len(self.class_probs)))
        if abs(sum(self.class_probs) - 1.0) > 1e-9 or min(self.class_probs) < 0:
            raise errors.ConfigError("[generator] class_probs has to be a mass function: %s" % (self.class_probs,))
        if any(self.peak <= 1.0 / card for card in self.feature_cards):
            raise errors.ConfigError("[generator] peak %s has to exceed 1/|F_i| of every feature" % self.peak)
        if any(not 0.0 <= g <= 1.0 for g in self.gamma):
            raise errors.ConfigError("[grid] gamma values have to be in [0, 1]: %s" % (self.gamma,))
        if any(a <= 0 for a in self.alpha_grid):
            raise errors.ConfigError("alpha_grid values have to be positive: %s" % (self.alpha_grid,))
        if not self.bisection_tol > 0:
            raise errors.ConfigError("bisection_tol has to be positive")
        if self.master_seed is not None and not 0 <= self.master_seed < 2 ** 64:
            raise errors.ConfigError("master_seed has to be a 64-bit unsigned integer")
        if min(self.n_train) < self.folds:
            raise errors.ConfigError("[grid] every n_train has to be at least folds=%s" % self.folds)

    @property
    def domain(self):
        """The :class:`robquant.categorical.DomainSpec` of the run

        :raises: :class:`robquant.errors.ConfigError`
        """
        try:
            return DomainSpec(self.num_classes, self.feature_cards)
        except errors.DomainError as e:
            raise errors.ConfigError("[domain] %s" % e)

    def __repr__(self):
        return "RunConfig(master_seed=%s, n_train=%s, gamma=%s)" % (self.master_seed, list(self.n_train),
                                                                  list(self.gamma))
