""" Define constant values that matter for the whole package here

The paths for data are computed relative to the package dir.
All data is inside the ``data`` directory of the package.
"""
import os
import logging

_norm = os.path.normpath  # make it shorter
_join = os.path.join

here = os.path.abspath(os.path.dirname(__file__))

loglvl_mapping = {'NOTSET': logging.NOTSET, 'DEBUG': logging.DEBUG,
                  'INFO': logging.INFO, 'WARNING': logging.WARNING,
                  'ERROR': logging.ERROR, 'CRITICAL': logging.CRITICAL}
"""Mapping of for the environment variable ``ROBQUANT_LOG_LEVEL``"""

DEFAULT_LOGGING_LEVEL = loglvl_mapping.get(os.environ.get('ROBQUANT_LOG_LEVEL', 'INFO'), logging.INFO)
"""All loggers should use this level by default. When you obtain a logger with :func:`robquant.log.get_logger`, it will have this level.
Can be overwritten by the environment variable ``\"ROBQUANT_LOG_LEVEL\"``. Possible values for the environment variable are:

  NOTSET
  DEBUG
  INFO
  WARNING
  ERROR
  CRITICAL
"""

DATA_DIR = _norm(_join(here, 'data'))
"""Location of the data directory of this package."""

RUN_CONFIG_SPEC_PATH = _join(DATA_DIR, 'runspec.ini')
"""The filepath to the configspec of run configs"""

MODEL_SPEC_PATH = _join(DATA_DIR, 'modelspec.ini')
"""The filepath to the configspec of model documents"""

MASS_TOLERANCE = 1e-12
"""Entries of a mass function have to sum to one within this tolerance."""

TIE_TOLERANCE = 1e-12
"""Relative tolerance under which two joint probabilities count as tied."""

MAX_JOINT_CELLS = 10 ** 7
"""Largest dense joint table we accept."""

MAX_GLOBAL_VERTICES = 10 ** 5
"""Cap for the extreme points of a global contamination."""

MAX_LOCAL_VERTICES = 10 ** 6
"""Cap for the extreme points of a local contamination."""

BISECTION_TOL = 1e-9
"""Default bracket width for the local robustness root finder."""

BISECTION_MAX_ITER = 200
"""Iteration cap of the bisection. Width halving reaches any sane tolerance long before."""

ALPHA_GRID = (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
"""Default smoothing grid for cross validation."""

CV_FOLDS = 5
"""Default number of cross validation folds."""

ENSEMBLE_SIZE = 10
"""Default number of bootstrap members."""

FLOAT_FORMAT = '%.17g'
"""Format for all written probabilities, 17 significant digits."""

UNCERTAINTY_METRICS = ('u_m', 'u_H', 'u_a', 'u_t', 'u_e')
"""Names of the uncertainty metrics. They order instances ascending."""

ROBUSTNESS_METRICS = ('eps_glob', 'eps_loc')
"""Names of the robustness metrics. They order instances descending."""

METRICS = UNCERTAINTY_METRICS + ROBUSTNESS_METRICS
"""All metrics in their fixed output order."""

EXIT_CODES = {'RobquantException': 1,
              'DomainError': 3,
              'DegenerateDistributionError': 4,
              'ShapeMismatchError': 5,
              'ZeroMarginalError': 6,
              'EmptyClassError': 7,
              'ConvergenceError': 8,
              'VertexLimitError': 9,
              'ConfigError': 10,
              'ParseError': 11,
              'ExportError': 12,
              'ExperimentError': 13}
"""Exit code of the launcher per exception class name. Exit code 0 means all outputs were written."""
