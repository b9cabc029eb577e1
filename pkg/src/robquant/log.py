""" Here we provide standard loggers for robquant. It is advised to use them instead of the print function. """
import logging
import sys

from robquant.constants import DEFAULT_LOGGING_LEVEL, loglvl_mapping


def setup_robquant_logger():
    """Setup the robquant top-level logger with handlers

    The logger has the name ``rq`` and is the top-level logger for all other loggers of robquant.
    It does not propagate to the root logger, because it also has a StreamHandler and that might cause double output.

    The logger default level is defined in the constants :data:`robquant.constants.DEFAULT_LOGGING_LEVEL`
    but can be overwritten by the environment variable \"ROBQUANT_LOG_LEVEL\"

    :returns: None
    :rtype: None
    :raises: None
    """
    log = logging.getLogger("rq")
    log.propagate = False
    if not log.handlers:
        handler = logging.StreamHandler(sys.stdout)
        fmt = "%(levelname)-8s:%(name)s: %(message)s"
        formatter = logging.Formatter(fmt)
        handler.setFormatter(formatter)
        log.addHandler(handler)
    log.setLevel(DEFAULT_LOGGING_LEVEL)


def set_level(level):
    """Set the level of the top-level logger

    :param level: a level name like ``\"INFO\"`` or a logging level like :data:`logging.INFO`
    :type level: str | int
    :returns: None
    :rtype: None
    :raises: :class:`ValueError` if the name is unknown
    """
    if isinstance(level, str):
        try:
            level = loglvl_mapping[level.upper()]
        except KeyError:
            raise ValueError("Unknown log level %r" % level)
    logging.getLogger("rq").setLevel(level)


def get_logger(name, level=None):
    """ Return a setup logger for the given name

    :param name: The name for the logger. It is advised to use __name__. The logger name will be prepended by \"rq.\".
    :type name: str
    :param level: the logging level, e.g. logging.DEBUG, logging.INFO etc
    :type level: int
    :returns: Logger
    :rtype: logging.Logger
    :raises: None
    """
    log = logging.getLogger("rq.%s" % name)
    if level is not None:
        log.setLevel(level)
    return log


setup_robquant_logger()
