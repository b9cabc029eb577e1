"""Module for all our custom exceptions"""


class RobquantException(Exception):
    """Base Exception for all robquant related Exceptions!

    Subclass this for your own exceptions. Do not recreate the builtin exceptions!
    We still use them. But whenever you want to raise a custom exception, use this as baseclass.
    """
    pass


class DomainError(RobquantException):
    """Raised when a domain is invalid or a value does not conform to a domain."""
    pass


class DegenerateDistributionError(RobquantException):
    """Raised when weights cannot be normalized or a mass function is invalid."""
    pass


class ShapeMismatchError(RobquantException):
    """Raised when two mass functions over different domains are combined."""
    pass


class ZeroMarginalError(RobquantException):
    """Raised when conditioning on a feature vector with zero marginal probability."""
    pass


class EmptyClassError(RobquantException):
    """Raised when an unsmoothed model is fit on data in which a class is absent."""
    pass


class ConvergenceError(RobquantException):
    """Raised when a root finder does not reach its tolerance."""
    pass


class VertexLimitError(RobquantException):
    """Raised when enumerating the extreme points of a perturbation would exceed the cap."""
    pass


class ConfigError(RobquantException):
    """Raised when some error occurs concerning config files."""
    pass


class ParseError(RobquantException):
    """Raised when an input file cannot be parsed.

    You can access the offending file with :data:`ParseError.path` and the 1-based line
    with :data:`ParseError.lineno`. Both might be None.
    """
    def __init__(self, msg=None, path=None, lineno=None):
        """Initialize a new exception with a error message and the location of the error

        :param msg: the error message
        :type msg: :class:`str` | None
        :param path: the file that could not be parsed
        :type path: :class:`str` | None
        :param lineno: the 1-based line number. The header is line 1.
        :type lineno: :class:`int` | None
        :raises: None
        """
        location = ""
        if path is not None:
            location = "%s" % path
            if lineno is not None:
                location += ":%s" % lineno
            location += ": "
        super(ParseError, self).__init__("%s%s" % (location, msg))
        self.path = path
        self.lineno = lineno


class ExportError(RobquantException):
    """Raised when results cannot be written. :data:`ExportError.path` holds the target."""
    def __init__(self, msg=None, path=None):
        super(ExportError, self).__init__("%s: %s" % (path, msg) if path else msg)
        self.path = path


class ExperimentError(RobquantException):
    """Raised when one or more experiment units failed."""
    pass
