"""
This module holds the application specific exceptions.
"""
from logging import ERROR


class TrotexError(Exception):
    """Base class of all errors raised by trotex."""

    def __init__(self, msg, *args, **kwargs):
        """
        Add a log level to init.

        :param str msg: Exception message.
        :kwarg log_level: Python logging log level, default: logging.ERROR
        """
        self.log_level = kwargs.pop('log_level', ERROR)
        super(TrotexError, self).__init__(msg, *args, **kwargs)


class InvalidArgumentError(TrotexError, ValueError):
    """Raised when an argument violates an operation's precondition."""

    pass


class ResourceLimitError(TrotexError):
    """
    Raised when an exact computation would exceed a configured cap, e.g. the
    number of nested commutators or the size of a snapped node.
    """

    pass


class BranchAmbiguityError(TrotexError):
    """Raised when a unitary has an eigenphase at the logarithm's branch cut."""

    pass


class FitFailureError(TrotexError):
    """Raised when a least squares fit is too ill-conditioned to trust."""

    def __init__(self, msg, *args, **kwargs):
        """
        Remember the condition number of the failed fit.

        :param str msg: Exception message.
        :kwarg float condition: Condition number of the design matrix.
        """
        self.condition = kwargs.pop('condition', None)
        super(FitFailureError, self).__init__(msg, *args, **kwargs)


class NodeCollisionError(TrotexError):
    """Raised when two Richardson nodes coincide after rounding up."""

    def __init__(self, msg, *args, **kwargs):
        """
        Remember the plan parameters that collided.

        :param str msg: Exception message.
        :kwarg int m: Number of nodes.
        :kwarg int r_scale: Node scale factor.
        """
        self.m = kwargs.pop('m', None)
        self.r_scale = kwargs.pop('r_scale', None)
        super(NodeCollisionError, self).__init__(msg, *args, **kwargs)


class ConditioningError(TrotexError):
    """Raised when extrapolation weights fail their Vandermonde check."""

    pass


class StencilDegeneracyError(TrotexError):
    """Raised when finite difference stencil points snap to the same node."""

    pass


class EvolutionError(TrotexError):
    """Raised when an expectation value has a non-negligible imaginary part."""

    pass


class ConfigError(TrotexError):
    """
    Raised when a command line argument or experiment config has an invalid
    value.
    """

    pass
