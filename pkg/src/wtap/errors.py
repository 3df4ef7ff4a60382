"""Exception hierarchy shared by every solver layer."""


class WtapError(Exception):
    """Base class for library errors."""


class InfeasibleError(WtapError):
    """Some tree edge cannot be covered by any available link (or an LP is infeasible)."""


class ResourceLimitError(WtapError):
    """An iteration, node or size limit was exceeded."""


class PreconditionError(WtapError, ValueError):
    """Input violates an operation's documented precondition."""


class StateError(WtapError):
    """Instance is in the wrong state for the operation (unrooted, shadow closure broken, ...)."""


class CertificateViolation(WtapError, AssertionError):
    """A bound that must hold in exact arithmetic did not."""

    def __init__(self, message, cost=None, bound=None):
        super().__init__(message)
        self.cost = cost
        self.bound = bound
