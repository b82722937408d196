"""Exception hierarchy shared by all modules."""


class SwellingError(Exception):
    """Base class for errors raised by this package."""


class UsageError(SwellingError, ValueError):
    """Malformed input, carrier mismatch, or an argument outside its domain."""


class PreconditionError(SwellingError):
    """An operation's mathematical precondition does not hold."""


class CapacityError(SwellingError):
    """A configured size cap (closure size, group order) was exceeded."""


class NotApplicableError(SwellingError):
    """The hypotheses of the underlying statement fail (e.g. a rational ratio)."""
