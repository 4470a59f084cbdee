"""Exception hierarchy shared by every module."""


class PosetMapError(Exception):
    """Base class for library errors."""


class DimensionMismatch(PosetMapError, ValueError):
    pass


class RepresentationError(PosetMapError, ValueError):
    """A finite presentation violates one of its structural invariants.

    ``invariant`` names the violated rule so callers (and the CLI) can
    report it without parsing the message.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class InvalidElement(PosetMapError, ValueError):
    """The map is not a member of the monoid (validate would fail)."""


class UnsupportedDimension(PosetMapError, ValueError):
    pass


class PreconditionError(PosetMapError, ValueError):
    pass


class TheoremViolation(PosetMapError, AssertionError):
    """A result guaranteed by a theorem did not materialise.

    Raised only by operations whose success is a proved statement; seeing
    one means either a library bug or a defective theorem.
    """
