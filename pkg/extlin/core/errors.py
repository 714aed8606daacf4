"""Exception hierarchy for extlin.

Every exception carries a human-readable message plus structured data:
``location`` points at the offending part of an input (a tuple path) and
``payload`` holds a JSON-able counterexample when one exists.
"""

from typing import Any, Optional, Sequence, Tuple


class ExtlinError(Exception):
    """Base class for all extlin errors."""

    def __init__(self, message: str, *, payload: Any = None):
        self.message = message
        self.payload = payload
        super().__init__(message)


class VariantMismatchError(ExtlinError, TypeError):
    """Raised when Rational and Gaussian scalars are mixed in the strict API."""


class FieldDivisionError(ExtlinError, ZeroDivisionError):
    """Raised when inverting the zero scalar."""


class ScalarParseError(ExtlinError, ValueError):
    """Raised for malformed scalar text.

    Attributes:
        text: The input that failed to parse
        offset: UTF-8 byte offset of the first character that could not be consumed
    """

    def __init__(self, message: str, text: str, offset: int):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at byte {offset} in {text!r}")


class CompositionError(ExtlinError):
    """Raised when domains and codomains do not line up."""


class InvariantError(ExtlinError):
    """Raised when construction-time validation fails."""

    def __init__(
        self,
        message: str,
        *,
        location: Sequence[Any] = (),
        payload: Any = None,
    ):
        self.location: Tuple[Any, ...] = tuple(location)
        super().__init__(message, payload=payload)


class GroupLawError(InvariantError):
    """A group table violates associativity, units or inverses."""


class ActionLawError(InvariantError):
    """A group action violates the action laws."""


class GroupoidLawError(InvariantError):
    """A composition table violates the groupoid laws."""


class FunctorialityError(InvariantError):
    """A functor or local system does not preserve identities/composition."""


class NaturalityError(InvariantError):
    """A naturality square does not commute."""


class ChainComplexError(InvariantError):
    """A differential squares to a nonzero map, or a chain map does not commute."""


class SimplicialIdentityError(InvariantError):
    """A truncated simplicial object violates a simplicial identity."""


class UnsupportedError(ExtlinError):
    """The finite engine refuses a shape instead of guessing an answer."""


class UnsupportedExponentError(UnsupportedError):
    """Exponentials are only formed for discrete exponents."""


class UnsupportedQuotientError(UnsupportedError):
    """Orbit quotients are only formed for actions free on objects."""


class UnsupportedShapeError(UnsupportedError):
    """A diagram or square shape outside the supported whitelist."""


class UnsupportedBaseError(UnsupportedError):
    """An operation requires a discrete (or otherwise restricted) base."""


class LiftingInputError(ExtlinError):
    """A lifting problem whose square does not commute."""


class BranchError(ExtlinError, ValueError):
    """An empty set of measurement outcomes, or an outcome outside it."""


class SuiteNotFoundError(ExtlinError, KeyError):
    """Unknown law suite; ``registered`` lists the valid names."""

    def __init__(self, name: str, registered: Sequence[str]):
        self.name = name
        self.registered = list(registered)
        super().__init__(
            f"Unknown suite {name!r}. Registered suites: {', '.join(self.registered)}"
        )

    def __str__(self) -> str:
        return self.message


class LawViolation(ExtlinError):
    """Raised by a suite checker when a law fails on a concrete instance."""

    def __init__(self, message: str, payload: Optional[Any] = None):
        super().__init__(message, payload=payload)
