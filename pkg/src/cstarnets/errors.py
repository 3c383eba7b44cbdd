"""Exception types shared across the package."""


class CstarnetsError(Exception):
    """Base class for all package-specific errors."""


class DisconnectedPoset(CstarnetsError):
    pass


class MalformedLoop(CstarnetsError):
    pass


class RelatorViolation(CstarnetsError):
    """A character assignment fails on a relator.

    Carries the relator word and its evaluated value.
    """

    def __init__(self, relator, value):
        self.relator = tuple(relator)
        self.value = value
        super().__init__(f"relator {self.relator} evaluates to {value!r}, not 1")


class ShapeMismatch(CstarnetsError):
    pass


class NotInvertible(CstarnetsError):
    pass


class EmptyRestriction(CstarnetsError):
    pass


class NotABundle(CstarnetsError):
    pass


class RelatorNotFlat(CstarnetsError):
    """Transport of a presentation relator is not the identity; the input
    net is inconsistent with its own poset topology."""


class UnsupportedGroup(CstarnetsError):
    pass


class NotDownwardDirected(CstarnetsError):
    pass


class FiberNotRealizable(CstarnetsError):
    """The universal algebra over some neighborhood poset has no
    finite-dimensional realization (general amalgamated colimit)."""


class SupportViolation(CstarnetsError):
    pass


class InconsistentHeteromorphism(CstarnetsError):
    pass


class NotASection(CstarnetsError):
    pass


class NotDirected(CstarnetsError):
    pass


class NoRefinementWitness(CstarnetsError):
    pass


class SymbolVanishesOnCircle(CstarnetsError):
    pass


class KernelNotInvariant(CstarnetsError):
    pass


class NonConstantIndex(CstarnetsError):
    pass


class InvalidSector(CstarnetsError):
    pass


class ParseError(CstarnetsError):
    """Malformed scenario input; carries a location hint for diagnostics."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
