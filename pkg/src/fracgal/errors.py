"""Shared exception types."""


class FracgalError(Exception):
    """Base class for package errors."""


class DomainError(FracgalError):
    """Input outside an operation's mathematical domain."""


class InvalidRankAssignment(FracgalError):
    """Rank assignment not constant on Galois-conjugate characters."""


class EmptyMorphismError(FracgalError):
    """No morphisms exist between non-isomorphic module shapes."""


class HypothesisError(FracgalError):
    """A named hypothesis (H1-H4 or a section-specific constraint) fails."""

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(f"{name}: {message}")


class PrecisionError(FracgalError):
    """Requested precision too low, or a numeric cancellation detected."""


class ReconstructionError(PrecisionError):
    """Rational reconstruction failed or failed re-validation."""


class UnsupportedFieldError(FracgalError):
    """Field outside the configured supported list."""


class ConjectureViolation(FracgalError):
    """An integrality or equality predicted by the verified statements
    failed exactly.  Never silently accepted; this is the falsification
    surface."""
