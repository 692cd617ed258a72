"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class SymdiagError(Exception):
    """Base class for all toolkit errors."""


class LogicFormError(SymdiagError):
    """Base class for logic-form parsing and validation failures."""


class LogicSyntaxError(LogicFormError):
    """Malformed source text; carries the position and the expected token."""

    def __init__(self, message: str, line: int = 0, column: int = 0, expected: str | None = None):
        self.line = line
        self.column = column
        self.expected = expected
        loc = f"line {line}, col {column}: " if line else ""
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{loc}{message}{hint}")


class LogicReferenceError(LogicFormError):
    """A declaration references a point name that was never declared."""

    def __init__(self, name: str, line: int = 0):
        self.name = name
        self.line = line
        loc = f"line {line}: " if line else ""
        super().__init__(f"{loc}unknown point name {name!r}")


class LogicArityError(LogicFormError):
    """Wrong operand count for a shape, indicator, or relation kind."""


class LogicValidationError(LogicFormError):
    """A structural invariant is violated (bad coordinate range, name clash, ...)."""


class GeometryError(SymdiagError):
    """Base class for computational-geometry failures."""


class DegenerateGeometryError(GeometryError):
    """Inputs are degenerate for the requested construction (collinear, coincident, ...)."""


class CircleFitRejectedError(GeometryError):
    """Least-squares circle fit exceeded the relative residual threshold."""

    def __init__(self, max_error: float, radius: float, threshold: float):
        self.max_error = max_error
        self.radius = radius
        self.threshold = threshold
        super().__init__(
            f"circle fit rejected: max residual {max_error:.6g} exceeds "
            f"{threshold:.0%} of radius {radius:.6g}"
        )


class EmptyGeometryError(SymdiagError):
    """A viewport was requested for a logic form with no points."""


class DimensionMismatchError(SymdiagError):
    """Two images passed to a similarity metric have different dimensions."""


class EmbeddingProviderError(SymdiagError):
    """Base class for embedding-provider failures."""


class ProviderUnavailableError(EmbeddingProviderError):
    """The embedding provider is not configured or not reachable."""


class MalformedResponseError(EmbeddingProviderError):
    """The embedding provider answered with an unusable payload."""


class GroupTooSmallError(SymdiagError):
    """A GRPO group operation needs at least two rollouts."""


class GenerationExhaustedError(SymdiagError):
    """The synthetic generator ran out of retries for a construction step."""
