"""
Exception hierarchy for the toolkit.

All errors derive from ValueError so callers that only know the service
contract ("raises ValueError on bad input") keep working. NumericalError is
the one class that signals a computation failing its own postconditions
rather than bad input.
"""


class MilnorError(ValueError):
    """Base class for every error raised by the services."""


class DimensionError(MilnorError):
    """Dimension below the family minimum or inconsistent between inputs."""


class ShapeError(MilnorError):
    """Array with the wrong shape, or asymmetric where symmetry is required."""


class SingularMatrixError(MilnorError):
    """A basis change or group element is not invertible."""


class DefinitenessError(MilnorError):
    """A Gram matrix is not symmetric positive-definite."""


class UnsupportedFamilyError(MilnorError):
    """A family-only operation was called on a custom algebra."""


class StructureConstantsError(MilnorError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


class InputFormatError(MilnorError):
    """A structure-constant or Gram matrix file could not be parsed."""


class NumericalError(MilnorError):
    """A computed result failed its postcondition checks."""
