"""Exception hierarchy shared by the simulators, the spectral harness and the CLI."""


class QWalkError(Exception):
    """Base class for all package errors."""


class DimensionError(QWalkError, ValueError):
    """Invalid or unsupported dimension, index or shape."""


class CapacityError(QWalkError):
    """Requested state would exceed the configured memory cap."""


class NormalizationError(QWalkError, ValueError):
    """A state expected to be unit norm is not."""


class SolverError(QWalkError, RuntimeError):
    """Eigensolver failure or residual contract violation."""


class StructuralError(QWalkError, RuntimeError):
    """Computed spectrum contradicts the expected arc structure."""
