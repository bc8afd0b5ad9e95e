"""Exception types raised across the package."""


class MeshCtrlError(Exception):
    """Base class for all package errors."""


class DimensionError(MeshCtrlError, ValueError):
    """Array shapes or dimensions do not match, or a dimension is unsupported."""


class TooManyNodesError(MeshCtrlError, ValueError):
    """A tensor quadrature would need more nodes than the guard allows."""


class RadiusTooSmallError(MeshCtrlError):
    """The MLS neighbourhood of a query is not unisolvent for the basis."""

    def __init__(self, message: str, neighbor_count: int):
        super().__init__(message)
        self.neighbor_count = neighbor_count


class ConditioningError(MeshCtrlError):
    """An interpolation system is singular or too ill-conditioned to solve."""


class BackendMismatchError(MeshCtrlError, ValueError):
    """The chosen interpolation back-end cannot be used with this cloud."""


class NumericOverflowError(MeshCtrlError, FloatingPointError):
    """A state or adjoint value became non-finite."""


class DivergenceError(MeshCtrlError):
    """Picard iteration for the implicit adjoint step failed to contract."""


class InvalidCaseError(MeshCtrlError, ValueError):
    """Benchmark parameters make a closed-form denominator non-positive."""


class ConfigError(MeshCtrlError, ValueError):
    """Experiment configuration could not be parsed or is inconsistent."""
