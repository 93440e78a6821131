"""Domain exceptions shared across the simulator packages."""

from typing import Optional


class RelclockError(Exception):
    """Base class for simulator errors."""


class DimensionMismatchError(RelclockError, ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class DetectorIndexError(RelclockError, ValueError):
    """Detector index outside the supported (j, k) pairs."""


class SingularDesignError(RelclockError, ValueError):
    """Tomography design matrix cannot be inverted."""


class ConfigError(RelclockError, ValueError):
    """Experiment configuration could not be assembled."""


class ConvergenceError(RelclockError, RuntimeError):
    """Iterative reconstruction stopped before meeting its tolerance."""

    def __init__(self, message: str, iterations: int, gradient_norm: Optional[float] = None) -> None:
        super().__init__(f"{message} (iterations={iterations}, gradient_norm={gradient_norm})")
        self.iterations = iterations
        self.gradient_norm = gradient_norm
