"""
Custom exceptions for the cgolab numerical pipelines.
"""

from typing import Any, Dict, Optional


class CGOLabError(Exception):
    """Base exception for all cgolab errors."""
    pass


class DomainSpecError(CGOLabError):
    """Raised when a domain spec, target set or collar width is invalid."""
    pass


class NonFiniteFieldError(CGOLabError):
    """Raised when a sampled field contains NaN or Inf."""
    pass


class OscillationBudgetError(CGOLabError):
    """Raised when tau exceeds what the grid can resolve."""

    def __init__(self, message: str, tau: float = 0.0, tau_max: float = 0.0,
                 required_angular_nodes: int = 0):
        super().__init__(message)
        self.tau = tau
        self.tau_max = tau_max
        self.required_angular_nodes = required_angular_nodes


class PhaseValidationError(CGOLabError):
    """Raised when a phase has degenerate or boundary critical points."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FitError(CGOLabError):
    """Raised when a least-squares fit or interpolation cannot meet its target."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class SolverError(CGOLabError):
    """Raised when a sparse system is singular or nearly so."""

    def __init__(self, message: str, pivot_ratio: float = 0.0):
        super().__init__(message)
        self.pivot_ratio = pivot_ratio


class HypothesisError(CGOLabError):
    """Raised when an input violates the hypothesis of a check."""
    pass


class ConfigError(CGOLabError):
    """Raised when an experiment configuration cannot be loaded or validated."""
    pass


class CGOLayerError(CGOLabError):
    """Raised when one layer of a CGO build fails; names the layer."""

    def __init__(self, message: str, layer: str = ""):
        super().__init__(message)
        self.layer = layer
