"""
Potentials q, the analytic catalog and the conductivity reduction
q = Laplacian(sqrt(gamma)) / sqrt(gamma).
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Union

import numpy as np

from src.exceptions import ConfigError, HypothesisError
from src.geometry.domain import Domain
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

SMOOTHNESS_TAGS = ("analytic_expr", "sampled")


@dataclass(frozen=True, eq=False)
class Potential:
    """
    Sampled potential with an optional closed form.

    Attributes:
        field: Values at the grid nodes and boundary nodes
        smoothness: 'analytic_expr' when ``expression`` is the exact formula
        label: Human-readable provenance
        expression: z -> q(z), when known
    """

    field: GridFunction
    smoothness: str = "sampled"
    label: str = ""
    expression: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @classmethod
    def from_expression(cls, domain: Domain, expression: Callable[[np.ndarray], Any],
                        label: str = "") -> "Potential":
        return cls(GridFunction.from_callable(domain, expression), "analytic_expr", label, expression)

    @classmethod
    def zero(cls, domain: Domain) -> "Potential":
        return cls.from_expression(domain, lambda z: np.zeros_like(z, dtype=complex), "zero")

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def is_zero(self) -> bool:
        boundary_zero = self.field.boundary is None or not np.any(self.field.boundary)
        return not np.any(self.field.values) and boundary_zero

    def __call__(self, z: Any) -> np.ndarray:
        if self.expression is None:
            raise HypothesisError(f"potential '{self.label}' has no pointwise expression")
        return np.asarray(self.expression(np.asarray(z, dtype=complex)), dtype=complex)

    def __sub__(self, other: "Potential") -> "Potential":
        expression = None
        if self.expression is not None and other.expression is not None:
            first, second = self.expression, other.expression
            expression = lambda z: np.asarray(first(z), dtype=complex) - np.asarray(second(z), dtype=complex)
        tag = "analytic_expr" if expression is not None else "sampled"
        return Potential(self.field - other.field, tag, f"({self.label}) - ({other.label})", expression)

    def max_abs(self) -> float:
        return self.field.sup()


# Catalog of analytic potentials --------------------------------------------------

def gaussian_bump(center: Union[complex, Sequence[float]] = 0.0, width: float = 0.3,
                  height: complex = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    c = _as_complex(center)
    h = _as_complex(height)
    if width <= 0:
        raise ConfigError(f"gaussian_bump width must be positive, got {width}")
    return lambda z: h * np.exp(-np.abs(z - c) ** 2 / width ** 2)


def constant(value: complex = 0.0) -> Callable[[np.ndarray], np.ndarray]:
    v = _as_complex(value)
    return lambda z: np.full(np.shape(z), v, dtype=complex)


def exp_linear(direction: Union[complex, Sequence[float]] = 1.0, rate: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Potential of the conductivity exp(rate (d . x)), the constant rate^2 |d|^2 / 4."""
    d = _as_complex(direction)
    return constant(rate ** 2 * abs(d) ** 2 / 4.0)


def _as_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"expected [re, im] pair, got {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


POTENTIAL_CATALOG: Dict[str, Callable[..., Callable[[np.ndarray], np.ndarray]]] = {
    "gaussian_bump": gaussian_bump,
    "constant": constant,
    "exp_linear": exp_linear,
}


def catalog_expression(name: str, params: Optional[Dict[str, Any]] = None) -> Callable[[np.ndarray], np.ndarray]:
    """
    Resolve a catalog entry to a pointwise expression.

    ``sum`` takes ``terms``, a list of {"name": ..., "params": {...}} items.

    Raises:
        ConfigError: Unknown name or bad parameters
    """
    params = dict(params or {})
    if name == "sum":
        terms = [catalog_expression(t["name"], t.get("params")) for t in params.get("terms", [])]
        if not terms:
            raise ConfigError("sum potential needs at least one term")
        return lambda z: sum(np.asarray(t(z), dtype=complex) for t in terms)
    if name not in POTENTIAL_CATALOG:
        raise ConfigError(f"Unknown potential '{name}', expected one of {sorted(POTENTIAL_CATALOG) + ['sum']}")
    try:
        return POTENTIAL_CATALOG[name](**params)
    except TypeError as e:
        raise ConfigError(f"Bad parameters for potential '{name}': {e}") from e


def build_potential(name: str, params: Optional[Dict[str, Any]], domain: Domain) -> Potential:
    expression = catalog_expression(name, params)
    potential = Potential.from_expression(domain, expression, label=name)
    logger.debug(f"Built potential {name} {params or {}}: max |q| = {potential.max_abs():.3e}")
    return potential


# Conductivities -----------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticConductivity:
    """gamma with closed forms of sqrt(gamma) and its Laplacian."""

    sqrt_gamma: Callable[[np.ndarray], np.ndarray]
    laplacian_sqrt: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, z: Any) -> np.ndarray:
        return np.asarray(self.sqrt_gamma(z)) ** 2


def exp_linear_conductivity(direction: complex = 1.0, rate: float = 1.0) -> AnalyticConductivity:
    """gamma = exp(rate (d . x)); Laplacian(sqrt gamma) = (rate^2 |d|^2 / 4) sqrt(gamma)."""
    d = complex(direction)

    def sqrt_gamma(z):
        return np.exp(0.5 * rate * np.real(np.conj(d) * z))

    return AnalyticConductivity(
        sqrt_gamma=sqrt_gamma,
        laplacian_sqrt=lambda z: rate ** 2 * abs(d) ** 2 / 4.0 * sqrt_gamma(z),
        label=f"exp_linear(rate={rate})",
    )


def quadratic_x1_conductivity(a: float = 1.0) -> AnalyticConductivity:
    """gamma = (1 + a x1^2)^2; Laplacian(sqrt gamma) = 2a."""
    return AnalyticConductivity(
        sqrt_gamma=lambda z: 1.0 + a * np.real(z) ** 2,
        laplacian_sqrt=lambda z: np.full(np.shape(z), 2.0 * a),
        label=f"quadratic_x1(a={a})",
    )


def conductivity_to_potential(gamma: Union[GridFunction, AnalyticConductivity], domain: Domain,
                              gamma_min: float = 1e-12, method: str = "spectral") -> Potential:
    """
    Reduce a conductivity to the Schrodinger potential.

    Args:
        gamma: Analytic conductivity (exact Laplacian) or sampled values
        domain: Discretized domain
        gamma_min: Smallest admissible Re gamma
        method: Differentiation mode for sampled input

    Returns:
        Potential, analytic_expr when gamma is analytic

    Raises:
        HypothesisError: If Re gamma < gamma_min somewhere
    """
    if isinstance(gamma, AnalyticConductivity):
        samples = np.concatenate([np.ravel(gamma(domain.quadrature.z)), np.ravel(gamma(domain.boundary_z))])
        if np.min(np.real(samples)) < gamma_min:
            raise HypothesisError(f"conductivity {gamma.label} is not positive: min Re = {np.min(np.real(samples)):.3e}")

        def expression(z):
            return np.asarray(gamma.laplacian_sqrt(z), dtype=complex) / np.asarray(gamma.sqrt_gamma(z), dtype=complex)

        return Potential.from_expression(domain, expression, label=f"q[{gamma.label}]")

    values = gamma.values
    if np.min(np.real(values)) < gamma_min:
        raise HypothesisError(f"sampled conductivity is not positive: min Re = {np.min(np.real(values)):.3e}")
    root = np.sqrt(values)
    q = PolarDifferentiator(domain, method).laplacian(root) / root
    logger.debug(f"Conductivity reduced by {method} differences: max |q| = {np.max(np.abs(q)):.3e}")
    return Potential(GridFunction(q), "sampled", "q[sampled]")
