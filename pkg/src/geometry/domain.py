"""
Domain description: the disk, its boundary partition and quadrature.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from config.settings import LabSettings
from src.exceptions import DomainSpecError
from src.geometry.quadrature import QuadratureGrid, build_polar_quadrature

logger = logging.getLogger(__name__)

DOMAIN_KINDS = ("unit_disk", "scaled_disk")


@dataclass(frozen=True)
class DomainSpec:
    """Disk kind, radius, the Gamma-tilde arc and node counts."""

    kind: str = "unit_disk"
    radius: float = 1.0
    gamma_tilde: Tuple[float, float] = LabSettings.DEFAULT_GAMMA_TILDE
    boundary_nodes: int = LabSettings.DEFAULT_BOUNDARY_NODES
    radial_nodes: int = LabSettings.DEFAULT_RADIAL_NODES
    angular_nodes: int = LabSettings.DEFAULT_ANGULAR_NODES

    def validate(self) -> None:
        """
        Check node minimums, the radius and the Gamma_tilde arc.

        Raises:
            DomainSpecError: If any invariant fails
        """
        if self.kind not in DOMAIN_KINDS:
            raise DomainSpecError(f"Unknown domain kind '{self.kind}', expected one of {DOMAIN_KINDS}")
        if not self.radius > 0:
            raise DomainSpecError(f"radius must be positive, got {self.radius}")
        if self.kind == "unit_disk" and self.radius != 1.0:
            raise DomainSpecError("unit_disk requires radius 1.0; use scaled_disk")

        theta_a, theta_b = self.gamma_tilde
        if not (0.0 <= theta_a < theta_b < 2.0 * np.pi):
            raise DomainSpecError(
                f"gamma_tilde [{theta_a}, {theta_b}) must satisfy 0 <= a < b < 2pi "
                "so that both Gamma_0 and Gamma_tilde are nonempty"
            )

        if self.boundary_nodes < LabSettings.MIN_BOUNDARY_NODES:
            raise DomainSpecError(f"boundary_nodes={self.boundary_nodes} below minimum {LabSettings.MIN_BOUNDARY_NODES}")
        if self.radial_nodes < LabSettings.MIN_RADIAL_NODES:
            raise DomainSpecError(f"radial_nodes={self.radial_nodes} below minimum {LabSettings.MIN_RADIAL_NODES}")
        if self.angular_nodes < LabSettings.MIN_ANGULAR_NODES:
            raise DomainSpecError(f"angular_nodes={self.angular_nodes} below minimum {LabSettings.MIN_ANGULAR_NODES}")
        # The innermost ring borrows its radial neighbour across the origin.
        if self.angular_nodes % 2:
            raise DomainSpecError(f"angular_nodes must be even, got {self.angular_nodes}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DomainSpec":
        try:
            gamma = data.get("gamma_tilde", LabSettings.DEFAULT_GAMMA_TILDE)
            return cls(
                kind=str(data.get("kind", "unit_disk")),
                radius=float(data.get("radius", 1.0)),
                gamma_tilde=(float(gamma[0]), float(gamma[1])),
                boundary_nodes=int(data.get("boundary_nodes", LabSettings.DEFAULT_BOUNDARY_NODES)),
                radial_nodes=int(data.get("radial_nodes", LabSettings.DEFAULT_RADIAL_NODES)),
                angular_nodes=int(data.get("angular_nodes", LabSettings.DEFAULT_ANGULAR_NODES)),
            )
        except (TypeError, ValueError, IndexError) as e:
            raise DomainSpecError(f"Malformed domain spec: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "radius": self.radius,
            "gamma_tilde": list(self.gamma_tilde),
            "boundary_nodes": self.boundary_nodes,
            "radial_nodes": self.radial_nodes,
            "angular_nodes": self.angular_nodes,
        }


@dataclass(frozen=True)
class BoundaryPoint:
    position: complex
    normal: complex
    tangent: complex
    arclength_weight: float
    on_gamma0: bool


@dataclass(frozen=True)
class Domain:
    """
    Immutable discretized disk.

    Boundary vectors are stored as complex numbers. The tangent is
    (nu_2, -nu_1) = -i nu, the direction of the tangential derivative
    nu_2 d/dx_1 - nu_1 d/dx_2.
    """

    spec: DomainSpec
    quadrature: QuadratureGrid
    boundary_theta: np.ndarray = field(repr=False)
    boundary_z: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)
    tangents: np.ndarray = field(repr=False)
    arc_weights: np.ndarray = field(repr=False)
    on_gamma0: np.ndarray = field(repr=False)

    @property
    def radius(self) -> float:
        return self.spec.radius

    @property
    def inradius(self) -> float:
        return self.spec.radius

    @property
    def boundary_length(self) -> float:
        return float(np.sum(self.arc_weights))

    @property
    def grid_spacing(self) -> float:
        """Largest node spacing of the interior grid."""
        radial_gap = float(np.max(np.diff(np.concatenate([[0.0], self.quadrature.r, [self.radius]]))))
        return max(radial_gap, self.radius * self.quadrature.dtheta)

    @property
    def on_gamma_tilde(self) -> np.ndarray:
        return ~self.on_gamma0

    def boundary_points(self) -> List[BoundaryPoint]:
        return [
            BoundaryPoint(complex(z), complex(n), complex(t), float(w), bool(g))
            for z, n, t, w, g in zip(self.boundary_z, self.normals, self.tangents,
                                     self.arc_weights, self.on_gamma0)
        ]

    def contains(self, z: np.ndarray, atol: float = 1e-12) -> np.ndarray:
        """True where z lies in the closed disk."""
        return np.abs(np.asarray(z)) <= self.radius * (1.0 + atol)

    def boundary_integrate(self, values: np.ndarray, mask: np.ndarray = None) -> complex:
        weights = self.arc_weights if mask is None else self.arc_weights * mask
        return np.sum(np.asarray(values) * weights)


def build_domain(spec: DomainSpec) -> Domain:
    """
    Build the discretized domain from a validated spec.

    Args:
        spec: Domain specification

    Returns:
        Domain with polar tensor quadrature and uniform boundary nodes

    Raises:
        DomainSpecError: If the spec violates its invariants
    """
    spec.validate()
    quadrature = build_polar_quadrature(spec.radius, spec.radial_nodes, spec.angular_nodes)

    n_b = spec.boundary_nodes
    theta = 2.0 * np.pi * np.arange(n_b) / n_b
    normals = np.exp(1j * theta)
    theta_a, theta_b = spec.gamma_tilde
    on_gamma_tilde = (theta >= theta_a) & (theta < theta_b)

    domain = Domain(
        spec=spec,
        quadrature=quadrature,
        boundary_theta=theta,
        boundary_z=spec.radius * normals,
        normals=normals,
        tangents=-1j * normals,
        arc_weights=np.full(n_b, 2.0 * np.pi * spec.radius / n_b),
        on_gamma0=~on_gamma_tilde,
    )

    logger.info(
        f"Built {spec.kind} R={spec.radius}: grid {spec.radial_nodes}x{spec.angular_nodes}, "
        f"{int(on_gamma_tilde.sum())} Gamma_tilde / {int((~on_gamma_tilde).sum())} Gamma_0 boundary nodes"
    )
    return domain


def o_epsilon_mask(domain: Domain, epsilon: float) -> np.ndarray:
    """
    Nodes within distance epsilon of the boundary.

    Args:
        domain: Discretized domain
        epsilon: Collar width, 0 < epsilon < inradius

    Returns:
        Boolean array of the grid shape

    Raises:
        DomainSpecError: If epsilon is outside (0, inradius)
    """
    if not 0.0 < epsilon < domain.inradius:
        raise DomainSpecError(f"collar width {epsilon} must lie in (0, {domain.inradius})")
    return domain.quadrature.boundary_distance <= epsilon


def collar_area(domain: Domain, epsilon: float) -> float:
    """Area of the collar measured on the quadrature cells, partial cells prorated."""
    if not 0.0 < epsilon < domain.inradius:
        raise DomainSpecError(f"collar width {epsilon} must lie in (0, {domain.inradius})")
    quad = domain.quadrature
    edges = quad.radial_edges
    r_in = domain.radius - epsilon
    lo = np.clip(edges[:-1], r_in, None)
    hi = edges[1:]
    inside = np.clip(hi ** 2 - lo ** 2, 0.0, None) / np.maximum(hi ** 2 - edges[:-1] ** 2, 1e-300)
    ring_area = quad.radial_weights * quad.r * 2.0 * np.pi
    return float(np.sum(ring_area * inside))
