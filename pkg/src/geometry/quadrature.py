"""
Polar tensor quadrature on the disk.

Gauss-Legendre in the radius times the uniform trapezoid in the angle. Node
arrays are stored as (radial_nodes, angular_nodes) so that angular sums run
along the contiguous axis.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre


@dataclass(frozen=True)
class QuadratureGrid:
    """Interior quadrature nodes of a disk of radius ``radius``."""

    radius: float
    r: np.ndarray
    theta: np.ndarray
    radial_weights: np.ndarray
    z: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    boundary_distance: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.z.shape

    @property
    def size(self) -> int:
        return int(self.z.size)

    @property
    def dtheta(self) -> float:
        return float(2.0 * np.pi / self.theta.size)

    @property
    def radial_edges(self) -> np.ndarray:
        """
        Cell edges in r whose annuli carry exactly the node weights.

        Edge k+1 solves e**2 / 2 = sum_{j <= k} w_j r_j, so each radial cell's
        area integral matches its quadrature weight.
        """
        cumulative = np.concatenate([[0.0], np.cumsum(self.radial_weights * self.r)])
        edges = np.sqrt(2.0 * cumulative)
        edges[-1] = self.radius
        return edges

    def integrate(self, values: np.ndarray) -> complex:
        """Quadrature of a sampled field, angular axis reduced first."""
        return np.sum(np.sum(values * self.weights, axis=1))

    def nodes(self):
        """Flat list of (position, weight) pairs in storage order."""
        return list(zip(self.z.ravel().tolist(), self.weights.ravel().tolist()))


def build_polar_quadrature(radius: float, radial_nodes: int, angular_nodes: int) -> QuadratureGrid:
    """
    Build the polar tensor grid.

    Args:
        radius: Disk radius
        radial_nodes: Gauss-Legendre node count on [0, radius]
        angular_nodes: Uniform angular node count, theta_k = 2 pi k / N

    Returns:
        QuadratureGrid whose weights sum to pi * radius**2
    """
    x, w = roots_legendre(radial_nodes)
    r = 0.5 * radius * (x + 1.0)
    w_r = 0.5 * radius * w
    theta = 2.0 * np.pi * np.arange(angular_nodes) / angular_nodes

    rr, tt = np.meshgrid(r, theta, indexing="ij")
    z = rr * np.exp(1j * tt)
    weights = (w_r * r)[:, None] * np.full(angular_nodes, 2.0 * np.pi / angular_nodes)[None, :]

    return QuadratureGrid(
        radius=float(radius),
        r=r,
        theta=theta,
        radial_weights=w_r,
        z=z,
        weights=weights,
        boundary_distance=radius - rr,
    )
