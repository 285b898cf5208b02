"""
Smooth partition of unity separating the critical set from the boundary.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from config.settings import LabSettings
from src.exceptions import DomainSpecError
from src.geometry.bumps import smoothstep
from src.geometry.domain import Domain
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)


def _halo(z: np.ndarray, points: Sequence[complex], rho: float) -> np.ndarray:
    """1 on the union of B(z_k, rho), 0 outside B(z_k, 2 rho), C2 in between."""
    outside = np.ones(np.shape(z))
    for p in points:
        outside = outside * (1.0 - smoothstep((2.0 * rho - np.abs(z - p)) / rho))
    return 1.0 - outside


def _collar(distance: np.ndarray, epsilon: float) -> np.ndarray:
    """1 within epsilon of the boundary, 0 beyond 2 epsilon."""
    return smoothstep((2.0 * epsilon - distance) / epsilon)


def partition_e1e2(domain: Domain, critical_points: Sequence[complex], epsilon: Optional[float] = None,
                   rho: Optional[float] = None) -> Tuple[GridFunction, GridFunction]:
    """
    Build (e1, e2) with e1 + e2 = 1, e2 = 0 on the rho-halos of the critical
    set and e1 = 0 on the epsilon-collar.

    e2 is the collar profile with the critical halos cut out, e1 = 1 - e2.

    Args:
        domain: Discretized domain
        critical_points: Critical set
        epsilon: Collar width, COLLAR_FACTOR * inradius by default
        rho: Halo radius, HALO_FACTOR * inradius by default

    Returns:
        (e1, e2) with boundary traces (0 and 1)

    Raises:
        DomainSpecError: If a doubled halo reaches the collar
    """
    R = domain.radius
    epsilon = LabSettings.COLLAR_FACTOR * domain.inradius if epsilon is None else epsilon
    rho = LabSettings.HALO_FACTOR * domain.inradius if rho is None else rho
    if epsilon <= 0 or rho <= 0:
        raise DomainSpecError(f"collar {epsilon} and halo {rho} must be positive")
    points = [complex(p) for p in critical_points]
    for p in points:
        if abs(p) + 2.0 * rho > R - epsilon:
            raise DomainSpecError(
                f"halo of {p:.4g} (2 rho = {2 * rho:g}) reaches the collar of width {epsilon:g}; "
                f"use a smaller rho or epsilon"
            )

    z = domain.quadrature.z
    e2 = _collar(domain.quadrature.boundary_distance, epsilon) * (1.0 - _halo(z, points, rho))
    e2_boundary = np.ones(domain.boundary_z.size)
    e1 = GridFunction(1.0 - e2, 1.0 - e2_boundary)
    logger.debug(f"Partition: collar {epsilon:g}, halo {rho:g} around {len(points)} critical points")
    return e1, GridFunction(e2, e2_boundary)
