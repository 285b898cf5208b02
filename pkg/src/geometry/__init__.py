"""
Domain geometry and quadrature.
"""

from src.geometry.bumps import arc_bump, c2_bump, smoothstep
from src.geometry.domain import (
    BoundaryPoint,
    Domain,
    DomainSpec,
    build_domain,
    collar_area,
    o_epsilon_mask,
)
from src.geometry.quadrature import QuadratureGrid, build_polar_quadrature

__all__ = [
    'BoundaryPoint',
    'Domain',
    'DomainSpec',
    'QuadratureGrid',
    'arc_bump',
    'build_domain',
    'build_polar_quadrature',
    'c2_bump',
    'collar_area',
    'o_epsilon_mask',
    'smoothstep',
]
