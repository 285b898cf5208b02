"""
Holomorphic constructions: power series, least-squares fits and phases.
"""

from src.holo.fitting import (
    CRExtensionReport,
    JetSpec,
    amplitude_residual,
    cauchy_riemann_extend,
    constrained_lstsq,
    fit_amplitude,
    fit_conjugate_pair,
    fit_tangential_p,
    jet_interpolate,
)
from src.holo.phase import (
    BoundaryPhaseIdentity,
    CriticalPoint,
    PhaseFunction,
    PhaseReport,
    boundary_phase_identity,
    build_phase,
    critical_set_distance,
    find_critical_points,
    validate_phase,
)
from src.holo.series import HolomorphicFunction, monomial_jet_rows

__all__ = [
    'BoundaryPhaseIdentity',
    'CRExtensionReport',
    'CriticalPoint',
    'HolomorphicFunction',
    'JetSpec',
    'PhaseFunction',
    'PhaseReport',
    'amplitude_residual',
    'boundary_phase_identity',
    'build_phase',
    'cauchy_riemann_extend',
    'constrained_lstsq',
    'critical_set_distance',
    'find_critical_points',
    'fit_amplitude',
    'fit_conjugate_pair',
    'fit_tangential_p',
    'jet_interpolate',
    'monomial_jet_rows',
    'validate_phase',
]
