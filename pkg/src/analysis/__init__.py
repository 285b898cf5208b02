"""
Stationary phase, the key identity and the pointwise recovery probe.
"""

from src.analysis.identity import IdentityBreakdown, identity_terms
from src.analysis.recovery import (
    RecoveryMap,
    RecoveryResult,
    recover_pointwise,
    recovery_map,
    square_probe_grid,
    stationary_design,
)
from src.analysis.stationary_phase import (
    BeatResult,
    HessianData,
    hessian_data,
    oscillatory_integral,
    stationary_phase_leading,
    two_point_beat,
)

__all__ = [
    'BeatResult',
    'HessianData',
    'IdentityBreakdown',
    'RecoveryMap',
    'RecoveryResult',
    'hessian_data',
    'identity_terms',
    'oscillatory_integral',
    'recover_pointwise',
    'recovery_map',
    'square_probe_grid',
    'stationary_design',
    'stationary_phase_leading',
    'two_point_beat',
]
