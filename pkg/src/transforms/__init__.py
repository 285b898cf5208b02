"""
Cauchy transforms, conjugated transforms, decay probes and energy identities.
"""

from src.transforms.cauchy import (
    apply_transform,
    cauchy_jets,
    dbar_inverse,
    dz_inverse,
    dz_jets,
    local_polynomial_fit,
    weighted_integrand,
)
from src.transforms.decay import DECAY_MODES, DecayReport, decay_probe
from src.transforms.differential import PolarDifferentiator, periodic_derivative
from src.transforms.energy import ENERGY_CASES, energy_identity_check
from src.transforms.grid_function import GridFunction
from src.transforms.oscillatory import (
    check_budget,
    r_phi_tau,
    r_tilde_phi_tau,
    tau_max,
    transport_residual,
)

__all__ = [
    'DECAY_MODES',
    'DecayReport',
    'ENERGY_CASES',
    'GridFunction',
    'PolarDifferentiator',
    'apply_transform',
    'cauchy_jets',
    'check_budget',
    'dbar_inverse',
    'decay_probe',
    'dz_inverse',
    'dz_jets',
    'energy_identity_check',
    'local_polynomial_fit',
    'periodic_derivative',
    'r_phi_tau',
    'r_tilde_phi_tau',
    'tau_max',
    'transport_residual',
    'weighted_integrand',
]
