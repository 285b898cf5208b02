"""
L2 energy identities of the first-order operators 2 d/dz - tau Phi' and
2 d/dzbar - tau conj(Phi').
"""

import logging
from typing import Optional

import numpy as np

from src.geometry.domain import Domain
from src.holo.phase import PhaseFunction
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

ENERGY_CASES = ("dz_case", "dbar_case")


def energy_identity_check(v: GridFunction, phase: PhaseFunction, tau: float, which: str,
                          domain: Domain, method: Optional[str] = None) -> float:
    """
    Relative gap of the energy identity for v.

    dz_case, f = 2 v_z - tau Phi' v and w = exp(-i tau psi) v:
        ||w_x1||^2 + ||w_x2||^2 - tau int (grad phi, nu)|v|^2
            + Re int i (d_t v) conj(v) = ||f||^2
    dbar_case, f = 2 v_zbar - tau conj(Phi') v and w = exp(i tau psi) v:
        the same with -d_t v in the last boundary term.

    d_t is the tangential derivative nu_2 d/dx1 - nu_1 d/dx2.

    Args:
        v: Field; its boundary trace is used when present, else extrapolated
        phase: Holomorphic phase
        tau: Parameter
        which: 'dz_case' or 'dbar_case'
        domain: Discretized domain
        method: Differentiation mode

    Returns:
        |LHS - ||f||^2| / max(||f||^2, tiny)
    """
    if which not in ENERGY_CASES:
        raise ValueError(f"Unknown energy case '{which}', expected one of {ENERGY_CASES}")
    diff = PolarDifferentiator(domain, method)
    quad = domain.quadrature
    z = quad.z
    values = v.values
    slope = phase.dphi(z)
    psi = phase.psi(z)
    psi_x1, psi_x2 = np.imag(slope), np.real(slope)
    v_x1, v_x2 = diff.gradient(values)

    sign = -1.0 if which == "dz_case" else 1.0
    if which == "dz_case":
        f = 2.0 * diff.dz(values) - tau * slope * values
    else:
        f = 2.0 * diff.dzbar(values) - tau * np.conj(slope) * values

    # derivatives of w = exp(sign i tau psi) v, with the exponential differentiated exactly
    carrier = np.exp(sign * 1j * tau * psi)
    w_x1 = carrier * (v_x1 + sign * 1j * tau * psi_x1 * values)
    w_x2 = carrier * (v_x2 + sign * 1j * tau * psi_x2 * values)

    def sq_norm(field: np.ndarray) -> float:
        return float(np.real(quad.integrate(np.abs(field) ** 2)))

    trace = v.boundary if v.boundary is not None else diff.boundary_trace(values)
    tangential = diff.tangential(trace)
    if which == "dbar_case":
        tangential = -tangential
    flux_phi = np.real(phase.dphi(domain.boundary_z) * domain.normals)

    phi_term = -tau * float(np.real(domain.boundary_integrate(flux_phi * np.abs(trace) ** 2)))
    tangential_term = float(np.real(domain.boundary_integrate(1j * tangential * np.conj(trace))))
    lhs = sq_norm(w_x1) + sq_norm(w_x2) + phi_term + tangential_term
    rhs = sq_norm(f)

    gap = abs(lhs - rhs) / max(rhs, 1e-300)
    logger.debug(f"Energy identity {which} tau={tau:g}: lhs={lhs:.6e} rhs={rhs:.6e} gap={gap:.3e}")
    return gap
