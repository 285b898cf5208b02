"""
Conjugated transforms R_{Phi,tau} and R~_{Phi,tau}, the oscillation budget and
transport-equation residuals.
"""

import logging
from math import ceil
from typing import Optional, Union

import numpy as np

from config.settings import LabSettings
from src.exceptions import OscillationBudgetError
from src.geometry.domain import Domain
from src.holo.phase import PhaseFunction
from src.transforms.cauchy import apply_transform, dbar_inverse, dz_inverse, weighted_integrand
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

TRANSPORT_KINDS = ("r", "r_tilde")


def tau_max(phase: PhaseFunction, domain: Domain) -> float:
    """Largest |tau| with POINTS_PER_OSCILLATION angular nodes per period of exp(2i tau psi)."""
    slope = phase.max_dphi(domain.radius)
    if slope == 0:
        return float("inf")
    return domain.spec.angular_nodes / (LabSettings.POINTS_PER_OSCILLATION * slope * domain.radius)


def check_budget(phase: PhaseFunction, tau: float, domain: Domain) -> None:
    """
    Raise if tau is beyond the oscillation budget of the grid.

    Raises:
        OscillationBudgetError: Naming the angular resolution tau needs
    """
    limit = tau_max(phase, domain)
    if abs(tau) <= limit * (1.0 + 1e-12):
        return
    required = ceil(LabSettings.POINTS_PER_OSCILLATION * abs(tau) * phase.max_dphi(domain.radius) * domain.radius)
    required += required % 2
    raise OscillationBudgetError(
        f"tau={tau:g} exceeds the oscillation budget tau_max={limit:.4g} of a "
        f"{domain.spec.angular_nodes}-node angular grid; use at least {required} angular nodes",
        tau=tau,
        tau_max=limit,
        required_angular_nodes=required,
    )


def _unweight(result, domain: Domain, phase: PhaseFunction, tau: float, targets, conjugate: bool):
    """Apply conj if requested, then multiply by exp(-2i tau psi) at the targets."""
    if targets is None:
        interior, boundary = result
        if conjugate:
            interior = np.conj(interior)
            boundary = None if boundary is None else np.conj(boundary)
        interior = interior * np.exp(-2j * tau * phase.psi(domain.quadrature.z))
        if boundary is not None:
            boundary = boundary * np.exp(-2j * tau * phase.psi(domain.boundary_z))
        return GridFunction(interior, boundary)
    points = np.atleast_1d(np.asarray(targets, dtype=complex)).ravel()
    values = np.conj(result) if conjugate else result
    return values * np.exp(-2j * tau * phase.psi(points))


def r_phi_tau(g: GridFunction, phase: PhaseFunction, tau: float, domain: Domain,
              targets: Optional[np.ndarray] = None) -> Union[GridFunction, np.ndarray]:
    """
    R_{Phi,tau} g = exp(tau(conj Phi - Phi)) T(g exp(tau(Phi - conj Phi))).

    Args:
        g: Sampled input
        phase: Holomorphic phase
        tau: Large parameter, any sign
        domain: Discretized domain
        targets: As for dbar_inverse

    Returns:
        GridFunction (node output) or complex array

    Raises:
        OscillationBudgetError: If |tau| exceeds the grid budget
    """
    if tau == 0:
        return dbar_inverse(g, domain, targets)
    check_budget(phase, tau, domain)
    result = apply_transform(weighted_integrand(g, domain, phase, tau), domain, targets)
    return _unweight(result, domain, phase, tau, targets, conjugate=False)


def r_tilde_phi_tau(g: GridFunction, phase: PhaseFunction, tau: float, domain: Domain,
                    targets: Optional[np.ndarray] = None) -> Union[GridFunction, np.ndarray]:
    """R~_{Phi,tau} g = exp(tau(conj Phi - Phi)) dz_inverse(g exp(tau(Phi - conj Phi)))."""
    if tau == 0:
        return dz_inverse(g, domain, targets)
    check_budget(phase, tau, domain)
    # conj(g E_tau) = conj(g) E_{-tau}
    result = apply_transform(weighted_integrand(g.conj(), domain, phase, -tau), domain, targets)
    return _unweight(result, domain, phase, tau, targets, conjugate=True)


def transport_residual(transformed: GridFunction, g: GridFunction, phase: PhaseFunction, tau: float,
                       domain: Domain, kind: str = "r", method: str = "spectral",
                       mask: Optional[np.ndarray] = None) -> float:
    """
    Relative sup residual of the transport equation on interior nodes.

    kind 'r':       d/dzbar(R g) - tau conj(Phi') R g - g
    kind 'r_tilde': d/dz(R~ g)   + tau Phi' R~ g     - g

    Args:
        transformed: R g or R~ g on the grid
        g: The input g
        phase: Phase used for the transform
        tau: Parameter used for the transform
        domain: Discretized domain
        kind: Which equation
        method: Differentiation mode
        mask: Nodes to measure on; defaults to the differentiator's interior mask

    Returns:
        sup |residual| / max(sup |g|, tiny)
    """
    if kind not in TRANSPORT_KINDS:
        raise ValueError(f"Unknown transport kind '{kind}', expected one of {TRANSPORT_KINDS}")
    diff = PolarDifferentiator(domain, method)
    slope = phase.dphi(domain.quadrature.z)
    v = transformed.values
    if kind == "r":
        residual = diff.dzbar(v) - tau * np.conj(slope) * v - g.values
    else:
        residual = diff.dz(v) + tau * slope * v - g.values
    if mask is None:
        mask = diff.interior_mask()
    scale = max(g.sup(), 1e-300)
    value = float(np.max(np.abs(residual[mask]))) / scale
    logger.debug(f"Transport residual ({kind}, tau={tau:g}, {method}): {value:.3e}")
    return value
