"""
Stationary-phase data of the critical set and the two sides of the
stationary-phase expansion for oscillations exp(+-2 i tau Im Phi).
"""

import logging
from typing import Callable, NamedTuple, Optional, Tuple, Union

import numpy as np

from config.settings import LabSettings
from src.exceptions import HypothesisError, PhaseValidationError
from src.geometry.bumps import c2_bump
from src.geometry.domain import Domain, DomainSpec, build_domain
from src.holo.phase import PhaseFunction
from src.holo.series import HolomorphicFunction
from src.transforms.cauchy import local_polynomial_fit
from src.transforms.grid_function import GridFunction
from src.transforms.oscillatory import check_budget

logger = logging.getLogger(__name__)

SampledOrCallable = Union[GridFunction, Callable[[np.ndarray], np.ndarray]]


class HessianData(NamedTuple):
    det: float
    signature: int
    im_phi: float

    @property
    def sqrt_abs_det(self) -> float:
        return float(np.sqrt(abs(self.det)))


def hessian_data(phase: PhaseFunction, z_crit: complex) -> HessianData:
    """
    Hessian of psi = Im Phi at a critical point.

    In (x1, x2) the Hessian is [[Im Phi'', Re Phi''], [Re Phi'', -Im Phi'']], so
    det = -|Phi''|**2 and the signature is 0.

    Raises:
        PhaseValidationError: If z_crit is not a nondegenerate critical point
    """
    z_crit = complex(z_crit)
    scale = max(1.0, float(np.max(np.abs(phase.phi_holo.coefficients))))
    slope = complex(phase.dphi(z_crit))
    if abs(slope) > LabSettings.NONDEGENERACY_RTOL * scale:
        raise PhaseValidationError(f"{z_crit:.4g} is not a critical point: |Phi'| = {abs(slope):.2e}",
                                   diagnostics={"kind": "not_critical", "dphi": abs(slope)})
    second = complex(phase.d2phi(z_crit))
    if abs(second) <= LabSettings.NONDEGENERACY_RTOL * scale:
        raise PhaseValidationError(f"degenerate critical point {z_crit:.4g}: |Phi''| = {abs(second):.2e}",
                                   diagnostics={"kind": "degenerate", "d2phi": abs(second)})
    hessian = np.array([[second.imag, second.real], [second.real, -second.imag]])
    eigenvalues = np.linalg.eigvalsh(hessian)
    signature = int(np.sum(eigenvalues > 0) - np.sum(eigenvalues < 0))
    return HessianData(det=-abs(second) ** 2, signature=signature, im_phi=float(np.imag(phase(z_crit))))


def _point_value(h: SampledOrCallable, domain: Domain, z0: complex) -> complex:
    if isinstance(h, GridFunction):
        exps, coef, _ = local_polynomial_fit(h.values.ravel(), domain, z0, 4)
        return complex(coef[np.flatnonzero((exps[:, 0] == 0) & (exps[:, 1] == 0))[0]])
    return complex(np.asarray(h(np.array([z0], dtype=complex))).ravel()[0])


def _sampled(h: SampledOrCallable, domain: Domain) -> np.ndarray:
    if isinstance(h, GridFunction):
        return h.values
    return np.asarray(h(domain.quadrature.z), dtype=complex)


def oscillatory_integral(h: SampledOrCallable, phase: PhaseFunction, tau: float, domain: Domain) -> complex:
    """
    int h (exp(tau(Phi - conj Phi)) + exp(tau(conj Phi - Phi))) dx = int h 2 cos(2 tau psi) dx.

    Raises:
        OscillationBudgetError: If tau exceeds the grid budget
    """
    if tau != 0:
        check_budget(phase, tau, domain)
    psi = phase.psi(domain.quadrature.z)
    value = complex(domain.quadrature.integrate(_sampled(h, domain) * 2.0 * np.cos(2.0 * tau * psi)))
    logger.debug(f"Oscillatory integral at tau={tau:g}: {value:.6e}")
    return value


def stationary_phase_leading(h: SampledOrCallable, phase: PhaseFunction, tau: float, domain: Domain) -> complex:
    """
    2 pi sum_k h(z_k) cos(2 tau Im Phi(z_k)) / (tau |det Im Phi''(z_k)|**0.5).

    Raises:
        HypothesisError: If tau is zero
        PhaseValidationError: If a critical point is degenerate
    """
    if tau == 0:
        raise HypothesisError("the stationary-phase leading term needs tau != 0")
    total = 0j
    for point in phase.critical_points:
        data = hessian_data(phase, point.z)
        value = _point_value(h, domain, point.z)
        total += 2.0 * np.pi * value * np.cos(2.0 * tau * data.im_phi) / (tau * data.sqrt_abs_det)
    return complex(total)


BEAT_COEFFICIENTS = (0.1j, -1j, 0.0, 4j / 3)
BEAT_TAU = 50.0
BEAT_SPEC = DomainSpec(kind="unit_disk", radius=1.0, radial_nodes=256, angular_nodes=2048)


class BeatResult(NamedTuple):
    tau: float
    direct: complex
    leading: complex
    critical_points: Tuple[complex, ...]
    im_phi: Tuple[float, ...]

    @property
    def relative_error(self) -> float:
        return float(abs(self.direct / self.leading - 1.0))

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "direct": [self.direct.real, self.direct.imag],
            "leading": [self.leading.real, self.leading.imag],
            "critical_points": [[z.real, z.imag] for z in self.critical_points],
            "im_phi": list(self.im_phi),
            "relative_error": self.relative_error,
        }


def two_point_beat(tau: float = BEAT_TAU, domain: Optional[Domain] = None, support: float = 0.95) -> BeatResult:
    """
    Direct quadrature against the two-point leading term for Phi = 0.1i - i z + 4i z**3 / 3.

    Phi' = i(4 z**2 - 1) vanishes at +-1/2 with Im Phi = -7/30 and 13/30, so the leading term
    2 pi sum_k h(z_k) cos(2 tau Im Phi(z_k)) / (4 tau) beats in tau. h is a C2 bump of radius
    ``support`` centered at the origin.

    Raises:
        OscillationBudgetError: If the grid cannot carry tau
    """
    domain = build_domain(BEAT_SPEC) if domain is None else domain
    phase = PhaseFunction.from_holomorphic(HolomorphicFunction(list(BEAT_COEFFICIENTS)), domain, x_hat=0.5)
    if len(phase.critical_points) != 2:
        raise PhaseValidationError(f"expected two critical points, found {len(phase.critical_points)}",
                                   diagnostics={"kind": "critical_count", "n": len(phase.critical_points)})

    def h(z):
        return c2_bump(z, 0j, support)

    direct = oscillatory_integral(h, phase, tau, domain)
    leading = stationary_phase_leading(h, phase, tau, domain)
    points = tuple(complex(c.z) for c in phase.critical_points)
    result = BeatResult(float(tau), direct, leading, points, tuple(float(phase.psi(z)) for z in points))
    logger.info(f"Two-point beat at tau={tau:g}: direct {direct:.5e}, leading {leading:.5e}, "
                f"relative error {result.relative_error:.3e}")
    return result
