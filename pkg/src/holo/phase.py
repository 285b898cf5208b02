"""
Holomorphic phases and their critical sets.

A PhaseFunction bundles Phi = phi + i psi with its located, validated
critical points. build_phase assembles Phi = u + eps p + delta w and searches
a decreasing eps schedule for a phase that passes validation.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import LabSettings
from src.exceptions import DomainSpecError, FitError, PhaseValidationError
from src.geometry.domain import Domain
from src.holo.fitting import JetSpec, fit_tangential_p, jet_interpolate
from src.holo.series import HolomorphicFunction

logger = logging.getLogger(__name__)

NEWTON_STEPS = 8


@dataclass(frozen=True)
class CriticalPoint:
    """A zero of Phi' with the data stationary phase needs."""

    z: complex
    second_derivative: complex
    im_phi: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "z": [self.z.real, self.z.imag],
            "second_derivative": [self.second_derivative.real, self.second_derivative.imag],
            "im_phi": self.im_phi,
        }


@dataclass(frozen=True, eq=False)
class PhaseFunction:
    """
    Holomorphic phase Phi with its critical set.

    Attributes:
        phi_holo: The power series Phi
        critical_points: Interior zeros of Phi', nondegenerate
        epsilon: Weight of the tangential correction p actually used
        delta: Weight of the separating perturbation w
        x_hat: Point the phase was built around, if any
    """

    phi_holo: HolomorphicFunction
    critical_points: Tuple[CriticalPoint, ...] = ()
    epsilon: float = 0.0
    delta: float = 0.0
    x_hat: Optional[complex] = None

    @classmethod
    def from_holomorphic(cls, phi: HolomorphicFunction, domain: Domain,
                         x_hat: Optional[complex] = None, epsilon: float = 0.0,
                         delta: float = 0.0) -> "PhaseFunction":
        """Locate the critical set of phi and wrap it."""
        points = find_critical_points(phi, domain)
        return cls(phi, tuple(points), epsilon, delta, x_hat)

    @property
    def derivative(self) -> HolomorphicFunction:
        return self.phi_holo.derivative(1)

    @property
    def r_polynomial(self) -> HolomorphicFunction:
        """r(z) = prod (z - z_k) over the critical set."""
        return HolomorphicFunction.from_roots([c.z for c in self.critical_points])

    @property
    def critical_z(self) -> np.ndarray:
        return np.array([c.z for c in self.critical_points], dtype=complex)

    @property
    def x_hat_eps(self) -> Optional[complex]:
        """Critical point closest to x_hat."""
        if self.x_hat is None or not self.critical_points:
            return None
        z = self.critical_z
        return complex(z[int(np.argmin(np.abs(z - self.x_hat)))])

    def __call__(self, z: Any) -> Any:
        return self.phi_holo(z)

    def phi(self, z: Any) -> Any:
        return np.real(self.phi_holo(z))

    def psi(self, z: Any) -> Any:
        return np.imag(self.phi_holo(z))

    def dphi(self, z: Any) -> Any:
        return self.derivative(z)

    def d2phi(self, z: Any) -> Any:
        return self.phi_holo.derivative(2)(z)

    def max_dphi(self, radius: float) -> float:
        """max |Phi'| over the closed disk, attained on the circle."""
        return self.derivative.max_abs_on_circle(radius)

    def to_dict(self) -> Dict[str, Any]:
        data = self.phi_holo.to_dict()
        data.update({
            "critical_points": [c.to_dict() for c in self.critical_points],
            "r_polynomial": self.r_polynomial.to_dict()["coefficients"],
            "epsilon": self.epsilon,
            "delta": self.delta,
        })
        if self.x_hat is not None:
            data["x_hat"] = [self.x_hat.real, self.x_hat.imag]
        return data


def _polish(phi: HolomorphicFunction, z: complex) -> complex:
    d1, d2 = phi.derivative(1), phi.derivative(2)
    for _ in range(NEWTON_STEPS):
        curvature = complex(d2(z))
        if curvature == 0:
            break
        step = complex(d1(z)) / curvature
        z = z - step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def find_critical_points(phi: HolomorphicFunction, domain: Domain,
                         clearance: Optional[float] = None) -> List[CriticalPoint]:
    """
    Interior zeros of Phi', polished by Newton and classified.

    Args:
        phi: Phase as a power series
        domain: Discretized domain
        clearance: Minimum distance to the boundary, 2 grid spacings by default

    Returns:
        Critical points sorted by position

    Raises:
        PhaseValidationError: On a degenerate interior critical point or one
            within the boundary clearance
    """
    if clearance is None:
        clearance = 2.0 * domain.grid_spacing
    R = domain.radius
    d1 = phi.derivative(1)
    d2 = phi.derivative(2)
    if np.all(d1.coefficients == 0):
        raise PhaseValidationError("Phi' vanishes identically", diagnostics={"degree": phi.degree})

    curvature_scale = max(d2.max_abs_on_circle(R), 1e-300)
    degeneracy_tol = LabSettings.NONDEGENERACY_RTOL * curvature_scale

    candidates = [_polish(phi, complex(z)) for z in d1.roots()]
    candidates = [z for z in candidates if abs(z) < R + clearance]

    merged: List[complex] = []
    for z in sorted(candidates, key=lambda c: (round(c.real, 12), round(c.imag, 12))):
        if any(abs(z - m) < 1e-8 * R for m in merged):
            raise PhaseValidationError(
                f"Repeated critical point near {z:.6g}: Phi'' vanishes there",
                diagnostics={"z": [z.real, z.imag], "kind": "degenerate"},
            )
        merged.append(z)

    points: List[CriticalPoint] = []
    for z in merged:
        if R - abs(z) < clearance:
            raise PhaseValidationError(
                f"Critical point {z:.6g} within clearance {clearance:.3e} of the boundary",
                diagnostics={"z": [z.real, z.imag], "kind": "boundary", "clearance": clearance},
            )
        second = complex(d2(z))
        if abs(second) < degeneracy_tol:
            raise PhaseValidationError(
                f"Degenerate critical point at {z:.6g}: |Phi''| = {abs(second):.3e} < {degeneracy_tol:.3e}",
                diagnostics={"z": [z.real, z.imag], "kind": "degenerate", "second_derivative": abs(second)},
            )
        points.append(CriticalPoint(z=z, second_derivative=second, im_phi=float(np.imag(phi(z)))))

    logger.debug(f"Located {len(points)} critical points of a degree {phi.degree} phase")
    return points


@dataclass
class PhaseReport:
    """Validation measurements of a phase and their pass/fail flags."""

    im_phi_gamma0_max: float
    separation_min: float
    separation_x_hat: float
    min_second_derivative: float
    boundary_clearance: float
    n_critical: int
    gamma0_tol: float
    separation_tol: float
    nondegeneracy_tol: float
    clearance_tol: float
    gamma0_ok: bool
    separated: bool
    nondegenerate: bool
    clear_of_boundary: bool

    @property
    def passed(self) -> bool:
        return (self.n_critical > 0 and self.gamma0_ok and self.separated
                and self.nondegenerate and self.clear_of_boundary)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def validate_phase(phase: PhaseFunction, domain: Domain, x_hat: Optional[complex] = None) -> PhaseReport:
    """
    Measure the phase conditions.

    Args:
        phase: Phase to check
        domain: Discretized domain
        x_hat: Distinguished point; the critical point nearest to it plays x_hat(eps)

    Returns:
        PhaseReport
    """
    R = domain.radius
    g0 = domain.boundary_z[domain.on_gamma0]
    im_gamma0 = float(np.max(np.abs(phase.psi(g0)))) if g0.size else 0.0
    boundary_scale = max(1.0, float(np.max(np.abs(phase(domain.boundary_z)))))

    points = phase.critical_points
    im_values = np.array([c.im_phi for c in points])
    spread = float(np.ptp(im_values)) if im_values.size else 0.0
    separation_tol = LabSettings.SEPARATION_RTOL * max(spread, 1.0)

    if len(points) > 1:
        gaps = np.abs(im_values[:, None] - im_values[None, :])[np.triu_indices(len(points), 1)]
        separation_min = float(np.min(gaps))
    else:
        separation_min = float("inf")

    anchor = x_hat if x_hat is not None else phase.x_hat
    separation_x_hat = float("inf")
    if anchor is not None and len(points) > 1:
        z = phase.critical_z
        k = int(np.argmin(np.abs(z - anchor)))
        others = np.delete(im_values, k)
        separation_x_hat = float(np.min(np.abs(others - im_values[k])))

    curvature_scale = max(phase.phi_holo.derivative(2).max_abs_on_circle(R), 1e-300)
    nondegeneracy_tol = LabSettings.NONDEGENERACY_RTOL * curvature_scale
    min_second = float(min((abs(c.second_derivative) for c in points), default=float("inf")))
    clearance = float(min((R - abs(c.z) for c in points), default=R))
    clearance_tol = 2.0 * domain.grid_spacing

    report = PhaseReport(
        im_phi_gamma0_max=im_gamma0,
        separation_min=separation_min,
        separation_x_hat=separation_x_hat,
        min_second_derivative=min_second,
        boundary_clearance=clearance,
        n_critical=len(points),
        gamma0_tol=LabSettings.IM_PHI_GAMMA0_TOL * boundary_scale,
        separation_tol=separation_tol,
        nondegeneracy_tol=nondegeneracy_tol,
        clearance_tol=clearance_tol,
        gamma0_ok=im_gamma0 <= LabSettings.IM_PHI_GAMMA0_TOL * boundary_scale,
        separated=separation_min > separation_tol,
        nondegenerate=min_second >= nondegeneracy_tol,
        clear_of_boundary=clearance >= clearance_tol,
    )
    logger.debug(f"Phase report: {report.to_dict()}")
    return report


def _separating_jets(points: np.ndarray, anchor: complex) -> JetSpec:
    """w(anchor) = i, w(other) = 0, w' = 0 and w'' = 1 at every point."""
    values = [(1j if abs(z - anchor) == 0 else 0.0, 0.0, 1.0) for z in points]
    return JetSpec(points, values)


def _attempt(domain: Domain, x_hat: complex, u: HolomorphicFunction, p: Optional[HolomorphicFunction],
             eps: float, delta: float, d_w: Optional[int]) -> Tuple[Optional[PhaseFunction], Dict[str, Any]]:
    diagnostics: Dict[str, Any] = {"epsilon": eps}
    try:
        base = u if p is None else u + eps * p
        base_points = find_critical_points(base, domain)
        if not base_points:
            diagnostics["failure"] = "no interior critical point"
            return None, diagnostics
        phi = base
        if delta > 0:
            z = np.array([c.z for c in base_points])
            anchor = complex(z[int(np.argmin(np.abs(z - x_hat)))])
            degree = d_w if d_w is not None else 3 * len(base_points) + LabSettings.PHASE_DEGREE_W_MARGIN
            w = jet_interpolate(domain, _separating_jets(z, anchor), degree)
            phi = base + delta * w
        phase = PhaseFunction.from_holomorphic(phi, domain, x_hat=x_hat, epsilon=eps, delta=delta)
    except (PhaseValidationError, FitError) as e:
        diagnostics["failure"] = str(e)
        return None, diagnostics

    report = validate_phase(phase, domain, x_hat)
    diagnostics["report"] = report.to_dict()
    if not report.gamma0_ok:
        diagnostics["failure"] = (f"max |Im Phi| on Gamma_0 = {report.im_phi_gamma0_max:.3e} "
                                  f"above {report.gamma0_tol:.3e}")
        return None, diagnostics
    if not report.passed:
        diagnostics["failure"] = "validation failed"
        return None, diagnostics
    return phase, diagnostics


def build_phase(domain: Domain, x_hat: complex, epsilon: float, delta: float,
                degrees: Optional[Tuple[int, int, Optional[int]]] = None,
                max_attempts: Optional[int] = None, workers: int = 1) -> PhaseFunction:
    """
    Build Phi = u + eps p + delta w around x_hat and validate it.

    u carries the jet (0, 0, 1) at x_hat with Im u ~ 0 on Gamma_0 and Re u
    strictly monotone there, p has Re p ~ 0 and a negative tangential
    derivative of Im p on Gamma_0, and w lifts Im Phi at the critical point
    nearest x_hat without moving the critical set. Im p does not vanish on
    Gamma_0, so a candidate failing the Gamma_0 condition or any other
    check has eps halved and the phase rebuilt.

    Args:
        domain: Discretized domain
        x_hat: Interior point
        epsilon: Initial weight of p
        delta: Weight of w
        degrees: (d_u, d_p, d_w); d_w None means 3m + margin. d_u = 2 gives
            the plain quadratic (z - x_hat)^2 / 2
        max_attempts: Length of the eps schedule
        workers: Threads used to evaluate the schedule

    Returns:
        Validated PhaseFunction

    Raises:
        DomainSpecError: If x_hat is not interior
        PhaseValidationError: If no candidate in the schedule validates
    """
    if abs(x_hat) >= domain.radius:
        raise DomainSpecError(f"x_hat {x_hat} is not interior")
    d_u, d_p, d_w = degrees if degrees is not None else (
        LabSettings.PHASE_DEGREE_U, LabSettings.PHASE_DEGREE_P, None)
    attempts = max_attempts if max_attempts is not None else LabSettings.PHASE_RETRY_BUDGET

    margin = LabSettings.TANGENTIAL_MARGIN * domain.radius
    u = jet_interpolate(domain, JetSpec([x_hat], [(0.0, 0.0, 1.0)]), d_u, margin=margin)
    p = fit_tangential_p(domain, d_p) if epsilon != 0 else None
    schedule = [epsilon * 2.0 ** (-k) for k in range(attempts)] if epsilon != 0 else [0.0]

    def run(eps: float):
        return _attempt(domain, x_hat, u, p, eps, delta, d_w)

    history: List[Dict[str, Any]] = []
    if workers > 1 and len(schedule) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run, schedule))
    else:
        outcomes = []
        for eps in schedule:
            outcomes.append(run(eps))
            if outcomes[-1][0] is not None:
                break

    # schedule order decides, not completion order
    for phase, diagnostics in outcomes:
        history.append(diagnostics)
        if phase is not None:
            logger.info(
                f"Phase built at x_hat={x_hat}: eps={phase.epsilon:g}, delta={delta:g}, "
                f"{len(phase.critical_points)} critical points"
            )
            return phase

    logger.error(f"Phase construction at x_hat={x_hat} failed after {len(history)} attempts")
    raise PhaseValidationError(
        f"No valid phase after {len(history)} attempts: {history[-1].get('failure')}",
        diagnostics={"attempts": history},
    )


def critical_set_distance(first: Sequence[complex], second: Sequence[complex]) -> float:
    """Hausdorff distance between two finite point sets."""
    a = np.asarray(first, dtype=complex).ravel()
    b = np.asarray(second, dtype=complex).ravel()
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(np.max(np.min(d, axis=1)), np.max(np.min(d, axis=0))))


@dataclass
class BoundaryPhaseIdentity:
    """(grad phi, nu) and the tangential derivative of psi at Gamma_0 nodes."""

    normal_flux: np.ndarray = field(repr=False)
    tangential_psi: np.ndarray = field(repr=False)
    max_identity_gap: float = 0.0
    max_normal_flux: float = 0.0


def boundary_phase_identity(phase: PhaseFunction, domain: Domain) -> BoundaryPhaseIdentity:
    """
    Compare (grad phi, nu) with the tangential derivative of psi on Gamma_0.

    The normal flux is exact, Re(Phi' nu). The tangential derivative
    -(1/R) d/dtheta is spectral on the boundary samples of psi. With the
    tangent -i nu the two sum to zero; (grad phi, nu) itself vanishes on
    Gamma_0 when Im Phi does.
    """
    n = domain.boundary_z.size
    flux = np.real(phase.dphi(domain.boundary_z) * domain.normals)
    psi_hat = np.fft.fft(phase.psi(domain.boundary_z))
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    dpsi_dtheta = np.real(np.fft.ifft(1j * k * psi_hat))
    tangential = -dpsi_dtheta / domain.radius

    g0 = domain.on_gamma0
    gap = flux[g0] + tangential[g0]
    return BoundaryPhaseIdentity(
        normal_flux=flux[g0],
        tangential_psi=tangential[g0],
        max_identity_gap=float(np.max(np.abs(gap))),
        max_normal_flux=float(np.max(np.abs(flux[g0]))),
    )
