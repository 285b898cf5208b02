"""
Carleman-weighted solvability and the boundary Carleman estimate.

carleman_solve works with w = u exp(-tau phi), which solves the conjugated
equation

    Laplacian(w) + 2 tau grad(phi) . grad(w) + (tau^2 |Phi'|^2 + q0) w = f exp(-tau phi)

so neither exp(tau phi) nor its reciprocal is ever formed on the grid.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import LabSettings
from src.exceptions import DomainSpecError, HypothesisError
from src.geometry.domain import Domain
from src.holo.phase import PhaseFunction
from src.pde.solver import assemble_operator, grid_gamma_tilde, least_norm_system, solve_least_norm, solve_operator
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

REAL_RTOL = 1e-12
VANISHING_RTOL = 1e-8
SELECTIONS = ("dirichlet", "least_norm")


@dataclass(frozen=True, eq=False)
class CarlemanSolveResult:
    """
    Weighted remainder and its bound ratio.

    Attributes:
        weighted: w = u exp(-tau phi) with its boundary trace
        tau: Parameter
        ratio: ||w|| / (||f exp(-tau phi)|| / sqrt|tau| + ||g exp(-tau phi)||_Gamma0)
        flagged: ratio exceeded the configured ceiling
        residual: Backward error of the weighted solve
        image: The discrete conjugated operator applied to w
        selection: Which solution was selected, see SELECTIONS
    """

    weighted: GridFunction
    tau: float
    ratio: float
    flagged: bool
    residual: float
    phi_interior: np.ndarray = field(repr=False)
    phi_boundary: np.ndarray = field(repr=False)
    image: Optional[np.ndarray] = field(default=None, repr=False)
    selection: str = "dirichlet"

    def unweighted(self) -> GridFunction:
        """u = w exp(tau phi); may overflow for large tau phi."""
        return GridFunction(
            self.weighted.values * np.exp(self.tau * self.phi_interior),
            self.weighted.boundary * np.exp(self.tau * self.phi_boundary),
        )


def _gamma0_data(g: Optional[np.ndarray], domain: Domain) -> np.ndarray:
    full = np.zeros(domain.boundary_z.size, dtype=complex)
    if g is None:
        return full
    g = np.asarray(g, dtype=complex).ravel()
    mask = domain.on_gamma0
    if g.size == full.size:
        full[mask] = g[mask]
    elif g.size == int(mask.sum()):
        full[mask] = g
    else:
        raise DomainSpecError(f"Gamma_0 data has {g.size} values, expected {int(mask.sum())} or {full.size}")
    return full


def conjugated_coefficients(phase: PhaseFunction, tau: float, domain: Domain):
    """(c, b_r, b_theta) of the operator conjugated by exp(tau phi)."""
    quad = domain.quadrature
    z = quad.z
    rr = quad.r[:, None]
    slope = phase.dphi(z) * np.exp(1j * quad.theta)[None, :]
    phi_r = np.real(slope)
    phi_theta = -rr * np.imag(slope)
    c = tau ** 2 * np.abs(phase.dphi(z)) ** 2
    return c, 2.0 * tau * phi_r, 2.0 * tau * phi_theta / rr ** 2


def carleman_solve_many(q0, problems: Sequence[Tuple[Optional[GridFunction], Optional[np.ndarray]]],
                        phase: PhaseFunction, tau: float, domain: Domain, tau0: Optional[float] = None,
                        c_max: Optional[float] = None, weighted: bool = False,
                        selection: str = "dirichlet") -> List[CarlemanSolveResult]:
    """
    carleman_solve for several (f, g) pairs sharing q0, the phase and tau; one factorization.

    Selections:
        dirichlet:  u = 0 on Gamma_tilde as well
        least_norm: the solution of least weighted nodal 2-norm, Gamma_tilde values free

    Raises:
        HypothesisError: If |tau| < tau0
        SolverError: If the weighted system is near singular
        ValueError: For an unknown selection
    """
    if selection not in SELECTIONS:
        raise ValueError(f"Unknown selection '{selection}', expected one of {SELECTIONS}")
    tau0 = LabSettings.get_tau0() if tau0 is None else tau0
    c_max = LabSettings.get_c_max() if c_max is None else c_max
    if abs(tau) < tau0:
        raise HypothesisError(f"|tau| = {abs(tau):g} is below the Carleman threshold tau0 = {tau0:g}")

    quad = domain.quadrature
    phi_in = phase.phi(quad.z)
    phi_bd = phase.phi(domain.boundary_z)
    c, b_r, b_theta = conjugated_coefficients(phase, tau, domain)
    q_values = getattr(q0, "values", q0)
    operator = assemble_operator(domain, c=c + np.asarray(q_values, dtype=complex), b_r=b_r, b_theta=b_theta)
    system = least_norm_system(operator, grid_gamma_tilde(domain)) if selection == "least_norm" else None

    results = []
    for f, g in problems:
        g_full = _gamma0_data(g, domain)
        f_values = np.zeros(quad.shape, dtype=complex) if f is None else f.values
        if weighted:
            g_weighted, f_weighted = g_full, np.asarray(f_values, dtype=complex)
        else:
            g_weighted = g_full * np.exp(-tau * phi_bd)
            f_weighted = f_values * np.exp(-tau * phi_in)

        if system is None:
            solution = solve_operator(operator, f_weighted, g_weighted, domain)
        else:
            solution = solve_least_norm(system, f_weighted, g_weighted, domain)

        w = solution.field
        numerator = w.norm_l2(domain)
        denominator = (GridFunction(f_weighted).norm_l2(domain) / np.sqrt(abs(tau))
                       + GridFunction(w.values, g_weighted).boundary_norm_l2(domain, domain.on_gamma0))
        if denominator > 0:
            ratio = numerator / denominator
        else:
            ratio = 0.0 if numerator == 0 else float("inf")
        flagged = bool(ratio > c_max)
        if flagged:
            logger.warning(f"Carleman bound ratio {ratio:.3e} exceeds C_max = {c_max:g} at tau = {tau:g}")
        else:
            logger.debug(f"Carleman solve tau={tau:g} ({selection}): ratio {ratio:.3e}, "
                         f"residual {solution.residual:.2e}")

        results.append(CarlemanSolveResult(
            weighted=w,
            tau=float(tau),
            ratio=float(ratio),
            flagged=flagged,
            residual=solution.residual,
            phi_interior=phi_in,
            phi_boundary=phi_bd,
            image=solution.image,
            selection=selection,
        ))
    return results


def carleman_solve(q0, f: Optional[GridFunction], g: Optional[np.ndarray], phase: PhaseFunction,
                   tau: float, domain: Domain, tau0: Optional[float] = None,
                   c_max: Optional[float] = None, weighted: bool = False,
                   selection: str = "dirichlet") -> CarlemanSolveResult:
    """
    Solve Laplacian(u) + q0 u = f with u = g on Gamma_0.

    The default selection also sets u = 0 on Gamma_tilde. With least_norm the
    Gamma_tilde values are unknowns and the smallest weighted solution is kept,
    which is the one the weighted bound speaks about.

    Args:
        q0: Potential or grid values
        f: Source, None for zero
        g: Gamma_0 data, at the Gamma_0 nodes or at every boundary node
        phase: Validated phase
        tau: Parameter, |tau| >= tau0
        domain: Discretized domain
        tau0: Threshold, LabSettings.get_tau0() by default
        c_max: Flagging ceiling for the bound ratio, LabSettings.get_c_max() by default
        weighted: f and g are already multiplied by exp(-tau phi)
        selection: 'dirichlet' or 'least_norm'

    Returns:
        CarlemanSolveResult

    Raises:
        HypothesisError: If |tau| < tau0
        SolverError: If the weighted system is near singular
    """
    return carleman_solve_many(q0, [(f, g)], phase, tau, domain, tau0, c_max, weighted, selection)[0]


@dataclass
class CarlemanReport:
    """
    Weighted norms of the boundary Carleman estimate per tau.

    lhs_terms rows: tau ||u W||^2, ||u W||_H1^2, ||du/dnu W||^2 on Gamma_0,
    tau^2 || |Phi'| u W ||^2. rhs_terms rows: ||Laplacian(u) W||^2,
    tau ||du/dnu W||^2 on Gamma_tilde. W = exp(tau phi).

    For a fixed u the ratio falls with tau (like tau^-2 when u and its flux
    vanish on the boundary), so stability is measured on the covering
    constant C_k = max of the ratios up to tau_k, not on the raw ratios.
    """

    tau_values: List[float]
    lhs_terms: List[List[float]]
    rhs_terms: List[List[float]]
    ratios: List[float]
    ratio_max: float = 0.0

    @property
    def covering_constants(self) -> List[float]:
        return [float(c) for c in np.maximum.accumulate(self.ratios)] if self.ratios else []

    @property
    def stability(self) -> float:
        """max / min of the nonzero covering constants across the sweep."""
        nonzero = [c for c in self.covering_constants if c > 0]
        if not nonzero:
            return 1.0
        return max(nonzero) / min(nonzero)

    @property
    def ratio_spread(self) -> float:
        """max / min of the nonzero raw ratios."""
        nonzero = [r for r in self.ratios if r > 0]
        if not nonzero:
            return 1.0
        return max(nonzero) / min(nonzero)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["covering_constants"] = self.covering_constants
        data["stability"] = self.stability
        data["ratio_spread"] = self.ratio_spread
        return data


def _check_h10(u: GridFunction, diff: PolarDifferentiator) -> np.ndarray:
    scale = max(u.sup(), 1e-300)
    if float(np.max(np.abs(np.imag(u.values)))) > REAL_RTOL * scale:
        raise HypothesisError("the Carleman estimate check needs a real-valued u")
    values = np.real(u.values)
    trace = u.boundary if u.boundary is not None else diff.boundary_trace(values)
    if float(np.max(np.abs(trace))) > VANISHING_RTOL * scale:
        raise HypothesisError(f"u does not vanish on the boundary: max |u| there is {np.max(np.abs(trace)):.3e}")
    return values


def carleman_estimate_check(u: GridFunction, phase: PhaseFunction, tau_sweep: Sequence[float],
                            domain: Domain, method: Optional[str] = None) -> CarlemanReport:
    """
    Evaluate both sides of the boundary Carleman estimate for u in H1_0.

    Args:
        u: Real field vanishing on the boundary
        phase: Holomorphic phase, phi = Re Phi
        tau_sweep: Parameters to evaluate
        domain: Discretized domain
        method: Differentiation mode

    Returns:
        CarlemanReport with the four left and two right terms per tau

    Raises:
        HypothesisError: If u is complex or does not vanish on the boundary
    """
    diff = PolarDifferentiator(domain, method)
    values = _check_h10(u, diff)
    quad = domain.quadrature
    z = quad.z
    slope = phase.dphi(z)
    phi = phase.phi(z)
    phi_bd = phase.phi(domain.boundary_z)
    u_x1, u_x2 = (np.real(d) for d in diff.gradient(values))
    lap = np.real(diff.laplacian(values))
    flux_sq = np.abs(diff.normal_derivative(values)) ** 2

    def sq(field: np.ndarray) -> float:
        return float(np.real(quad.integrate(np.abs(field) ** 2)))

    taus, lhs_rows, rhs_rows, ratios = [], [], [], []
    for tau in tau_sweep:
        tau = float(tau)
        W = np.exp(tau * phi)
        W_bd = np.exp(2.0 * tau * phi_bd)
        uW = values * W
        grad_x1 = W * (u_x1 + tau * values * np.real(slope))
        grad_x2 = W * (u_x2 - tau * values * np.imag(slope))
        lhs = [
            tau * sq(uW),
            sq(uW) + sq(grad_x1) + sq(grad_x2),
            float(np.real(domain.boundary_integrate(flux_sq * W_bd, domain.on_gamma0))),
            tau ** 2 * sq(np.abs(slope) * uW),
        ]
        rhs = [
            sq(lap * W),
            tau * float(np.real(domain.boundary_integrate(flux_sq * W_bd, domain.on_gamma_tilde))),
        ]
        total_l, total_r = sum(lhs), sum(rhs)
        if total_r > 0:
            ratio = total_l / total_r
        else:
            ratio = 0.0 if total_l == 0 else float("inf")
        taus.append(tau)
        lhs_rows.append(lhs)
        rhs_rows.append(rhs)
        ratios.append(float(ratio))

    report = CarlemanReport(taus, lhs_rows, rhs_rows, ratios, max(ratios) if ratios else 0.0)
    logger.info(f"Carleman estimate over tau {taus}: max ratio {report.ratio_max:.3e}, "
                f"stability {report.stability:.2f}")
    return report


def random_h10_samples(domain: Domain, n: int, rng: np.random.Generator, max_frequency: int = 2) -> List[GridFunction]:
    """
    Smooth real fields (1 - r^2 / R^2) p(x1, x2), p a random trigonometric polynomial.

    The boundary trace is set to exactly zero.
    """
    R = domain.radius
    freqs = [(m, k) for m in range(max_frequency + 1) for k in range(-max_frequency, max_frequency + 1)]
    samples = []
    for _ in range(n):
        a = rng.standard_normal(len(freqs))
        b = rng.standard_normal(len(freqs))

        def profile(zz, a=a, b=b):
            x1, x2 = np.real(zz), np.imag(zz)
            p = sum(ai * np.cos(m * x1 + k * x2) + bi * np.sin(m * x1 + k * x2)
                    for (m, k), ai, bi in zip(freqs, a, b))
            return (1.0 - np.abs(zz) ** 2 / R ** 2) * p

        sample = GridFunction.from_callable(domain, profile)
        samples.append(sample.with_boundary(np.zeros(domain.boundary_z.size, dtype=complex)))
    return samples


def carleman_constant(samples: Sequence[GridFunction], phase: PhaseFunction, tau_sweep: Sequence[float],
                      domain: Domain) -> float:
    """Smallest constant covering every sample across the sweep."""
    constant = 0.0
    for sample in samples:
        constant = max(constant, carleman_estimate_check(sample, phase, tau_sweep, domain).ratio_max)
    logger.info(f"Carleman constant over {len(samples)} samples: {constant:.3e}")
    return constant
