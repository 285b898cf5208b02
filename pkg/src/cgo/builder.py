"""
CGO solutions with a degenerate holomorphic phase.

For sigma = sign * tau the solution is

    u = exp(sigma Phi)(a + c0 / sigma) + exp(sigma conj Phi) conj(a + c1 / sigma)
        + exp(sigma phi)(u11 + u12)

Every layer is stored in weighted form, multiplied by exp(-sigma phi), so the
leading terms become exp(i sigma psi)(a + c0 / sigma) + exp(-i sigma psi) conj(a + c1 / sigma)
and nothing overflows. For sign = -1 the reported correctors (b0, b1) are
(-c0, -c1), which keeps them in the b0 / tau convention.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from config.settings import FeatureFlags, LabSettings
from src.cgo.hermite import HermitePolynomial, hermite_polynomials
from src.cgo.partition import partition_e1e2
from src.exceptions import CGOLabError, CGOLayerError, FitError
from src.geometry.domain import Domain, o_epsilon_mask
from src.holo.fitting import fit_conjugate_pair
from src.holo.phase import PhaseFunction
from src.holo.series import HolomorphicFunction
from src.pde.carleman import CarlemanSolveResult, carleman_solve_many
from src.transforms.cauchy import dbar_inverse, dz_inverse
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction
from src.transforms.oscillatory import r_phi_tau, r_tilde_phi_tau

logger = logging.getLogger(__name__)

SIGN_KINDS = {1: ("M1", "M3"), -1: ("M2", "M4")}


def _check_sign(sign: int) -> int:
    if sign not in SIGN_KINDS:
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return int(sign)


def _q_field(q, domain: Domain) -> GridFunction:
    """Potential values with a boundary trace, extrapolated when the potential has none."""
    q_field = q if isinstance(q, GridFunction) else getattr(q, "field", None)
    if q_field is None:
        q_field = GridFunction(np.asarray(q, dtype=complex))
    if q_field.boundary is None:
        trace = PolarDifferentiator(domain).boundary_trace(q_field.values)
        q_field = q_field.with_boundary(trace)
    return q_field


def _sample(a: HolomorphicFunction, domain: Domain) -> GridFunction:
    return GridFunction(a(domain.quadrature.z), a(domain.boundary_z))


def _safe_quotient(numerator: GridFunction, denominator: GridFunction) -> GridFunction:
    """numerator / denominator with 0 where the numerator vanishes."""

    def divide(n, d):
        out = np.zeros(np.shape(n), dtype=complex)
        nonzero = n != 0
        out[nonzero] = n[nonzero] / d[nonzero]
        return out

    boundary = None
    if numerator.boundary is not None and denominator.boundary is not None:
        boundary = divide(numerator.boundary, denominator.boundary)
    return GridFunction(divide(numerator.values, denominator.values), boundary)


@dataclass(frozen=True, eq=False)
class CauchyInputs:
    """a q, conj(a) q and their transforms F = dbar_inverse(a q), G = dz_inverse(conj(a) q)."""

    aq: GridFunction
    abar_q: GridFunction
    F: GridFunction
    G: GridFunction


def cauchy_inputs(a: HolomorphicFunction, q, domain: Domain) -> CauchyInputs:
    a_field = _sample(a, domain)
    q_field = _q_field(q, domain)
    aq = a_field * q_field
    abar_q = a_field.conj() * q_field
    return CauchyInputs(aq, abar_q, dbar_inverse(aq, domain), dz_inverse(abar_q, domain))


def _remainders(inputs: CauchyInputs, m_pair: Tuple[HermitePolynomial, HermitePolynomial],
                domain: Domain) -> Tuple[GridFunction, GridFunction]:
    """f1 = F - M(z), g1 = G - N(conj z)."""
    first, second = m_pair
    return inputs.F - _sample_hermite(first, domain), inputs.G - _sample_hermite(second, domain)


def _sample_hermite(poly: HermitePolynomial, domain: Domain) -> GridFunction:
    return GridFunction(poly(domain.quadrature.z), poly(domain.boundary_z))


@dataclass(frozen=True, eq=False)
class FirstCorrector:
    """
    The first correction u11 in weighted form.

    Attributes:
        u11: Sum of the oscillatory and explicit parts
        oscillatory: The two conjugated-transform terms
        explicit: The two e2 / (4 sigma Phi') terms, -exp(i sigma psi) X1 - exp(-i sigma psi) X3
        x1: e2 f1 / (4 sigma Phi')
        x3: e2 g1 / (4 sigma conj Phi')
        p1, p2: R~_{Phi,sigma}(e1 f1) and R_{Phi,-sigma}(e1 g1)
        f1, g1: F - M and G - N
        cancellation_residual: L2 residual of the cancellation identity over L2 of a q, NaN if not computed
        presentation_gap: max difference between u11 and exp(-sigma phi)(w1 + w2)
    """

    u11: GridFunction
    oscillatory: GridFunction
    explicit: GridFunction
    x1: GridFunction
    x3: GridFunction
    p1: GridFunction
    p2: GridFunction
    f1: GridFunction
    g1: GridFunction
    sigma: float
    cancellation_residual: float = float("nan")
    presentation_gap: float = float("nan")


def _cancellation_residual(p1: GridFunction, p2: GridFunction, x1: GridFunction, x3: GridFunction,
                           inputs: CauchyInputs, phase: PhaseFunction, sigma: float,
                           domain: Domain) -> float:
    """
    Relative residual of
        exp(-sigma phi) Laplacian(u11 exp(sigma phi)) + a q exp(i sigma psi) + conj(a) q exp(-i sigma psi)
            + exp(i sigma psi) Laplacian(X1) + exp(-i sigma psi) Laplacian(X3)
    on interior nodes, with Laplacian = 4 d/dzbar d/dz applied through the factorizations
    exp(-sigma Phi) Laplacian(exp(sigma Phi) Y) = 4 d/dzbar(dY/dz + sigma Phi' Y).
    """
    diff = PolarDifferentiator(domain, "spectral")
    z = domain.quadrature.z
    slope = phase.dphi(z)
    carrier = np.exp(1j * sigma * phase.psi(z))

    y1 = -0.25 * p1.values - x1.values
    y2 = -0.25 * p2.values - x3.values
    res1 = 4.0 * diff.dzbar(diff.dz(y1) + sigma * slope * y1) + inputs.aq.values + diff.laplacian(x1.values)
    res2 = 4.0 * diff.dz(diff.dzbar(y2) + sigma * np.conj(slope) * y2) + inputs.abar_q.values \
        + diff.laplacian(x3.values)
    residual = GridFunction(carrier * res1 + np.conj(carrier) * res2)

    mask = diff.interior_mask()
    scale = inputs.aq.norm_l2(domain, mask)
    if scale == 0:
        return 0.0
    return residual.norm_l2(domain, mask) / scale


def assemble_first_corrector(a: HolomorphicFunction, q, phase: PhaseFunction, tau: float,
                             m_pair: Tuple[HermitePolynomial, HermitePolynomial],
                             partition: Tuple[GridFunction, GridFunction], domain: Domain,
                             sign: int = 1, inputs: Optional[CauchyInputs] = None) -> FirstCorrector:
    """
    Assemble u11 (sign +1) or v11 (sign -1) and measure the cancellation identity.

    Args:
        a: Amplitude
        q: Potential
        phase: Validated phase
        tau: Parameter, tau > 0
        m_pair: (M1, M3) for sign +1, (M2, M4) for sign -1
        partition: (e1, e2)
        domain: Discretized domain
        sign: +1 or -1
        inputs: Precomputed transforms of a q and conj(a) q

    Returns:
        FirstCorrector

    Raises:
        OscillationBudgetError: If tau exceeds the grid budget
    """
    sign = _check_sign(sign)
    sigma = sign * float(tau)
    inputs = cauchy_inputs(a, q, domain) if inputs is None else inputs
    f1, g1 = _remainders(inputs, m_pair, domain)
    e1, e2 = partition

    z, zb = domain.quadrature.z, domain.boundary_z
    carrier = GridFunction(np.exp(1j * sigma * phase.psi(z)), np.exp(1j * sigma * phase.psi(zb)))
    slope = GridFunction(phase.dphi(z), phase.dphi(zb))

    p1 = r_tilde_phi_tau(e1 * f1, phase, sigma, domain)
    p2 = r_phi_tau(e1 * g1, phase, -sigma, domain)
    oscillatory = -0.25 * (carrier * p1) - 0.25 * (carrier.conj() * p2)

    x1 = _safe_quotient(e2 * f1, 4.0 * sigma * slope)
    x3 = _safe_quotient(e2 * g1, 4.0 * sigma * slope.conj())
    explicit = -(carrier * x1) - (carrier.conj() * x3)
    u11 = oscillatory + explicit

    cancellation = float("nan")
    if FeatureFlags.is_enabled("ENABLE_CANCELLATION_DIAGNOSTIC"):
        cancellation = _cancellation_residual(p1, p2, x1, x3, inputs, phase, sigma, domain)

    gap = float("nan")
    phi = phase.phi(z)
    if sigma * float(np.max(phi)) < 700.0 and sigma * float(np.min(phi)) > -700.0:
        E = np.exp(sigma * phase(z))
        w1 = E * (-0.25 * p1.values - x1.values)
        w2 = np.conj(E) * (-0.25 * p2.values - x3.values)
        gap = float(np.max(np.abs((w1 + w2) * np.exp(-sigma * phi) - u11.values)))

    logger.info(f"First corrector (sigma={sigma:g}): ||u11|| {u11.norm_l2(domain):.3e}, "
                f"cancellation residual {cancellation:.3e}")
    return FirstCorrector(u11, oscillatory, explicit, x1, x3, p1, p2, f1, g1, sigma, cancellation, gap)


@dataclass(frozen=True, eq=False)
class CorrectorPair:
    """
    Holomorphic correctors with their Gamma_0 misfit.

    ``first``/``second`` are (a0, a1) for sign +1 and (b0, b1) for sign -1.
    """

    first: HolomorphicFunction
    second: HolomorphicFunction
    sign: int
    degree: int
    misfit: float
    relative_misfit: float

    @property
    def sigma_pair(self) -> Tuple[HolomorphicFunction, HolomorphicFunction]:
        """(c0, c1) entering the solution as c / sigma."""
        if self.sign == 1:
            return self.first, self.second
        return -self.first, -self.second

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": self.sign,
            "degree": self.degree,
            "misfit": self.misfit,
            "relative_misfit": self.relative_misfit,
            "first": self.first.to_dict()["coefficients"],
            "second": self.second.to_dict()["coefficients"],
        }


def fit_correctors(phase: PhaseFunction, a: HolomorphicFunction, q,
                   m_pair: Tuple[HermitePolynomial, HermitePolynomial], sign: int, domain: Domain,
                   degree: Optional[int] = None, inputs: Optional[CauchyInputs] = None) -> CorrectorPair:
    """
    Fit c0 + conj(c1) = f1 / (4 Phi') + g1 / (4 conj Phi') on Gamma_0.

    The reported pair is (c0, c1) for sign +1 and (-c0, -c1) for sign -1.

    Raises:
        FitError: If the relative Gamma_0 misfit exceeds CORRECTOR_MISFIT_TOL
    """
    sign = _check_sign(sign)
    degree = LabSettings.CORRECTOR_DEGREE if degree is None else degree
    inputs = cauchy_inputs(a, q, domain) if inputs is None else inputs
    f1, g1 = _remainders(inputs, m_pair, domain)

    g0 = domain.on_gamma0
    zb = domain.boundary_z[g0]
    slope = phase.dphi(zb)
    rhs = f1.boundary[g0] / (4.0 * slope) + g1.boundary[g0] / (4.0 * np.conj(slope))

    c0, c1, misfit = fit_conjugate_pair(domain, rhs, degree)
    scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    relative = misfit / scale if scale > 0 else 0.0
    if relative > LabSettings.CORRECTOR_MISFIT_TOL:
        raise FitError(
            f"corrector misfit {relative:.2e} on Gamma_0 exceeds {LabSettings.CORRECTOR_MISFIT_TOL:g} "
            f"at degree {degree}; increase the corrector degree",
            residual=relative,
        )
    if sign == -1:
        c0, c1 = -c0, -c1
    logger.debug(f"Correctors (sign {sign:+d}, degree {degree}): relative misfit {relative:.2e}")
    return CorrectorPair(c0, c1, sign, degree, misfit, relative)


def remainder_source(q, phase: PhaseFunction, first: FirstCorrector, correctors: CorrectorPair,
                     domain: Domain) -> GridFunction:
    """
    h = exp(i sigma psi) Laplacian(X1) + exp(-i sigma psi) Laplacian(X3)
        - q c0 exp(i sigma psi) / sigma - q conj(c1) exp(-i sigma psi) / sigma
    """
    sigma = first.sigma
    z = domain.quadrature.z
    diff = PolarDifferentiator(domain, "spectral")
    carrier = np.exp(1j * sigma * phase.psi(z))
    c0, c1 = correctors.sigma_pair
    q_values = _q_field(q, domain).values
    h = (carrier * diff.laplacian(first.x1.values) + np.conj(carrier) * diff.laplacian(first.x3.values)
         - q_values * c0(z) * carrier / sigma - q_values * np.conj(c1(z)) * np.conj(carrier) / sigma)
    return GridFunction(h)


def solve_remainder(q, phase: PhaseFunction, tau: float, u11: GridFunction, h: GridFunction, sign: int,
                    domain: Domain, boundary_data: Optional[np.ndarray] = None,
                    defect_data: Optional[np.ndarray] = None
                    ) -> Tuple[CarlemanSolveResult, Optional[CarlemanSolveResult]]:
    """
    Weighted remainder u12: Laplacian(u12 e) + q u12 e = (-q u11 + h) e with e = exp(sigma phi).

    Both solves keep the least-norm solution among those matching the Gamma_0 data,
    and share one factorization.

    Args:
        q: Potential
        phase: Validated phase
        tau: Parameter
        u11: First corrector, weighted, with its boundary trace
        h: Weighted source from remainder_source
        sign: +1 or -1
        domain: Discretized domain
        boundary_data: Weighted Gamma_0 data; -u11 on Gamma_0 by default
        defect_data: Weighted Gamma_0 data of a homogeneous solve, skipped when None

    Returns:
        (u12 result, homogeneous result or None)
    """
    sign = _check_sign(sign)
    sigma = sign * float(tau)
    q_values = _q_field(q, domain).values
    source = GridFunction(-q_values * u11.values + h.values)
    if boundary_data is None:
        boundary_data = -u11.boundary[domain.on_gamma0]
    problems = [(source, boundary_data)]
    if defect_data is not None:
        problems.append((None, defect_data))
    results = carleman_solve_many(q_values, problems, phase, sigma, domain, weighted=True,
                                  selection="least_norm")
    remainder = results[0]
    defect = results[1] if defect_data is not None else None
    logger.info(f"Remainder (sigma={sigma:g}): ||u12|| {remainder.weighted.norm_l2(domain):.3e}, "
                f"bound ratio {remainder.ratio:.3e}")
    return remainder, defect


@dataclass(frozen=True, eq=False)
class CGOSolution:
    """
    A CGO solution u1 (sign +1) or v (sign -1), every layer weighted by exp(-sigma phi).

    Attributes:
        sign: +1 or -1
        tau: Parameter, sigma = sign * tau
        a: Amplitude
        correctors: (a0, a1) or (b0, b1)
        m_polys: (M1, M3) or (M2, M4)
        partition: (e1, e2)
        leading: Weighted leading terms with correctors
        u11: Weighted first corrector
        u12: Weighted remainder
        defect: Weighted homogeneous solution cancelling the a-terms left on Gamma_0
        ledger: Per-layer norms, residuals and pass flags
    """

    sign: int
    tau: float
    a: HolomorphicFunction
    phase: PhaseFunction = field(repr=False)
    correctors: CorrectorPair = field(repr=False)
    m_polys: Tuple[HermitePolynomial, HermitePolynomial] = field(repr=False)
    partition: Tuple[GridFunction, GridFunction] = field(repr=False)
    leading: GridFunction = field(repr=False)
    u11: GridFunction = field(repr=False)
    u12: GridFunction = field(repr=False)
    defect: Optional[GridFunction] = field(default=None, repr=False)
    first: Optional[FirstCorrector] = field(default=None, repr=False)
    ledger: Dict[str, Any] = field(default_factory=dict)

    @property
    def sigma(self) -> float:
        return self.sign * self.tau

    @property
    def weighted_total(self) -> GridFunction:
        total = self.leading + self.u11 + self.u12
        return total if self.defect is None else total + self.defect

    def total(self, domain: Domain) -> GridFunction:
        """The solution itself; may overflow for large sigma phi."""
        W = self.weighted_total
        return GridFunction(W.values * np.exp(self.sigma * self.phase.phi(domain.quadrature.z)),
                            W.boundary * np.exp(self.sigma * self.phase.phi(domain.boundary_z)))

    @property
    def passed(self) -> bool:
        return bool(self.ledger.get("passed", False))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": self.sign,
            "tau": self.tau,
            "amplitude": self.a.to_dict()["coefficients"],
            "correctors": self.correctors.to_dict(),
            "m_polys": [m.to_dict() for m in self.m_polys],
            "ledger": self.ledger,
        }


def _leading_terms(a: HolomorphicFunction, correctors: CorrectorPair, phase: PhaseFunction, sigma: float,
                   domain: Domain) -> GridFunction:
    c0, c1 = correctors.sigma_pair

    def terms(z):
        carrier = np.exp(1j * sigma * phase.psi(z))
        return carrier * (a(z) + c0(z) / sigma) + np.conj(carrier) * np.conj(a(z) + c1(z) / sigma)

    return GridFunction(terms(domain.quadrature.z), terms(domain.boundary_z))


def pde_residual(weighted_total: GridFunction, q, phase: PhaseFunction, sigma: float, domain: Domain,
                 solved_layers: Sequence[CarlemanSolveResult] = ()) -> float:
    """
    ||exp(-sigma phi)(Laplacian + q)(W exp(sigma phi))|| over ||W|| max(max|q|, 1), interior L2.

    The conjugated operator Laplacian(W) + 2 sigma grad(phi).grad(W) + sigma^2 |Phi'|^2 W is
    applied spectrally to the closed-form part of W. Layers that came out of a grid solve
    enter through the image of the operator they were solved with.
    """
    diff = PolarDifferentiator(domain, "spectral")
    z = domain.quadrature.z
    slope = phase.dphi(z)
    q_values = _q_field(q, domain).values
    W = weighted_total.values - sum((layer.weighted.values for layer in solved_layers), np.zeros_like(z))
    W_x1, W_x2 = diff.gradient(W)
    residual = (diff.laplacian(W) + 2.0 * sigma * (np.real(slope) * W_x1 - np.imag(slope) * W_x2)
                + sigma ** 2 * np.abs(slope) ** 2 * W + q_values * W)
    for layer in solved_layers:
        residual = residual + layer.image
    mask = diff.interior_mask()
    scale = weighted_total.norm_l2(domain, mask) * max(float(np.max(np.abs(q_values))), 1.0)
    if scale == 0:
        return 0.0
    return GridFunction(residual).norm_l2(domain, mask) / scale


def _run_layer(name: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except CGOLabError as e:
        logger.error(f"CGO layer '{name}' failed: {e}")
        raise CGOLayerError(f"layer '{name}' failed: {e}", layer=name) from e


def build_cgo(q, phase: PhaseFunction, a: HolomorphicFunction, tau: float, domain: Domain, sign: int = 1,
              epsilon: Optional[float] = None, rho: Optional[float] = None,
              degree: Optional[int] = None) -> CGOSolution:
    """
    Build u1 (sign +1, potential q1) or v (sign -1, potential q2) layer by layer.

    u12 cancels u11 and the corrector terms on Gamma_0. Whatever the leading a-terms leave
    there (zero when Im Phi and Re a vanish on Gamma_0) is cancelled by the defect layer,
    a homogeneous solution, so the assembled solution always vanishes on Gamma_0.

    Args:
        q: Potential
        phase: Validated phase
        a: Amplitude
        tau: Parameter, tau > 0
        domain: Discretized domain
        sign: +1 or -1
        epsilon: Collar width of the partition
        rho: Halo radius of the partition
        degree: Corrector degree

    Returns:
        CGOSolution

    Raises:
        CGOLayerError: Naming the layer that failed
    """
    sign = _check_sign(sign)
    sigma = sign * float(tau)
    kinds = SIGN_KINDS[sign]
    critical = phase.critical_z
    ledger: Dict[str, Any] = {"sign": sign, "tau": float(tau)}

    inputs = _run_layer("transforms", cauchy_inputs, a, q, domain)
    m_pair = _run_layer("hermite", lambda: tuple(
        hermite_polynomials(g, critical, kind, domain)
        for g, kind in zip((inputs.aq, inputs.abar_q), kinds)
    ))
    ledger["hermite"] = {m.kind: m.jet_residual for m in m_pair}

    partition = _run_layer("partition", partition_e1e2, domain, critical, epsilon, rho)
    epsilon = LabSettings.COLLAR_FACTOR * domain.inradius if epsilon is None else epsilon

    first = _run_layer("u11", assemble_first_corrector, a, q, phase, tau, m_pair, partition, domain,
                       sign, inputs)
    correctors = _run_layer("correctors", fit_correctors, phase, a, q, m_pair, sign, domain, degree, inputs)
    leading = _leading_terms(a, correctors, phase, sigma, domain)

    g0 = domain.on_gamma0
    z_b = domain.boundary_z
    carrier_b = np.exp(1j * sigma * phase.psi(z_b))
    a_part = carrier_b * a(z_b) + np.conj(carrier_b * a(z_b))
    boundary_data = -(leading.boundary - a_part + first.u11.boundary)
    h = remainder_source(q, phase, first, correctors, domain)
    remainder, defect = _run_layer("u12", solve_remainder, q, phase, tau, first.u11, h, sign, domain,
                                   boundary_data[g0], -a_part[g0])
    u12 = remainder.weighted

    W = leading + first.u11 + u12 + defect.weighted
    scale = max(W.sup(), 1e-300)
    trace = float(np.max(np.abs(W.boundary[g0]))) / scale if g0.any() else 0.0
    residual = pde_residual(W, q, phase, sigma, domain, (remainder, defect))
    collar = o_epsilon_mask(domain, epsilon)

    cancellation = first.cancellation_residual
    cancellation_ok = bool(np.isnan(cancellation) or cancellation <= LabSettings.CANCELLATION_TOL)
    mismatch = float(np.max(np.abs(a_part[g0]))) if g0.any() else 0.0
    ledger.update({
        "leading": {
            "l2": leading.norm_l2(domain),
            "gamma0_mismatch": mismatch,
        },
        "u11": {
            "l2": first.u11.norm_l2(domain),
            "collar_l2": first.u11.norm_l2(domain, collar),
            "boundary_l2": first.u11.boundary_norm_l2(domain),
            "oscillatory_boundary_l2": first.oscillatory.boundary_norm_l2(domain),
            "cancellation_residual": cancellation,
            "presentation_gap": first.presentation_gap,
            "passed": cancellation_ok,
        },
        "correctors": {
            "misfit": correctors.misfit,
            "relative_misfit": correctors.relative_misfit,
            "degree": correctors.degree,
            "passed": True,
        },
        "u12": {
            "l2": u12.norm_l2(domain),
            "tau_l2": float(tau) * u12.norm_l2(domain),
            "bound_ratio": remainder.ratio,
            "flagged": remainder.flagged,
            "solver_residual": remainder.residual,
            "passed": not remainder.flagged,
        },
        "defect": {
            "l2": defect.weighted.norm_l2(domain),
            "data_max": mismatch,
            "bound_ratio": defect.ratio,
            "solver_residual": defect.residual,
            "passed": not defect.flagged,
        },
        "total": {
            "l2": W.norm_l2(domain),
            "gamma0_trace": trace,
            "pde_residual": residual,
            "passed": bool(trace <= LabSettings.TRACE_TOL and residual <= LabSettings.ASSEMBLY_TOL),
        },
    })
    ledger["passed"] = all(ledger[k]["passed"] for k in ("u11", "correctors", "u12", "defect", "total"))
    level = logging.INFO if ledger["passed"] else logging.WARNING
    logger.log(level, f"CGO (sign {sign:+d}, tau={tau:g}): Gamma_0 trace {trace:.2e}, "
                      f"PDE residual {residual:.3e}, defect {ledger['defect']['l2']:.2e}, "
                      f"passed={ledger['passed']}")

    return CGOSolution(
        sign=sign,
        tau=float(tau),
        a=a,
        phase=phase,
        correctors=correctors,
        m_polys=m_pair,
        partition=partition,
        leading=leading,
        u11=first.u11,
        u12=u12,
        defect=defect.weighted,
        first=first,
        ledger=ledger,
    )


def build_cgo_pair(q1, q2, phase: PhaseFunction, a: HolomorphicFunction, tau: float, domain: Domain,
                   workers: int = 1, **kwargs) -> Tuple[CGOSolution, CGOSolution]:
    """u1 for q1 with +tau and v for q2 with -tau, optionally on two threads."""
    jobs = [(q1, 1), (q2, -1)]

    def build(job):
        q, sign = job
        return build_cgo(q, phase, a, tau, domain, sign=sign, **kwargs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=2) as executor:
            u1, v = executor.map(build, jobs)
    else:
        u1, v = (build(job) for job in jobs)
    return u1, v
