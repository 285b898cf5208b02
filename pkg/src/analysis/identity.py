"""
Term-by-term bookkeeping of int q u1 v dx for q = q1 - q2.

u1 and v are paired through their weighted forms, exp(tau phi) exp(-tau phi) = 1,
so the direct integral never forms the exponential weights.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from src.analysis.stationary_phase import oscillatory_integral, stationary_phase_leading
from src.cgo.builder import CGOSolution, FirstCorrector
from src.exceptions import HypothesisError
from src.geometry.domain import Domain
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)


def _as_pair(value: complex) -> List[float]:
    return [float(np.real(value)), float(np.imag(value))]


@dataclass
class IdentityBreakdown:
    """
    Every term of the expansion of int q u1 v dx at one tau.

    Attributes:
        zero_mode: int q (a**2 + conj(a)**2)
        stationary_sum: Stationary-phase value of int q |a|**2 2 cos(2 tau psi)
        oscillatory_direct: The same integral by direct quadrature
        corrector_integral: int q (a0 b0 + conj(a1 b1))
        corrector_first_order: (1/tau) int q (a (a0 + b0) + conj(a) conj(a1 + b1))
        minus_integrals: I1..I4, the u11 terms paired with the leading terms of v
        plus_integrals: J1..J4, the v11 terms paired with the leading terms of u1
        minus_asymptotic: -(1/(4 tau)) int q (a f1 / Phi' + conj(a) g1 / conj(Phi'))
        plus_asymptotic: The q2-side counterpart, with the opposite sign
        direct: int q u1 v dx from the assembled solutions
        expansion_total: Sum of the expansion terms
        gap: |direct - expansion_total|
    """

    tau: float
    zero_mode: complex = 0j
    stationary_sum: complex = 0j
    oscillatory_direct: complex = 0j
    corrector_integral: complex = 0j
    corrector_first_order: complex = 0j
    minus_integrals: List[complex] = field(default_factory=lambda: [0j] * 4)
    plus_integrals: List[complex] = field(default_factory=lambda: [0j] * 4)
    minus_asymptotic: complex = 0j
    plus_asymptotic: complex = 0j
    direct: complex = 0j
    expansion_total: complex = 0j
    gap: float = 0.0

    @property
    def scaled_gap(self) -> float:
        return self.tau * self.gap

    @property
    def corrector_second_order(self) -> complex:
        return self.corrector_integral / self.tau ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "zero_mode": _as_pair(self.zero_mode),
            "stationary_sum": _as_pair(self.stationary_sum),
            "oscillatory_direct": _as_pair(self.oscillatory_direct),
            "corrector_integral": _as_pair(self.corrector_integral),
            "corrector_first_order": _as_pair(self.corrector_first_order),
            "corrector_second_order": _as_pair(self.corrector_second_order),
            "minus_integrals": [_as_pair(v) for v in self.minus_integrals],
            "plus_integrals": [_as_pair(v) for v in self.plus_integrals],
            "minus_asymptotic": _as_pair(self.minus_asymptotic),
            "plus_asymptotic": _as_pair(self.plus_asymptotic),
            "direct": _as_pair(self.direct),
            "expansion_total": _as_pair(self.expansion_total),
            "gap": self.gap,
            "scaled_gap": self.scaled_gap,
        }


def _check_pair(u1: CGOSolution, v: CGOSolution) -> None:
    if u1.sign != 1 or v.sign != -1:
        raise HypothesisError(f"identity needs builds with signs (+1, -1), got ({u1.sign:+d}, {v.sign:+d})")
    if u1.tau != v.tau:
        raise HypothesisError(f"builds use different tau: {u1.tau:g} and {v.tau:g}")
    if not np.array_equal(u1.phase.phi_holo.coefficients, v.phase.phi_holo.coefficients):
        raise HypothesisError("builds use different phases")
    if not np.array_equal(u1.a.coefficients, v.a.coefficients):
        raise HypothesisError("builds use different amplitudes")
    if u1.first is None or v.first is None:
        raise HypothesisError("builds carry no first-corrector data")


def _transform_terms(first: FirstCorrector, q: np.ndarray, a: np.ndarray, carrier: np.ndarray,
                     domain: Domain) -> List[complex]:
    """
    Split int q u11 (a conj(carrier) + conj(a) carrier) dx into its four parts, carrier = exp(i sigma psi).
    """
    quad = domain.quadrature
    abar = np.conj(a)
    twice = carrier ** 2
    p1, p2 = first.p1.values, first.p2.values
    x1, x3 = first.x1.values, first.x3.values
    return [
        complex(-0.25 * quad.integrate(q * (a * p1 + abar * p2))),
        complex(-0.25 * quad.integrate(q * (abar * p1 * twice + a * p2 * np.conj(twice)))),
        complex(-quad.integrate(q * (abar * x1 * twice + a * x3 * np.conj(twice)))),
        complex(-quad.integrate(q * (a * x1 + abar * x3))),
    ]


def _asymptotic_term(first: FirstCorrector, q: np.ndarray, a: np.ndarray, slope: np.ndarray,
                     domain: Domain) -> complex:
    """-(1/(4 sigma)) int q (a f1 / Phi' + conj(a) g1 / conj(Phi')) dx, the limit of the first and fourth terms."""
    safe = np.where(slope == 0, 1.0, slope)
    integrand = q * (a * first.f1.values / safe + np.conj(a) * first.g1.values / np.conj(safe))
    integrand = np.where(slope == 0, 0.0, integrand)
    return complex(-domain.quadrature.integrate(integrand) / (4.0 * first.sigma))


def identity_terms(q1, q2, u1: CGOSolution, v: CGOSolution, domain: Domain) -> IdentityBreakdown:
    """
    Evaluate every term of the expansion of int (q1 - q2) u1 v dx.

    Args:
        q1: Potential of u1
        q2: Potential of v
        u1: Build with sign +1 for q1
        v: Build with sign -1 for q2, same phase, amplitude and tau
        domain: Discretized domain

    Returns:
        IdentityBreakdown

    Raises:
        HypothesisError: If the two builds do not match
    """
    _check_pair(u1, v)
    tau = u1.tau
    phase = u1.phase
    quad = domain.quadrature
    z = quad.z

    q = np.asarray(getattr(q1, "values", q1), dtype=complex) - np.asarray(getattr(q2, "values", q2), dtype=complex)
    a = u1.a(z)
    abar = np.conj(a)
    a0, a1 = u1.correctors.first(z), u1.correctors.second(z)
    b0, b1 = v.correctors.first(z), v.correctors.second(z)
    slope = phase.dphi(z)

    breakdown = IdentityBreakdown(tau=tau)
    breakdown.zero_mode = complex(quad.integrate(q * (a ** 2 + abar ** 2)))
    weight = GridFunction(q * np.abs(a) ** 2)
    breakdown.oscillatory_direct = oscillatory_integral(weight, phase, tau, domain)
    breakdown.stationary_sum = stationary_phase_leading(weight, phase, tau, domain)
    breakdown.corrector_integral = complex(quad.integrate(q * (a0 * b0 + np.conj(a1 * b1))))
    breakdown.corrector_first_order = complex(
        quad.integrate(q * (a * (a0 + b0) + abar * np.conj(a1 + b1)))) / tau

    carrier = np.exp(1j * tau * phase.psi(z))
    breakdown.minus_integrals = _transform_terms(u1.first, q, a, carrier, domain)
    breakdown.plus_integrals = _transform_terms(v.first, q, a, np.conj(carrier), domain)
    breakdown.minus_asymptotic = _asymptotic_term(u1.first, q, a, slope, domain)
    breakdown.plus_asymptotic = _asymptotic_term(v.first, q, a, slope, domain)

    breakdown.direct = complex(quad.integrate(q * u1.weighted_total.values * v.weighted_total.values))
    breakdown.expansion_total = (
        breakdown.zero_mode
        + breakdown.stationary_sum
        + breakdown.corrector_first_order
        + breakdown.corrector_second_order
        + sum(breakdown.minus_integrals)
        + sum(breakdown.plus_integrals)
    )
    breakdown.gap = float(abs(breakdown.direct - breakdown.expansion_total))
    logger.info(f"Identity at tau={tau:g}: direct {breakdown.direct:.4e}, gap {breakdown.gap:.3e}, "
                f"zero mode {breakdown.zero_mode:.3e}")
    return breakdown

