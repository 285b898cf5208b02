"""
Hermite polynomials matching Cauchy-transform jets on the critical set.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from config.settings import LabSettings
from src.exceptions import FitError, PhaseValidationError
from src.geometry.domain import Domain
from src.holo.series import HolomorphicFunction, monomial_jet_rows
from src.transforms.cauchy import cauchy_jets, dz_jets
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

JET_ORDER = 2
HERMITE_KINDS = {"M1": "z", "M2": "z", "M3": "zbar", "M4": "zbar"}


@dataclass(frozen=True, eq=False)
class HermitePolynomial:
    """
    M(s) = sum c_k s**k with s = z (M1, M2) or s = conj(z) (M3, M4).

    ``points`` are the critical points in z; the interpolation nodes in s
    are their conjugates for the zbar kinds.
    """

    coefficients: np.ndarray
    kind: str
    points: Tuple[complex, ...]
    jets: np.ndarray = field(repr=False)
    jet_residual: float = 0.0

    @property
    def variable(self) -> str:
        return HERMITE_KINDS[self.kind]

    @property
    def polynomial(self) -> HolomorphicFunction:
        """The polynomial in its own variable s."""
        return HolomorphicFunction(self.coefficients)

    def __call__(self, z: Any) -> Any:
        z = np.asarray(z, dtype=complex)
        s = z if self.variable == "z" else np.conj(z)
        return self.polynomial(s)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "variable": self.variable,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "jet_residual": self.jet_residual,
        }


def hermite_from_jets(points: Sequence[complex], jets: np.ndarray, kind: str = "M1",
                      domain_radius: float = 1.0) -> HermitePolynomial:
    """
    Unique polynomial of degree 3l - 1 with prescribed value, first and second derivative at l points.

    Args:
        points: Critical points in z
        jets: Shape (l, 3), derivatives in the kind's variable
        kind: One of M1, M2 (variable z) or M3, M4 (variable conj z)
        domain_radius: Length scale for the confluence test

    Raises:
        PhaseValidationError: If two points coincide
        FitError: If the confluent Vandermonde solve misses the jets
    """
    if kind not in HERMITE_KINDS:
        raise ValueError(f"Unknown Hermite kind '{kind}', expected one of {sorted(HERMITE_KINDS)}")
    points = tuple(complex(p) for p in points)
    jets = np.asarray(jets, dtype=complex).reshape(len(points), JET_ORDER + 1)
    if not points:
        return HermitePolynomial(np.zeros(1, dtype=complex), kind, points, jets, 0.0)

    nodes = np.array(points)
    if HERMITE_KINDS[kind] == "zbar":
        nodes = np.conj(nodes)
    if len(nodes) > 1:
        gaps = np.abs(nodes[:, None] - nodes[None, :])[np.triu_indices(len(nodes), 1)]
        if np.min(gaps) <= 1e-8 * domain_radius:
            raise PhaseValidationError(
                f"confluent critical points (gap {np.min(gaps):.2e}); the phase is invalid",
                diagnostics={"kind": "confluent", "min_gap": float(np.min(gaps))},
            )

    degree = (JET_ORDER + 1) * len(nodes) - 1
    V = monomial_jet_rows(nodes, degree, JET_ORDER)
    target = jets.ravel()
    coefficients = la.solve(V, target)

    scale = max(1.0, float(np.max(np.abs(target))))
    residual = float(np.max(np.abs(V @ coefficients - target))) / scale
    if residual > LabSettings.HERMITE_TOL:
        raise FitError(f"Hermite {kind} misses its jets by {residual:.2e}", residual=residual)
    return HermitePolynomial(coefficients, kind, points, jets, residual)


def hermite_polynomials(g: GridFunction, critical_points: Sequence[complex], kind: str,
                        domain: Domain) -> HermitePolynomial:
    """
    Hermite polynomial matching the jets of a Cauchy transform at the critical set.

    M1/M2 match d^j/dz^j of dbar_inverse(g); M3/M4 match d^j/dzbar^j of
    dz_inverse(g), both for j = 0, 1, 2.

    Args:
        g: The integrand, a q for M1/M2 or conj(a) q for M3/M4
        critical_points: Points of the critical set
        kind: M1, M2, M3 or M4
        domain: Discretized domain

    Returns:
        HermitePolynomial
    """
    if kind not in HERMITE_KINDS:
        raise ValueError(f"Unknown Hermite kind '{kind}', expected one of {sorted(HERMITE_KINDS)}")
    jet_fn = cauchy_jets if HERMITE_KINDS[kind] == "z" else dz_jets
    jets = np.array([jet_fn(g, domain, complex(p), JET_ORDER) for p in critical_points], dtype=complex)
    poly = hermite_from_jets(critical_points, jets.reshape(-1, JET_ORDER + 1), kind, domain.radius)
    logger.debug(f"Hermite {kind} on {len(critical_points)} points: jet residual {poly.jet_residual:.2e}")
    return poly
