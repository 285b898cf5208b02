"""
Polynomial representation of holomorphic functions.

A HolomorphicFunction is a finite power series about the disk center. It is
entire, so every derivative is exact and its d/dzbar residual is zero by
construction.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

Number = Union[complex, float, int]


@dataclass(frozen=True, eq=False)
class HolomorphicFunction:
    """Power series sum_k c_k z**k."""

    coefficients: np.ndarray

    def __init__(self, coefficients: Sequence[Number]):
        coeffs = np.atleast_1d(np.asarray(coefficients, dtype=complex)).copy()
        if coeffs.size == 0:
            coeffs = np.zeros(1, dtype=complex)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls) -> "HolomorphicFunction":
        return cls([0.0])

    @classmethod
    def constant(cls, value: Number) -> "HolomorphicFunction":
        return cls([value])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: Number = 1.0) -> "HolomorphicFunction":
        return cls(leading * P.polyfromroots(np.asarray(roots, dtype=complex)))

    @property
    def degree(self) -> int:
        return int(self.coefficients.size - 1)

    def __call__(self, z: Any) -> Any:
        return P.polyval(np.asarray(z, dtype=complex), self.coefficients)

    def derivative(self, order: int = 1) -> "HolomorphicFunction":
        if order == 0:
            return self
        if order > self.degree:
            return HolomorphicFunction.zero()
        return HolomorphicFunction(P.polyder(self.coefficients, order))

    def jet(self, z: complex, order: int = 2) -> np.ndarray:
        """Values (f, f', ..., f^(order)) at a point."""
        return np.array([complex(self.derivative(j)(z)) for j in range(order + 1)])

    def conj_eval(self, z: Any) -> Any:
        """conj(f(z)), an anti-holomorphic field."""
        return np.conj(self(z))

    def roots(self) -> np.ndarray:
        """Zeros by companion-matrix eigenvalues."""
        trimmed = P.polytrim(self.coefficients, tol=0.0)
        if trimmed.size <= 1:
            return np.zeros(0, dtype=complex)
        return np.asarray(P.polyroots(trimmed), dtype=complex)

    def dbar_residual(self) -> float:
        """The d/dzbar residual of a power series is identically zero."""
        return 0.0

    def __add__(self, other: Union["HolomorphicFunction", Number]) -> "HolomorphicFunction":
        if isinstance(other, HolomorphicFunction):
            return HolomorphicFunction(P.polyadd(self.coefficients, other.coefficients))
        return HolomorphicFunction(P.polyadd(self.coefficients, [other]))

    __radd__ = __add__

    def __sub__(self, other: Union["HolomorphicFunction", Number]) -> "HolomorphicFunction":
        return self + (-1.0) * other

    def __neg__(self) -> "HolomorphicFunction":
        return HolomorphicFunction(-self.coefficients)

    def __mul__(self, other: Union["HolomorphicFunction", Number]) -> "HolomorphicFunction":
        if isinstance(other, HolomorphicFunction):
            return HolomorphicFunction(P.polymul(self.coefficients, other.coefficients))
        return HolomorphicFunction(self.coefficients * complex(other))

    __rmul__ = __mul__

    def max_abs_on_circle(self, radius: float, samples: int = 1024) -> float:
        theta = 2.0 * np.pi * np.arange(samples) / samples
        return float(np.max(np.abs(self(radius * np.exp(1j * theta)))))

    def to_dict(self) -> Dict[str, Any]:
        return {"coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HolomorphicFunction":
        return cls([complex(re, im) for re, im in data["coefficients"]])


def monomial_jet_rows(points: Sequence[complex], degree: int, order: int) -> np.ndarray:
    """
    Rows mapping coefficients to jets.

    Row (k, j) evaluates d^j/dz^j sum_i c_i z**i at points[k], for
    j = 0..order, stacked point-major.
    """
    powers = np.arange(degree + 1)
    rows: List[np.ndarray] = []
    for z in points:
        for j in range(order + 1):
            falling = np.ones(degree + 1)
            for s in range(j):
                falling = falling * (powers - s)
            exps = np.clip(powers - j, 0, None)
            row = np.where(powers >= j, falling * complex(z) ** exps, 0.0)
            rows.append(row.astype(complex))
    return np.array(rows)
