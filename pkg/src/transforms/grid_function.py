"""
Complex fields sampled on the quadrature grid.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Union

import numpy as np
import pandas as pd

from src.exceptions import NonFiniteFieldError
from src.geometry.domain import Domain

Operand = Union["GridFunction", complex, float, int, np.ndarray]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """
    Values at the interior nodes, shape (radial_nodes, angular_nodes), and
    optionally a trace at the boundary nodes.
    """

    values: np.ndarray
    boundary: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError(f"{int(np.sum(~np.isfinite(values)))} non-finite interior values")
        object.__setattr__(self, "values", values)
        if self.boundary is not None:
            boundary = np.asarray(self.boundary, dtype=complex)
            if not np.all(np.isfinite(boundary)):
                raise NonFiniteFieldError(f"{int(np.sum(~np.isfinite(boundary)))} non-finite boundary values")
            object.__setattr__(self, "boundary", boundary)

    @classmethod
    def from_callable(cls, domain: Domain, func: Callable[[np.ndarray], Any],
                      with_boundary: bool = True) -> "GridFunction":
        """Sample func(z) at the grid nodes and, optionally, the boundary nodes."""
        values = np.broadcast_to(func(domain.quadrature.z), domain.quadrature.shape)
        boundary = None
        if with_boundary:
            boundary = np.broadcast_to(func(domain.boundary_z), domain.boundary_z.shape)
        return cls(np.array(values), None if boundary is None else np.array(boundary))

    @classmethod
    def zeros(cls, domain: Domain, with_boundary: bool = True) -> "GridFunction":
        return cls(np.zeros(domain.quadrature.shape, dtype=complex),
                   np.zeros(domain.boundary_z.size, dtype=complex) if with_boundary else None)

    @property
    def has_boundary(self) -> bool:
        return self.boundary is not None

    def _combine(self, other: Operand, op: Callable) -> "GridFunction":
        if isinstance(other, GridFunction):
            boundary = None
            if self.boundary is not None and other.boundary is not None:
                boundary = op(self.boundary, other.boundary)
            return GridFunction(op(self.values, other.values), boundary)
        if isinstance(other, np.ndarray) and other.ndim > 0:
            return GridFunction(op(self.values, other), None)
        boundary = None if self.boundary is None else op(self.boundary, other)
        return GridFunction(op(self.values, other), boundary)

    def __add__(self, other: Operand) -> "GridFunction":
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "GridFunction":
        return self._combine(other, np.subtract)

    def __rsub__(self, other: Operand) -> "GridFunction":
        return (-self) + other

    def __mul__(self, other: Operand) -> "GridFunction":
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "GridFunction":
        return self._combine(other, np.divide)

    def __neg__(self) -> "GridFunction":
        return GridFunction(-self.values, None if self.boundary is None else -self.boundary)

    def conj(self) -> "GridFunction":
        return GridFunction(np.conj(self.values), None if self.boundary is None else np.conj(self.boundary))

    def without_boundary(self) -> "GridFunction":
        return GridFunction(self.values, None)

    def with_boundary(self, boundary: np.ndarray) -> "GridFunction":
        return GridFunction(self.values, boundary)

    def sup(self, mask: Optional[np.ndarray] = None) -> float:
        values = self.values if mask is None else self.values[mask]
        return float(np.max(np.abs(values))) if values.size else 0.0

    def integrate(self, domain: Domain) -> complex:
        return complex(domain.quadrature.integrate(self.values))

    def norm_l2(self, domain: Domain, mask: Optional[np.ndarray] = None) -> float:
        weights = domain.quadrature.weights if mask is None else domain.quadrature.weights * mask
        return float(np.sqrt(np.sum(np.sum(np.abs(self.values) ** 2 * weights, axis=1))))

    def boundary_norm_l2(self, domain: Domain, mask: Optional[np.ndarray] = None) -> float:
        if self.boundary is None:
            return 0.0
        return float(np.sqrt(np.real(domain.boundary_integrate(np.abs(self.boundary) ** 2, mask))))

    def to_dataframe(self, domain: Domain) -> pd.DataFrame:
        """Rows (x1, x2, re, im): interior nodes first, then boundary nodes."""
        z = domain.quadrature.z.ravel()
        values = self.values.ravel()
        if self.boundary is not None:
            z = np.concatenate([z, domain.boundary_z])
            values = np.concatenate([values, self.boundary])
        return pd.DataFrame({"x1": z.real, "x2": z.imag, "re": values.real, "im": values.imag})

    def to_csv(self, domain: Domain, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_dataframe(domain).to_csv(path, index=False)
        return path
