"""
Derivatives of grid-sampled fields in polar coordinates.

Two modes share one interface: ``fd`` uses second-order differences
(np.gradient in r, periodic centered differences in theta) and ``spectral``
uses the Gauss-Legendre barycentric differentiation matrix in r with the FFT
in theta.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from config.settings import FeatureFlags
from src.geometry.domain import Domain

logger = logging.getLogger(__name__)

METHODS = ("fd", "spectral")


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    """Weights 1 / prod_{k != j}(x_j - x_k), computed in log space and normalized."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    log_abs = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    return sign * np.exp(log_abs - np.max(log_abs))


def differentiation_matrix(nodes: np.ndarray) -> np.ndarray:
    """First-derivative matrix of the polynomial interpolant on the nodes."""
    w = barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -np.sum(D, axis=1))
    return D


def interpolation_row(nodes: np.ndarray, x: float) -> np.ndarray:
    """Row l with l @ f = interpolant of f at x."""
    w = barycentric_weights(nodes)
    gap = x - nodes
    hit = np.flatnonzero(gap == 0)
    if hit.size:
        row = np.zeros(nodes.size)
        row[hit[0]] = 1.0
        return row
    terms = w / gap
    return terms / np.sum(terms)


def _wavenumbers(n: int, first_order: bool) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n)
    if first_order and n % 2 == 0:
        k[n // 2] = 0.0
    return k


def periodic_derivative(values: np.ndarray, order: int = 1, axis: int = -1) -> np.ndarray:
    """Spectral d^order/dtheta^order of samples uniform on [0, 2 pi)."""
    n = values.shape[axis]
    k = _wavenumbers(n, first_order=order % 2 == 1)
    shape = [1] * values.ndim
    shape[axis] = n
    factor = ((1j * k) ** order).reshape(shape)
    return np.fft.ifft(np.fft.fft(values, axis=axis) * factor, axis=axis)


class PolarDifferentiator:
    """
    Differential operators on the polar quadrature grid.

    Args:
        domain: Discretized domain
        method: 'fd' or 'spectral'; None picks spectral when the feature flag is on
    """

    def __init__(self, domain: Domain, method: Optional[str] = None):
        if method is None:
            method = "spectral" if FeatureFlags.is_enabled("ENABLE_SPECTRAL_DERIVATIVES") else "fd"
        if method not in METHODS:
            raise ValueError(f"Unknown differentiation method '{method}', expected one of {METHODS}")
        self.domain = domain
        self.method = method
        quad = domain.quadrature
        self.r = quad.r
        self.theta = quad.theta
        self.dtheta = quad.dtheta
        self._rr = quad.r[:, None]
        self._phase = np.exp(1j * quad.theta)[None, :]

        if method == "spectral":
            self._D = differentiation_matrix(quad.r)
            self._trace_row = interpolation_row(quad.r, domain.radius)
        else:
            self._D = None
            # quadratic extrapolation from the last three rings
            self._trace_row = np.zeros(quad.r.size)
            self._trace_row[-3:] = interpolation_row(quad.r[-3:], domain.radius)

    # -- one-dimensional pieces ---------------------------------------------------

    def d_r(self, values: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            return self._D @ values
        return np.gradient(values, self.r, axis=0, edge_order=2)

    def d_theta(self, values: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            return periodic_derivative(values, 1, axis=1)
        return (np.roll(values, -1, axis=1) - np.roll(values, 1, axis=1)) / (2.0 * self.dtheta)

    def d_rr(self, values: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            return self._D @ (self._D @ values)
        return np.gradient(np.gradient(values, self.r, axis=0, edge_order=2), self.r, axis=0, edge_order=2)

    def d_thetatheta(self, values: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            return periodic_derivative(values, 2, axis=1)
        return (np.roll(values, -1, axis=1) - 2.0 * values + np.roll(values, 1, axis=1)) / self.dtheta ** 2

    # -- complex and Cartesian operators ------------------------------------------

    def dz(self, values: np.ndarray) -> np.ndarray:
        """d/dz = (e^{-i theta} / 2)(d_r - (i / r) d_theta)."""
        return 0.5 * np.conj(self._phase) * (self.d_r(values) - 1j * self.d_theta(values) / self._rr)

    def dzbar(self, values: np.ndarray) -> np.ndarray:
        """d/dzbar = (e^{i theta} / 2)(d_r + (i / r) d_theta)."""
        return 0.5 * self._phase * (self.d_r(values) + 1j * self.d_theta(values) / self._rr)

    def gradient(self, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(d/dx1, d/dx2)."""
        f_r = self.d_r(values)
        f_t = self.d_theta(values) / self._rr
        cos, sin = np.real(self._phase), np.imag(self._phase)
        return cos * f_r - sin * f_t, sin * f_r + cos * f_t

    def laplacian(self, values: np.ndarray) -> np.ndarray:
        return self.d_rr(values) + self.d_r(values) / self._rr + self.d_thetatheta(values) / self._rr ** 2

    # -- boundary -----------------------------------------------------------------

    def _to_boundary_nodes(self, ring: np.ndarray) -> np.ndarray:
        n_b = self.domain.boundary_z.size
        n_t = self.theta.size
        if n_b == n_t:
            return ring
        coeffs = np.fft.fft(ring) / n_t
        k = np.fft.fftfreq(n_t, d=1.0 / n_t)
        return np.exp(1j * np.outer(self.domain.boundary_theta, k)) @ coeffs

    def boundary_trace(self, values: np.ndarray) -> np.ndarray:
        """Values extrapolated to r = R, at the boundary nodes."""
        return self._to_boundary_nodes(self._trace_row @ values)

    def normal_derivative(self, values: np.ndarray) -> np.ndarray:
        """d/dr at r = R, at the boundary nodes."""
        return self._to_boundary_nodes(self._trace_row @ self.d_r(values))

    def tangential(self, trace: np.ndarray) -> np.ndarray:
        """Tangential derivative -(1/R) d/dtheta of a boundary trace."""
        return -periodic_derivative(np.asarray(trace, dtype=complex), 1) / self.domain.radius

    def interior_mask(self, collar: Optional[float] = None) -> np.ndarray:
        """Nodes away from the boundary collar and the origin, where residuals are measured."""
        h = self.domain.grid_spacing
        if collar is None:
            collar = max(0.1 * self.domain.radius, 2.0 * h)
        quad = self.domain.quadrature
        mask = (quad.boundary_distance > collar) & (self._rr > 2.0 * h)
        return np.broadcast_to(mask, quad.shape)
