"""
Area Cauchy transforms on the disk.

T g(z) = -(1/pi) int g(zeta) / (zeta - z) dA(zeta)

is evaluated at grid nodes by subtracting the first-order Taylor polynomial
of the integrand's numerator about the target and adding its transform back
in closed form:

    T[1](z) = conj(z),  T[zeta - z](z) = -R^2,  T[conj(zeta - z)](z) = -conj(z)^2 / 2.

Boundary targets use the zero-order subtraction only. Jets of T g at
arbitrary interior points subtract a local polynomial fit and add back its
transform through a boundary contour integral.
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg as la

from config.settings import LabSettings
from src.exceptions import DomainSpecError
from src.geometry.domain import Domain
from src.transforms.differential import PolarDifferentiator
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)

CONTOUR_OVERSAMPLING = 4


@dataclass(frozen=True)
class Integrand:
    """Sampled numerator G with its z and zbar derivatives, plus an optional boundary trace."""

    values: np.ndarray
    dz: np.ndarray
    dzbar: np.ndarray
    boundary: Optional[np.ndarray] = None


def weighted_integrand(g: GridFunction, domain: Domain, phase=None, tau: float = 0.0) -> Integrand:
    """
    Build G = g exp(tau (Phi - conj Phi)) and its derivatives.

    The derivatives of g are spectral; those of the exponential are exact,
    d/dz E = tau Phi' E and d/dzbar E = -tau conj(Phi') E.
    """
    diff = PolarDifferentiator(domain, "spectral")
    values = g.values
    gz = diff.dz(values)
    gzb = diff.dzbar(values)
    if phase is None or tau == 0:
        return Integrand(values, gz, gzb, g.boundary)

    z = domain.quadrature.z
    E = np.exp(2j * tau * phase.psi(z))
    slope = phase.dphi(z)
    boundary = None
    if g.boundary is not None:
        boundary = g.boundary * np.exp(2j * tau * phase.psi(domain.boundary_z))
    return Integrand(
        values=values * E,
        dz=(gz + tau * slope * values) * E,
        dzbar=(gzb - tau * np.conj(slope) * values) * E,
        boundary=boundary,
    )


def _interior_transform(integrand: Integrand, domain: Domain) -> np.ndarray:
    quad = domain.quadrature
    src = quad.z.ravel()
    w = quad.weights.ravel()
    G = integrand.values.ravel()
    Gz = integrand.dz.ravel()
    Gzb = integrand.dzbar.ravel()
    R2 = domain.radius ** 2

    out = np.empty(src.size, dtype=complex)
    block = LabSettings.TARGET_BLOCK_SIZE
    for start in range(0, src.size, block):
        sl = slice(start, start + block)
        zt = src[sl]
        d = src[None, :] - zt[:, None]
        num = G[None, :] - G[sl, None] - Gz[sl, None] * d - Gzb[sl, None] * np.conj(d)
        hit = d == 0
        d = np.where(hit, 1.0, d)
        num = np.where(hit, 0.0, num)
        quadrature_part = -np.sum(w[None, :] * num / d, axis=1) / np.pi
        closed = G[sl] * np.conj(zt) - Gz[sl] * R2 - 0.5 * Gzb[sl] * np.conj(zt) ** 2
        out[sl] = quadrature_part + closed
    return out.reshape(quad.shape)


def _boundary_transform(integrand: Integrand, domain: Domain) -> np.ndarray:
    quad = domain.quadrature
    src = quad.z.ravel()
    w = quad.weights.ravel()
    G = integrand.values.ravel()
    zb = domain.boundary_z
    Gb = integrand.boundary

    out = np.empty(zb.size, dtype=complex)
    block = LabSettings.TARGET_BLOCK_SIZE
    for start in range(0, zb.size, block):
        sl = slice(start, start + block)
        d = src[None, :] - zb[sl, None]
        num = G[None, :] - Gb[sl, None]
        out[sl] = -np.sum(w[None, :] * num / d, axis=1) / np.pi + Gb[sl] * np.conj(zb[sl])
    return out


def local_polynomial_fit(values: np.ndarray, domain: Domain, z0: complex, degree: int) -> Tuple[np.ndarray, np.ndarray, float]:
    """Least-squares polynomial in (zeta - z0, conj) on the nearest nodes."""
    src = domain.quadrature.z.ravel()
    exps = np.array([(m, t - m) for t in range(degree + 1) for m in range(t + 1)])
    n_nearest = min(3 * len(exps), src.size)
    dist = np.abs(src - z0)
    idx = np.argpartition(dist, n_nearest - 1)[:n_nearest]
    scale = max(float(np.max(dist[idx])), 1e-300)
    local = (src[idx] - z0) / scale
    A = local[:, None] ** exps[None, :, 0] * np.conj(local)[:, None] ** exps[None, :, 1]
    coef = la.lstsq(A, values[idx])[0]
    # back to unscaled monomials
    coef = coef / scale ** exps.sum(axis=1)
    return exps, coef, scale


def _jets_from_values(values: np.ndarray, domain: Domain, z0: complex, order: int) -> np.ndarray:
    degree = 4 if order <= 2 else order + 2
    exps, coef, _ = local_polynomial_fit(values, domain, z0, degree)
    quad = domain.quadrature
    src = quad.z.ravel()
    w = quad.weights.ravel()

    d = src - z0
    P = (d[:, None] ** exps[None, :, 0] * np.conj(d)[:, None] ** exps[None, :, 1]) @ coef
    h = values - P
    hit = d == 0
    d_safe = np.where(hit, 1.0, d)
    h = np.where(hit, 0.0, h)

    n_contour = CONTOUR_OVERSAMPLING * domain.boundary_z.size
    theta = 2.0 * np.pi * np.arange(n_contour) / n_contour
    zeta = domain.radius * np.exp(1j * theta)
    dc = zeta - z0
    # antiderivative in conj(zeta) of each monomial
    F = (dc[:, None] ** exps[None, :, 0] * np.conj(dc)[:, None] ** (exps[None, :, 1] + 1)
         / (exps[None, :, 1] + 1)) @ coef

    jets = np.empty(order + 1, dtype=complex)
    for j in range(order + 1):
        area = -factorial(j) / np.pi * np.sum(w * h / d_safe ** (j + 1))
        contour = -factorial(j) / n_contour * np.sum(F * zeta / dc ** (j + 1))
        jets[j] = area + contour
    return jets


def cauchy_jets(g: GridFunction, domain: Domain, z0: complex, order: int = 2) -> np.ndarray:
    """
    d^j/dz^j of T g at an interior point, j = 0..order.

    Args:
        g: Smooth sampled integrand
        domain: Discretized domain
        z0: Interior point, on or off the grid
        order: Highest derivative

    Returns:
        Complex array of length order + 1

    Raises:
        DomainSpecError: If z0 is not interior
    """
    if abs(z0) >= domain.radius:
        raise DomainSpecError(f"jet point {z0} is not interior")
    return _jets_from_values(g.values.ravel(), domain, complex(z0), order)


def dz_jets(g: GridFunction, domain: Domain, z0: complex, order: int = 2) -> np.ndarray:
    """d^j/dzbar^j of the d/dz inverse at z0, the conjugate of cauchy_jets on conj(g)."""
    return np.conj(cauchy_jets(g.conj(), domain, z0, order))


def _node_index(domain: Domain, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Flat interior and boundary node indices matching points, -1 where none."""
    quad = domain.quadrature
    R = domain.radius
    tol = 1e-12 * R
    flat = np.full(points.size, -1)
    bnd = np.full(points.size, -1)
    angle = np.mod(np.angle(points), 2.0 * np.pi)
    ir = np.argmin(np.abs(np.abs(points)[:, None] - quad.r[None, :]), axis=1)
    it = np.mod(np.rint(angle / quad.dtheta).astype(int), quad.theta.size)
    on_grid = np.abs(quad.z[ir, it] - points) <= tol
    flat[on_grid] = (ir * quad.theta.size + it)[on_grid]
    n_b = domain.boundary_z.size
    ib = np.mod(np.rint(angle * n_b / (2.0 * np.pi)).astype(int), n_b)
    on_bnd = np.abs(domain.boundary_z[ib] - points) <= tol
    bnd[on_bnd] = ib[on_bnd]
    return flat, bnd


def apply_transform(integrand: Integrand, domain: Domain,
                    targets: Optional[np.ndarray] = None) -> Union[Tuple[np.ndarray, Optional[np.ndarray]], np.ndarray]:
    """
    T of a sampled integrand.

    Returns (interior values, boundary values or None) when targets is None,
    otherwise the values at the given points.
    """
    if targets is None:
        interior = _interior_transform(integrand, domain)
        boundary = _boundary_transform(integrand, domain) if integrand.boundary is not None else None
        return interior, boundary

    points = np.atleast_1d(np.asarray(targets, dtype=complex)).ravel()
    R = domain.radius
    if np.any(np.abs(points) > R * (1.0 + 1e-12)):
        raise DomainSpecError(f"{int(np.sum(np.abs(points) > R))} targets lie outside the closed disk")

    interior = _interior_transform(integrand, domain).ravel()
    flat, bnd = _node_index(domain, points)
    out = np.empty(points.size, dtype=complex)
    boundary = None
    for k, z in enumerate(points):
        if flat[k] >= 0:
            out[k] = interior[flat[k]]
        elif bnd[k] >= 0:
            if integrand.boundary is None:
                raise DomainSpecError(f"boundary target {z} needs an integrand with a boundary trace")
            if boundary is None:
                boundary = _boundary_transform(integrand, domain)
            out[k] = boundary[bnd[k]]
        elif abs(z) < R * (1.0 - 1e-12):
            out[k] = _jets_from_values(integrand.values.ravel(), domain, complex(z), 0)[0]
        else:
            raise DomainSpecError(f"boundary target {z} is not a boundary node")
    return out


def dbar_inverse(g: GridFunction, domain: Domain,
                 targets: Optional[np.ndarray] = None) -> Union[GridFunction, np.ndarray]:
    """
    Cauchy transform T g, the right inverse of d/dzbar.

    Args:
        g: Sampled integrand; a boundary trace adds boundary-node outputs
        domain: Discretized domain
        targets: None for every node, or complex points in the closed disk

    Returns:
        GridFunction for node output, complex array for explicit targets

    Raises:
        DomainSpecError: If a target lies outside the closed disk
    """
    integrand = weighted_integrand(g, domain)
    result = apply_transform(integrand, domain, targets)
    if targets is None:
        interior, boundary = result
        logger.debug(f"Cauchy transform on {interior.size} nodes")
        return GridFunction(interior, boundary)
    return result


def dz_inverse(g: GridFunction, domain: Domain,
               targets: Optional[np.ndarray] = None) -> Union[GridFunction, np.ndarray]:
    """d/dz inverse, conj(T conj(g))."""
    result = dbar_inverse(g.conj(), domain, targets)
    if isinstance(result, GridFunction):
        return result.conj()
    return np.conj(result)
