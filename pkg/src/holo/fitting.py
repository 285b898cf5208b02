"""
Least-squares constructions of holomorphic functions on the disk.

All fits work with real unknowns x = [Re c, Im c] for the coefficients of a
power series in the scaled variable z / R, and convert back to coefficients
in z on return.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from scipy.optimize import least_squares

from config.settings import LabSettings
from src.exceptions import DomainSpecError, FitError
from src.geometry.domain import Domain
from src.holo.series import HolomorphicFunction, monomial_jet_rows

logger = logging.getLogger(__name__)


def _constraint_space(C: Optional[np.ndarray], d: Optional[np.ndarray], n: int,
                      constraint_tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Particular solution of C x = d and a basis of the null space of C."""
    if C is None or C.shape[0] == 0:
        return np.zeros(n), np.eye(n)
    x_p = la.lstsq(C, d)[0]
    residual = float(np.max(np.abs(C @ x_p - d))) if d.size else 0.0
    scale = max(1.0, float(np.max(np.abs(d))) if d.size else 1.0)
    if residual > constraint_tol * scale:
        raise FitError(
            f"Constraints unsatisfiable at this degree (residual {residual:.3e})",
            residual=residual,
        )
    return x_p, la.null_space(C)


def constrained_lstsq(A: np.ndarray, b: np.ndarray, C: Optional[np.ndarray] = None,
                      d: Optional[np.ndarray] = None, reg: float = 0.0,
                      constraint_tol: float = 1e-10) -> np.ndarray:
    """
    Minimize ||A x - b||^2 + reg ||x||^2 subject to C x = d.

    Null-space method: a minimum-norm particular solution of the constraints
    plus a regularized least-squares correction inside their null space.

    Raises:
        FitError: If the constraints cannot be met
    """
    x_p, N = _constraint_space(C, d, A.shape[1], constraint_tol)
    if N.shape[1] == 0:
        return x_p

    rhs = b - A @ x_p
    if reg > 0:
        M = np.vstack([A @ N, np.sqrt(reg) * N])
        rhs = np.concatenate([rhs, -np.sqrt(reg) * x_p])
    else:
        M = A @ N
    y = la.lstsq(M, rhs)[0]
    return x_p + N @ y


def hinged_lstsq(A: np.ndarray, b: np.ndarray, T: np.ndarray, shift: np.ndarray,
                 C: Optional[np.ndarray] = None, d: Optional[np.ndarray] = None,
                 constraint_tol: float = 1e-10) -> np.ndarray:
    """
    Minimize ||A x - b||^2 + ||max(T x + shift, 0)||^2 subject to C x = d.

    The squared hinge is solved with scipy's trust-region least squares inside
    the constraint null space, started from the fit that asks T x = -2 shift.

    Raises:
        FitError: If the constraints cannot be met
    """
    x_p, N = _constraint_space(C, d, A.shape[1], constraint_tol)
    if N.shape[1] == 0:
        return x_p
    AN, TN = A @ N, T @ N
    r0, t0 = b - A @ x_p, T @ x_p + shift

    y0 = la.lstsq(np.vstack([AN, TN]), np.concatenate([r0, -t0 - shift]))[0]

    def residuals(y: np.ndarray) -> np.ndarray:
        return np.concatenate([AN @ y - r0, np.maximum(TN @ y + t0, 0.0)])

    def jacobian(y: np.ndarray) -> np.ndarray:
        active = (TN @ y + t0) > 0
        return np.vstack([AN, TN * active[:, None]])

    result = least_squares(residuals, y0, jac=jacobian, method="trf", xtol=1e-12, ftol=1e-12)
    return x_p + N @ result.x


def _complex_rows(points: np.ndarray, degree: int, scale: float) -> np.ndarray:
    """Complex evaluation rows of (z/scale)**k."""
    zeta = np.asarray(points, dtype=complex) / scale
    return zeta[:, None] ** np.arange(degree + 1)[None, :]


def _realify(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split complex rows acting on c into (Re f, Im f) rows acting on x."""
    return (np.hstack([rows.real, -rows.imag]), np.hstack([rows.imag, rows.real]))


def _to_function(x: np.ndarray, degree: int, scale: float) -> HolomorphicFunction:
    c = x[: degree + 1] + 1j * x[degree + 1:]
    return HolomorphicFunction(c / scale ** np.arange(degree + 1))


def _jet_rows(points: Sequence[complex], degree: int, scale: float, order: int = 2) -> np.ndarray:
    zeta = np.asarray(points, dtype=complex) / scale
    rows = monomial_jet_rows(zeta, degree, order)
    j = np.tile(np.arange(order + 1), len(zeta))
    return rows / scale ** j[:, None]


def amplitude_residual(a: HolomorphicFunction, domain: Domain) -> float:
    """Max |Re a| over Gamma_0 boundary nodes."""
    return float(np.max(np.abs(np.real(a(domain.boundary_z[domain.on_gamma0])))))


def fit_amplitude(domain: Domain, degree: int, x_hat: complex,
                  regularization: float = 1e-10) -> HolomorphicFunction:
    """
    Fit the amplitude a with Re a ~ 0 on Gamma_0 and a(x_hat) = 1.

    The objective weighs the Gamma_0 misfit against the boundary size of a,
    so the normalization does not buy a small misfit with a huge amplitude.

    Args:
        domain: Discretized domain
        degree: Power-series degree, at least 2
        x_hat: Interior normalization point
        regularization: Weight of the boundary L2 size penalty

    Returns:
        HolomorphicFunction a

    Raises:
        FitError: If the degree is too small or the normalization fails
    """
    if degree < 2:
        raise FitError(f"amplitude degree must be at least 2, got {degree}")
    if abs(x_hat) >= domain.radius:
        raise DomainSpecError(f"normalization point {x_hat} is not interior")

    R = domain.radius
    sw = np.sqrt(domain.arc_weights)
    re_g0, _ = _realify(_complex_rows(domain.boundary_z[domain.on_gamma0], degree, R))
    re_all, im_all = _realify(_complex_rows(domain.boundary_z, degree, R))

    A = np.vstack([
        sw[domain.on_gamma0][:, None] * re_g0,
        np.sqrt(regularization) * sw[:, None] * re_all,
        np.sqrt(regularization) * sw[:, None] * im_all,
    ])
    b = np.zeros(A.shape[0])
    re_x, im_x = _realify(_complex_rows(np.array([x_hat]), degree, R))
    C = np.vstack([re_x, im_x])
    d = np.array([1.0, 0.0])

    x = constrained_lstsq(A, b, C, d)
    a = _to_function(x, degree, R)

    value = complex(a(x_hat))
    if abs(value) < 0.5:
        raise FitError(
            f"Normalization a({x_hat}) = {value:.3e} failed; try a higher degree",
            residual=abs(value - 1.0),
        )

    logger.info(f"Amplitude fit degree {degree}: max |Re a| on Gamma_0 = {amplitude_residual(a, domain):.3e}")
    return a


@dataclass(frozen=True, eq=False)
class JetSpec:
    """Points with prescribed (value, d/dz, d2/dz2) triples."""

    points: Tuple[complex, ...]
    values: np.ndarray = field(repr=False)

    def __init__(self, points: Sequence[complex], values: Sequence[Sequence[complex]]):
        object.__setattr__(self, "points", tuple(complex(p) for p in points))
        arr = np.asarray(values, dtype=complex).reshape(len(self.points), 3)
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return len(self.points)

    def validate(self, domain: Domain) -> None:
        pts = np.array(self.points)
        if np.any(np.abs(pts) >= domain.radius):
            raise FitError("jet points must be interior")
        if self.m > 1:
            gaps = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(self.m, 1)]
            if np.min(gaps) <= domain.grid_spacing:
                raise FitError(f"jet points closer than the grid spacing {domain.grid_spacing:.3e}")


def _tangential_rows(points: np.ndarray, degree: int, scale: float) -> Tuple[np.ndarray, np.ndarray]:
    """(Re, Im) rows of d/dtau on the circle |z| = scale."""
    rows = _complex_rows(points, degree, scale)
    # d/dtau = -(1/R) d/dtheta, and d/dtheta zeta^k = i k zeta^k
    re_dtheta, im_dtheta = _realify(rows * (1j * np.arange(degree + 1))[None, :])
    return -re_dtheta / scale, -im_dtheta / scale


def jet_interpolate(domain: Domain, jets: JetSpec, degree: int,
                    regularization: float = 1e-10, margin: Optional[float] = None) -> HolomorphicFunction:
    """
    Holomorphic u meeting 3m jet constraints with Im u ~ 0 on Gamma_0.

    With a margin, dRe u / dtau <= -margin is also asked on Gamma_0 as a
    squared hinge. Re u is then monotone along Gamma_0, so u' has no zero
    on or next to it.

    Args:
        domain: Discretized domain
        jets: Points and (value, u', u'') targets
        degree: Power-series degree
        regularization: Weight of the boundary L2 size penalty
        margin: Lower bound on -dRe u / dtau along Gamma_0

    Returns:
        HolomorphicFunction u

    Raises:
        FitError: If the constraints cannot be met at this degree
    """
    jets.validate(domain)
    R = domain.radius
    g0 = domain.on_gamma0
    sw = np.sqrt(domain.arc_weights)
    _, im_g0 = _realify(_complex_rows(domain.boundary_z[g0], degree, R))
    re_all, im_all = _realify(_complex_rows(domain.boundary_z, degree, R))
    A = np.vstack([
        sw[g0][:, None] * im_g0,
        np.sqrt(regularization) * sw[:, None] * re_all,
        np.sqrt(regularization) * sw[:, None] * im_all,
    ])
    b = np.zeros(A.shape[0])

    rows = _jet_rows(jets.points, degree, R)
    re_c, im_c = _realify(rows)
    targets = jets.values.ravel()
    C = np.vstack([re_c, im_c])
    d = np.concatenate([targets.real, targets.imag])

    if margin is None:
        x = constrained_lstsq(A, b, C, d, constraint_tol=LabSettings.JET_TOL)
    else:
        re_tau, _ = _tangential_rows(domain.boundary_z[g0], degree, R)
        x = hinged_lstsq(A, b, sw[g0][:, None] * re_tau, margin * sw[g0], C, d,
                         constraint_tol=LabSettings.JET_TOL)
    u = _to_function(x, degree, R)

    achieved = np.concatenate([u.jet(p, 2) for p in jets.points])
    residual = float(np.max(np.abs(achieved - targets))) if targets.size else 0.0
    if residual > LabSettings.JET_TOL * max(1.0, float(np.max(np.abs(targets)))):
        raise FitError(f"Jet constraints missed by {residual:.3e} at degree {degree}", residual=residual)

    logger.debug(f"Jet interpolation m={jets.m} degree={degree}: constraint residual {residual:.2e}")
    return u


def fit_conjugate_pair(domain: Domain, rhs: np.ndarray, degree: int,
                       regularization: float = 1e-10) -> Tuple[HolomorphicFunction, HolomorphicFunction, float]:
    """
    Fit holomorphic (f0, f1) with f0 + conj(f1) = rhs on Gamma_0.

    Args:
        domain: Discretized domain
        rhs: Complex target at the Gamma_0 boundary nodes
        degree: Degree of both power series
        regularization: Weight of the boundary L2 size penalty

    Returns:
        (f0, f1, max misfit on Gamma_0)
    """
    R = domain.radius
    n = degree + 1
    sw = np.sqrt(domain.arc_weights)
    g0 = domain.on_gamma0
    rows = _complex_rows(domain.boundary_z[g0], degree, R)
    # conj(f1) = sum conj(c_k) conj(zeta^k): Re/Im rows act on x1 = [Re c, Im c]
    re0, im0 = _realify(rows)
    re1 = np.hstack([rows.real, -rows.imag])
    im1 = np.hstack([-rows.imag, -rows.real])

    w = sw[g0][:, None]
    fit_rows = np.vstack([
        np.hstack([w * re0, w * re1]),
        np.hstack([w * im0, w * im1]),
    ])
    fit_rhs = np.concatenate([sw[g0] * np.real(rhs), sw[g0] * np.imag(rhs)])

    all_rows = _complex_rows(domain.boundary_z, degree, R)
    re_a, im_a = _realify(all_rows)
    zeros = np.zeros_like(re_a)
    lam = np.sqrt(regularization) * sw[:, None]
    penalty = np.vstack([
        np.hstack([lam * re_a, zeros]),
        np.hstack([lam * im_a, zeros]),
        np.hstack([zeros, lam * re_a]),
        np.hstack([zeros, lam * im_a]),
    ])

    A = np.vstack([fit_rows, penalty])
    b = np.concatenate([fit_rhs, np.zeros(penalty.shape[0])])
    x = la.lstsq(A, b)[0]

    f0 = _to_function(x[: 2 * n], degree, R)
    f1 = _to_function(x[2 * n:], degree, R)
    zb = domain.boundary_z[g0]
    misfit = float(np.max(np.abs(f0(zb) + np.conj(f1(zb)) - rhs))) if rhs.size else 0.0
    return f0, f1, misfit


def fit_tangential_p(domain: Domain, degree: int, margin: Optional[float] = None,
                     regularization: float = 1e-8) -> HolomorphicFunction:
    """
    Fit p with Re p ~ 0 on Gamma_0 and dIm p / dtau <= -margin there.

    The sign constraint enters as a squared hinge (see hinged_lstsq).
    """
    if margin is None:
        margin = LabSettings.TANGENTIAL_MARGIN * domain.radius
    R = domain.radius
    g0 = domain.on_gamma0
    zb = domain.boundary_z[g0]
    sw = np.sqrt(domain.arc_weights)

    re_rows, _ = _realify(_complex_rows(zb, degree, R))
    _, im_tau = _tangential_rows(zb, degree, R)
    tangential = sw[g0][:, None] * im_tau

    re_all, im_all = _realify(_complex_rows(domain.boundary_z, degree, R))
    base = np.vstack([
        sw[g0][:, None] * re_rows,
        np.sqrt(regularization) * sw[:, None] * re_all,
        np.sqrt(regularization) * sw[:, None] * im_all,
    ])

    x = hinged_lstsq(base, np.zeros(base.shape[0]), tangential, margin * sw[g0])
    p = _to_function(x, degree, R)
    worst = float(np.max(im_tau @ x))
    logger.debug(f"Tangential fit: max dIm p/dtau on Gamma_0 = {worst:.3e} (margin {margin})")
    return p


@dataclass
class CRExtensionReport:
    """Outcome of the regularized Cauchy-Riemann extension."""

    eps_reg: float
    misfit_h2: float
    relative_misfit: float
    objective: float
    extendable: bool


def _arc_order(domain: Domain) -> np.ndarray:
    """Gamma_0 node indices in contiguous angular order."""
    idx = np.flatnonzero(domain.on_gamma0)
    start = np.flatnonzero(domain.on_gamma0 & ~np.roll(domain.on_gamma0, 1))
    if start.size == 0:
        return idx
    n = domain.on_gamma0.size
    order = (np.arange(n) + start[0]) % n
    return order[domain.on_gamma0[order]]


def _h2_operator(n: int, ds: float, periodic: bool) -> np.ndarray:
    """Stacked [I; D1; D2] scaled so ||op v||^2 approximates the H2 norm squared."""
    eye = np.eye(n)
    if periodic:
        d1 = (np.roll(eye, -1, axis=1) - eye) / ds
        d2 = (np.roll(eye, -1, axis=1) - 2 * eye + np.roll(eye, 1, axis=1)) / ds ** 2
    else:
        d1 = np.diff(eye, axis=0) / ds
        d2 = np.diff(eye, n=2, axis=0) / ds ** 2
    return np.sqrt(ds) * np.vstack([eye, d1, d2])


def cauchy_riemann_extend(B: Tuple[np.ndarray, np.ndarray], eps_reg: float, domain: Domain,
                          degree: int = 32) -> Tuple[HolomorphicFunction, CRExtensionReport]:
    """
    Regularized extension of Gamma_0 data (b1, b2) to f = phi + i psi.

    Minimizes ||(phi, psi) - B||^2_{H2(Gamma_0)} + eps ||(phi, psi)||^2_{H2(dOmega)}
    over power series, for which the interior Cauchy-Riemann residual vanishes
    identically.

    Args:
        B: Real pair sampled at the Gamma_0 nodes in boundary order
        eps_reg: Regularization weight in (0, 1]
        domain: Discretized domain
        degree: Power-series degree

    Returns:
        (f, report)
    """
    if not 0.0 < eps_reg <= 1.0:
        raise FitError(f"eps_reg must lie in (0, 1], got {eps_reg}")
    R = domain.radius
    ds = float(domain.arc_weights[0])
    order = _arc_order(domain)
    position = {int(j): k for k, j in enumerate(np.flatnonzero(domain.on_gamma0))}
    perm = np.array([position[int(j)] for j in order])
    b1 = np.asarray(B[0], dtype=float)[perm]
    b2 = np.asarray(B[1], dtype=float)[perm]

    re_g, im_g = _realify(_complex_rows(domain.boundary_z[order], degree, R))
    re_all, im_all = _realify(_complex_rows(domain.boundary_z, degree, R))
    H_arc = _h2_operator(order.size, ds, periodic=False)
    H_all = _h2_operator(domain.boundary_z.size, ds, periodic=True)

    A = np.vstack([
        H_arc @ re_g,
        H_arc @ im_g,
        np.sqrt(eps_reg) * (H_all @ re_all),
        np.sqrt(eps_reg) * (H_all @ im_all),
    ])
    b = np.concatenate([H_arc @ b1, H_arc @ b2, np.zeros(2 * H_all.shape[0])])
    x = la.lstsq(A, b)[0]
    f = _to_function(x, degree, R)

    misfit = float(np.sqrt(np.sum((H_arc @ (re_g @ x - b1)) ** 2) + np.sum((H_arc @ (im_g @ x - b2)) ** 2)))
    data_norm = float(np.sqrt(np.sum((H_arc @ b1) ** 2) + np.sum((H_arc @ b2) ** 2)))
    penalty = float(np.sum((H_all @ (re_all @ x)) ** 2) + np.sum((H_all @ (im_all @ x)) ** 2))
    relative = misfit / data_norm if data_norm > 0 else 0.0

    report = CRExtensionReport(
        eps_reg=eps_reg,
        misfit_h2=misfit,
        relative_misfit=relative,
        objective=misfit ** 2 + eps_reg * penalty,
        extendable=relative <= LabSettings.CR_EXTENDABLE_RTOL,
    )
    logger.info(f"Cauchy-Riemann extension eps={eps_reg:g}: relative H2 misfit {relative:.3e}")
    return f, report
