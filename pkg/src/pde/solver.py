"""
Sparse second-order Dirichlet solver on the polar grid.

The operator

    L u = u_rr + u_r / r + u_thetatheta / r^2 + b_r u_r + b_theta u_theta + c u

is discretized with three-point differences on the nonuniform radial nodes
and periodic centered differences in the angle. The innermost ring couples
across the origin to the node at theta + pi, so the angular node count must
be even. The outermost ring couples to the Dirichlet data at r = R.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, norm as sparse_norm, onenormest, splu

from config.settings import LabSettings
from src.exceptions import DomainSpecError, SolverError
from src.geometry.domain import Domain
from src.transforms.grid_function import GridFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PolarOperator:
    """Assembled interior matrix and the coupling of the last ring to r = R."""

    matrix: sp.csc_matrix
    boundary_coupling: np.ndarray
    row_scale: np.ndarray

    def rhs(self, f: np.ndarray, g_grid: np.ndarray) -> np.ndarray:
        b = np.asarray(f, dtype=complex).ravel().copy()
        n_t = g_grid.size
        b[-n_t:] -= self.boundary_coupling * g_grid
        return b


@dataclass(frozen=True, eq=False)
class DirichletSolution:
    """
    Attributes:
        field: Solution at the grid nodes with the Dirichlet data as boundary trace
        flux: Outward normal derivative at the boundary nodes
        residual: Backward error max|A u - b| / (max|b| + max|u|) of the scaled system
        pivot_ratio: Reciprocal 1-norm condition estimate of the scaled system
        image: The discrete operator applied to the solution, f up to the residual
    """

    field: GridFunction
    flux: np.ndarray
    residual: float
    pivot_ratio: float
    image: Optional[np.ndarray] = field(default=None, repr=False)


def _coefficient(value: Optional[Union[np.ndarray, complex]], shape: Tuple[int, int]) -> np.ndarray:
    if value is None:
        return np.zeros(shape, dtype=complex)
    return np.broadcast_to(np.asarray(value, dtype=complex), shape)


def assemble_operator(domain: Domain, c: Union[np.ndarray, complex, None] = None,
                      b_r: Union[np.ndarray, complex, None] = None,
                      b_theta: Union[np.ndarray, complex, None] = None) -> PolarOperator:
    """
    Assemble L on the interior nodes, rows equilibrated by their largest entry.

    Args:
        domain: Discretized domain
        c: Zeroth-order coefficient per node
        b_r: Coefficient of u_r per node
        b_theta: Coefficient of u_theta per node

    Returns:
        PolarOperator

    Raises:
        DomainSpecError: For an odd angular node count
    """
    quad = domain.quadrature
    n_r, n_t = quad.shape
    if n_t % 2:
        raise DomainSpecError(f"the polar solver needs an even angular node count, got {n_t}")
    R = domain.radius
    dt = quad.dtheta
    r = quad.r
    shape = (n_r, n_t)
    c = _coefficient(c, shape)
    b_r = _coefficient(b_r, shape)
    b_theta = _coefficient(b_theta, shape)

    ii, kk = np.meshgrid(np.arange(n_r), np.arange(n_t), indexing="ij")
    index = ii * n_t + kk
    rr = r[:, None] * np.ones((1, n_t))

    # radial neighbours; ring 0 reaches across the origin
    inner_r = np.concatenate([[-r[0]], r[:-1]])
    outer_r = np.concatenate([r[1:], [R]])
    h1 = (r - inner_r)[:, None]
    h2 = (outer_r - r)[:, None]
    minus = np.where(ii == 0, (kk + n_t // 2) % n_t, (ii - 1) * n_t + kk)
    plus = index + n_t

    beta = 1.0 / rr + b_r
    a_minus = (2.0 - beta * h2) / (h1 * (h1 + h2))
    a_center = (-2.0 + beta * (h2 - h1)) / (h1 * h2)
    a_plus = (2.0 + beta * h1) / (h2 * (h1 + h2))

    ang = 1.0 / (rr ** 2 * dt ** 2)
    a_left = ang - b_theta / (2.0 * dt)
    a_right = ang + b_theta / (2.0 * dt)
    a_center = a_center - 2.0 * ang + c

    left = ii * n_t + (kk - 1) % n_t
    right = ii * n_t + (kk + 1) % n_t
    interior = ii < n_r - 1

    rows = np.concatenate([index.ravel(), index.ravel(), index.ravel(), index.ravel(), index[interior]])
    cols = np.concatenate([index.ravel(), minus.ravel(), left.ravel(), right.ravel(), plus[interior]])
    vals = np.concatenate([a_center.ravel(), a_minus.ravel(), a_left.ravel(), a_right.ravel(), a_plus[interior]])

    size = n_r * n_t
    A = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    scale = 1.0 / np.asarray(abs(A).max(axis=1).todense()).ravel()
    A = sp.diags(scale) @ A
    coupling = scale[-n_t:] * a_plus[-1]
    return PolarOperator(matrix=A.tocsc(), boundary_coupling=coupling, row_scale=scale)


def boundary_to_grid(domain: Domain, g_bnd: np.ndarray) -> np.ndarray:
    """Boundary-node data resampled at the grid angles, periodic linear interpolation."""
    g_bnd = np.asarray(g_bnd, dtype=complex)
    theta = domain.quadrature.theta
    if g_bnd.size == theta.size:
        return g_bnd
    bt = domain.boundary_theta
    return (np.interp(theta, bt, g_bnd.real, period=2.0 * np.pi)
            + 1j * np.interp(theta, bt, g_bnd.imag, period=2.0 * np.pi))


def grid_to_boundary(domain: Domain, ring: np.ndarray) -> np.ndarray:
    theta = domain.quadrature.theta
    if ring.size == domain.boundary_z.size:
        return ring
    bt = domain.boundary_theta
    return (np.interp(bt, theta, ring.real, period=2.0 * np.pi)
            + 1j * np.interp(bt, theta, ring.imag, period=2.0 * np.pi))


def one_sided_flux(domain: Domain, values: np.ndarray, g_grid: np.ndarray) -> np.ndarray:
    """d/dr at r = R from the data and the last two rings, second order."""
    r = domain.quadrature.r
    R = domain.radius
    x0, x1, x2 = R, r[-1], r[-2]
    w0 = 1.0 / (x0 - x1) + 1.0 / (x0 - x2)
    w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2))
    w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1))
    return w0 * g_grid + w1 * values[-1] + w2 * values[-2]


def _factorize(matrix: sp.csc_matrix, what: str = "Dirichlet system"):
    try:
        lu = splu(matrix)
    except RuntimeError as e:
        raise SolverError(
            f"{what} is singular ({e}); perturb q away from the Dirichlet spectrum",
            pivot_ratio=0.0,
        ) from e

    inverse = LinearOperator(
        matrix.shape,
        matvec=lambda x: lu.solve(np.asarray(x, dtype=complex).ravel()),
        rmatvec=lambda x: lu.solve(np.asarray(x, dtype=complex).ravel(), trans="H"),
        dtype=complex,
    )
    ratio = 1.0 / (sparse_norm(matrix, 1) * onenormest(inverse))
    if not np.isfinite(ratio) or ratio < LabSettings.SOLVER_PIVOT_RTOL:
        raise SolverError(
            f"{what} is near singular (pivot ratio {ratio:.2e}); "
            f"perturb q away from the Dirichlet spectrum",
            pivot_ratio=float(ratio) if np.isfinite(ratio) else 0.0,
        )
    return lu, float(ratio)


def _backward_error(resid: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    return float(np.max(np.abs(resid)) / max(float(np.max(np.abs(b))) + float(np.max(np.abs(x))), 1e-300))


def solve_operator(operator: PolarOperator, f: np.ndarray, g_bnd: np.ndarray,
                   domain: Domain) -> DirichletSolution:
    """Solve L u = f with u = g_bnd on the boundary nodes."""
    quad = domain.quadrature
    g_grid = boundary_to_grid(domain, g_bnd)
    f = np.asarray(f, dtype=complex)
    b = operator.rhs(operator.row_scale * f.ravel(), g_grid)
    lu, ratio = _factorize(operator.matrix)
    u = lu.solve(b)

    resid = operator.matrix @ u - b
    # normwise backward error of the equilibrated system
    residual = _backward_error(resid, b, u)
    if residual > LabSettings.SOLVER_TOL:
        logger.warning(f"Dirichlet residual {residual:.2e} exceeds tolerance {LabSettings.SOLVER_TOL:.0e}")

    values = u.reshape(quad.shape)
    flux = grid_to_boundary(domain, one_sided_flux(domain, values, g_grid))
    field = GridFunction(values, np.asarray(g_bnd, dtype=complex))
    image = f.reshape(quad.shape) + (resid / operator.row_scale).reshape(quad.shape)
    return DirichletSolution(field=field, flux=flux, residual=residual, pivot_ratio=ratio, image=image)


def grid_gamma_tilde(domain: Domain) -> np.ndarray:
    """Grid angles that lie on Gamma_tilde."""
    theta_a, theta_b = domain.spec.gamma_tilde
    theta = domain.quadrature.theta
    return (theta >= theta_a) & (theta < theta_b)


@dataclass(frozen=True, eq=False)
class LeastNormSystem:
    """
    Factorized saddle-point system for the smallest solution of L u = f with
    the boundary values on the free grid angles left as unknowns.

    Attributes:
        operator: Assembled interior operator
        free: Grid angles whose boundary value is an unknown
        constraint: [A, B], the equilibrated interior rows acting on (u, free ring values)
        lu: Factorization of [[I, C^H], [C, 0]]
        pivot_ratio: Reciprocal 1-norm condition estimate of the saddle-point matrix
    """

    operator: PolarOperator
    free: np.ndarray
    constraint: sp.csc_matrix
    lu: Any
    pivot_ratio: float


def least_norm_system(operator: PolarOperator, free: np.ndarray) -> LeastNormSystem:
    """
    Factorize the least-norm system once; solve_least_norm reuses it per right-hand side.

    Raises:
        SolverError: If the saddle-point matrix is near singular
    """
    n_interior = operator.matrix.shape[0]
    free = np.asarray(free, dtype=bool)
    n_t = free.size
    free_idx = np.flatnonzero(free)
    coupling = sp.csc_matrix(
        (operator.boundary_coupling[free_idx], (n_interior - n_t + free_idx, np.arange(free_idx.size))),
        shape=(n_interior, free_idx.size),
    )
    C = sp.hstack([operator.matrix, coupling], format="csc")
    n = C.shape[1]
    K = sp.bmat([[sp.identity(n, dtype=complex, format="csc"), C.conj().T], [C, None]], format="csc")
    lu, ratio = _factorize(K, "least-norm system")
    return LeastNormSystem(operator=operator, free=free, constraint=C, lu=lu, pivot_ratio=ratio)


def solve_least_norm(system: LeastNormSystem, f: np.ndarray, g_bnd: np.ndarray,
                     domain: Domain) -> DirichletSolution:
    """
    Smallest solution in the nodal 2-norm of L u = f with u = g_bnd on the fixed angles.

    The boundary trace keeps g_bnd on Gamma_0 nodes and the solved ring values elsewhere.
    """
    quad = domain.quadrature
    operator = system.operator
    g_grid = np.array(boundary_to_grid(domain, g_bnd), dtype=complex)
    g_grid[system.free] = 0.0
    f = np.asarray(f, dtype=complex)
    b = operator.rhs(operator.row_scale * f.ravel(), g_grid)

    C = system.constraint
    n = C.shape[1]
    x = system.lu.solve(np.concatenate([np.zeros(n, dtype=complex), b]))[:n]
    resid = C @ x - b
    residual = _backward_error(resid, b, x)
    if residual > LabSettings.SOLVER_TOL:
        logger.warning(f"Least-norm residual {residual:.2e} exceeds tolerance {LabSettings.SOLVER_TOL:.0e}")

    n_interior = operator.matrix.shape[0]
    values = x[:n_interior].reshape(quad.shape)
    ring = g_grid.copy()
    ring[system.free] = x[n_interior:]
    flux = grid_to_boundary(domain, one_sided_flux(domain, values, ring))
    trace = np.array(grid_to_boundary(domain, ring), dtype=complex)
    g_bnd = np.asarray(g_bnd, dtype=complex)
    trace[domain.on_gamma0] = g_bnd[domain.on_gamma0]
    image = f.reshape(quad.shape) + (resid / operator.row_scale).reshape(quad.shape)
    return DirichletSolution(field=GridFunction(values, trace), flux=flux, residual=residual,
                             pivot_ratio=system.pivot_ratio, image=image)


def solve_dirichlet(q, f: Optional[GridFunction], g_bnd: np.ndarray, domain: Domain) -> DirichletSolution:
    """
    Solve Laplacian(u) + q u = f in the disk, u = g_bnd on the boundary.

    Args:
        q: Potential, GridFunction, array of grid values or scalar
        f: Source, None for zero
        g_bnd: Dirichlet data at the boundary nodes
        domain: Discretized domain

    Returns:
        DirichletSolution with the field, its flux and the discrete residual

    Raises:
        SolverError: If the system is near singular (q close to a Dirichlet eigenvalue)
        DomainSpecError: If g_bnd does not match the boundary nodes
    """
    g_bnd = np.asarray(g_bnd, dtype=complex)
    if g_bnd.shape != domain.boundary_z.shape:
        raise DomainSpecError(f"Dirichlet data has shape {g_bnd.shape}, expected {domain.boundary_z.shape}")
    q_values = getattr(q, "values", q)
    operator = assemble_operator(domain, c=q_values)
    f_values = np.zeros(domain.quadrature.shape, dtype=complex) if f is None else f.values
    solution = solve_operator(operator, f_values, g_bnd, domain)
    logger.debug(f"Dirichlet solve: residual {solution.residual:.2e}, pivot ratio {solution.pivot_ratio:.2e}")
    return solution
