"""
Partial Cauchy data on Gamma_tilde.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from src.exceptions import DomainSpecError
from src.geometry.bumps import arc_bump
from src.geometry.domain import Domain
from src.pde.solver import assemble_operator, solve_operator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CauchyDataSet:
    """
    Dirichlet inputs supported on Gamma_tilde and the paired traces there.

    Attributes:
        theta: Angles of the Gamma_tilde nodes
        basis: Dirichlet data of each input at every boundary node
        traces: u on Gamma_tilde, one row per input
        fluxes: du/dnu on Gamma_tilde, one row per input
        full_fluxes: du/dnu at every boundary node
        residuals: Backward error of each solve
    """

    theta: np.ndarray
    basis: np.ndarray = field(repr=False)
    traces: np.ndarray = field(repr=False)
    fluxes: np.ndarray = field(repr=False)
    full_fluxes: np.ndarray = field(repr=False)
    residuals: List[float] = field(default_factory=list)

    @property
    def n_basis(self) -> int:
        return int(self.basis.shape[0])

    def max_flux_discrepancy(self, other: "CauchyDataSet") -> float:
        if self.fluxes.shape != other.fluxes.shape:
            raise DomainSpecError("Cauchy data sets have different shapes")
        return float(np.max(np.abs(self.fluxes - other.fluxes)))

    def to_dataframe(self) -> pd.DataFrame:
        n_nodes = self.theta.size
        return pd.DataFrame({
            "basis_id": np.repeat(np.arange(self.n_basis), n_nodes),
            "theta": np.tile(self.theta, self.n_basis),
            "trace_re": self.traces.real.ravel(),
            "trace_im": self.traces.imag.ravel(),
            "flux_re": self.fluxes.real.ravel(),
            "flux_im": self.fluxes.imag.ravel(),
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_dataframe().to_csv(path, index=False)
        return path


def bump_basis(domain: Domain, n_basis: int) -> np.ndarray:
    """n_basis adjacent C2 arc bumps whose supports tile Gamma_tilde."""
    a, b = domain.spec.gamma_tilde
    width = (b - a) / n_basis
    centers = a + (np.arange(n_basis) + 0.5) * width
    theta = domain.boundary_theta
    basis = np.array([arc_bump(theta, c, 0.5 * width) for c in centers], dtype=complex)
    basis[:, domain.on_gamma0] = 0.0
    return basis


def cauchy_data(q, domain: Domain, n_basis: int, workers: int = 1) -> CauchyDataSet:
    """
    Solve the Dirichlet problem for every basis input and collect the Gamma_tilde traces.

    Args:
        q: Potential or grid values
        domain: Discretized domain
        n_basis: Number of bump inputs on Gamma_tilde
        workers: Threads for the independent solves

    Returns:
        CauchyDataSet

    Raises:
        DomainSpecError: If n_basis exceeds the Gamma_tilde node count
        SolverError: Propagated from the solver
    """
    tilde = domain.on_gamma_tilde
    if not 1 <= n_basis <= int(tilde.sum()):
        raise DomainSpecError(f"n_basis must lie in [1, {int(tilde.sum())}], got {n_basis}")
    basis = bump_basis(domain, n_basis)
    operator = assemble_operator(domain, c=getattr(q, "values", q))
    zero = np.zeros(domain.quadrature.shape, dtype=complex)

    def solve(g):
        return solve_operator(operator, zero, g, domain)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            solutions = list(executor.map(solve, basis))
    else:
        solutions = [solve(g) for g in basis]

    full_fluxes = np.array([s.flux for s in solutions])
    data = CauchyDataSet(
        theta=domain.boundary_theta[tilde],
        basis=basis,
        traces=basis[:, tilde],
        fluxes=full_fluxes[:, tilde],
        full_fluxes=full_fluxes,
        residuals=[s.residual for s in solutions],
    )
    logger.info(f"Cauchy data: {n_basis} inputs on {int(tilde.sum())} Gamma_tilde nodes, "
                f"max residual {max(data.residuals):.2e}")
    return data
