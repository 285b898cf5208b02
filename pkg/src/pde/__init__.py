"""
Forward Schrodinger solves, partial Cauchy data and Carleman-weighted problems.
"""

from src.pde.carleman import (
    CarlemanReport,
    CarlemanSolveResult,
    carleman_constant,
    carleman_estimate_check,
    carleman_solve,
    carleman_solve_many,
    random_h10_samples,
)
from src.pde.cauchy_data import CauchyDataSet, bump_basis, cauchy_data
from src.pde.potential import (
    AnalyticConductivity,
    POTENTIAL_CATALOG,
    Potential,
    build_potential,
    catalog_expression,
    conductivity_to_potential,
    exp_linear_conductivity,
    quadratic_x1_conductivity,
)
from src.pde.solver import DirichletSolution, PolarOperator, assemble_operator, solve_dirichlet

__all__ = [
    'AnalyticConductivity',
    'CarlemanReport',
    'CarlemanSolveResult',
    'CauchyDataSet',
    'DirichletSolution',
    'POTENTIAL_CATALOG',
    'PolarOperator',
    'Potential',
    'assemble_operator',
    'build_potential',
    'bump_basis',
    'carleman_constant',
    'carleman_estimate_check',
    'carleman_solve',
    'carleman_solve_many',
    'catalog_expression',
    'cauchy_data',
    'conductivity_to_potential',
    'exp_linear_conductivity',
    'quadratic_x1_conductivity',
    'random_h10_samples',
    'solve_dirichlet',
]
