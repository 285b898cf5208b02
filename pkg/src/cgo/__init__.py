"""
Complex geometrical optics solutions: Hermite polynomials, the partition of unity and the layered builder.
"""

from src.cgo.builder import (
    CGOSolution,
    CauchyInputs,
    CorrectorPair,
    FirstCorrector,
    assemble_first_corrector,
    build_cgo,
    build_cgo_pair,
    cauchy_inputs,
    fit_correctors,
    pde_residual,
    remainder_source,
    solve_remainder,
)
from src.cgo.hermite import HERMITE_KINDS, HermitePolynomial, hermite_from_jets, hermite_polynomials
from src.cgo.partition import partition_e1e2

__all__ = [
    'CGOSolution',
    'CauchyInputs',
    'CorrectorPair',
    'FirstCorrector',
    'HERMITE_KINDS',
    'HermitePolynomial',
    'assemble_first_corrector',
    'build_cgo',
    'build_cgo_pair',
    'cauchy_inputs',
    'fit_correctors',
    'hermite_from_jets',
    'hermite_polynomials',
    'partition_e1e2',
    'pde_residual',
    'remainder_source',
    'solve_remainder',
]
