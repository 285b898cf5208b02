"""
Pointwise recovery of q1 - q2 from the tau-dependence of the key identity.

For every tau the non-stationary terms of the expansion are subtracted from
int q u1 v dx, leaving the stationary-phase signal. Its coefficients on
cos(2 tau Im Phi(z_k)) / tau are fitted by least squares over the sweep.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.linalg as la

from config.settings import LabSettings
from src.analysis.identity import IdentityBreakdown, identity_terms
from src.analysis.stationary_phase import hessian_data
from src.cgo.builder import build_cgo_pair
from src.exceptions import CGOLabError, FitError, HypothesisError
from src.geometry.domain import Domain
from src.holo.fitting import fit_amplitude
from src.holo.phase import PhaseFunction, build_phase
from src.holo.series import HolomorphicFunction

logger = logging.getLogger(__name__)

MIN_SWEEP = 4


@dataclass
class RecoveryResult:
    """
    Estimate of (q1 - q2)(x_hat).

    Attributes:
        x_hat: Probe point
        tau_sweep: Parameters used in the fit
        estimate: Fitted q(x_hat)
        truth: q1(x_hat) - q2(x_hat) when both potentials have closed forms
        relative_error: |estimate - truth| / |truth|, absolute when truth is 0
        condition: Condition number of the column-normalized fit design
        critical_point: Critical point the estimate belongs to
        signal: Stationary part of int q u1 v dx per tau
    """

    x_hat: complex
    tau_sweep: List[float]
    estimate: complex
    truth: Optional[complex]
    relative_error: Optional[float]
    condition: float
    critical_point: complex
    signal: List[complex] = field(default_factory=list)
    breakdowns: List[IdentityBreakdown] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        def pair(value):
            return None if value is None else [float(np.real(value)), float(np.imag(value))]

        return {
            "x_hat": pair(self.x_hat),
            "tau_sweep": self.tau_sweep,
            "estimate": pair(self.estimate),
            "truth": pair(self.truth),
            "relative_error": self.relative_error,
            "condition": self.condition,
            "critical_point": pair(self.critical_point),
            "signal": [pair(s) for s in self.signal],
        }


def _truth(q1, q2, x_hat: complex) -> Optional[complex]:
    try:
        point = np.array([x_hat], dtype=complex)
        return complex(np.ravel(q1(point))[0] - np.ravel(q2(point))[0])
    except (HypothesisError, TypeError):
        return None


def _non_stationary(breakdown: IdentityBreakdown) -> complex:
    return (breakdown.zero_mode + breakdown.corrector_first_order + breakdown.corrector_second_order
            + sum(breakdown.minus_integrals) + sum(breakdown.plus_integrals))


def stationary_design(phase: PhaseFunction, taus: np.ndarray) -> np.ndarray:
    """
    Columns per critical point: cos(2 tau s) / tau, sin(2 tau s) / tau**2 (s != 0 only),
    cos(2 tau s) / tau**3, each times 2 pi / |Phi''|, with s = Im Phi at the point.

    The first column of each point comes first, in critical-point order.
    """
    leading, corrections = [], []
    for point in phase.critical_points:
        data = hessian_data(phase, point.z)
        scale = 2.0 * np.pi / data.sqrt_abs_det
        cos = np.cos(2.0 * taus * data.im_phi)
        leading.append(scale * cos / taus)
        if abs(data.im_phi) * float(np.max(taus)) > 1e-8:
            corrections.append(scale * np.sin(2.0 * taus * data.im_phi) / taus ** 2)
        corrections.append(scale * cos / taus ** 3)
    return np.column_stack(leading + corrections)


def _fit(design: np.ndarray, signal: np.ndarray) -> Tuple[np.ndarray, float]:
    norms = np.linalg.norm(design, axis=0)
    norms = np.where(norms == 0, 1.0, norms)
    scaled = design / norms
    singular = la.svdvals(scaled)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else float("inf")
    coefficients = la.lstsq(scaled, signal)[0] / norms
    return coefficients, condition


def recover_pointwise(q1, q2, domain: Domain, x_hat: complex, tau_sweep: Sequence[float],
                      phase: Optional[PhaseFunction] = None, a: Optional[HolomorphicFunction] = None,
                      epsilon: float = 0.0, delta: float = 0.0, workers: int = 1) -> RecoveryResult:
    """
    Estimate (q1 - q2)(x_hat) from a tau sweep.

    Args:
        q1, q2: Potentials
        domain: Discretized domain
        x_hat: Probe point
        tau_sweep: At least four parameters, all within the oscillation budget
        phase: Phase with a critical point at x_hat; built by build_phase when omitted
        a: Amplitude with a(x_hat) = 1; fitted by fit_amplitude when omitted
        epsilon: Tangential weight passed to build_phase
        delta: Separating weight passed to build_phase
        workers: Threads for the two CGO builds per tau

    Returns:
        RecoveryResult

    Raises:
        FitError: If the sweep is too short or the fit is ill-conditioned
    """
    taus = np.array(sorted(float(t) for t in tau_sweep))
    if taus.size < MIN_SWEEP:
        raise FitError(f"recovery needs at least {MIN_SWEEP} tau values, got {taus.size}")
    x_hat = complex(x_hat)
    if phase is None:
        phase = build_phase(domain, x_hat, epsilon, delta)
    if a is None:
        a = fit_amplitude(domain, LabSettings.AMPLITUDE_DEGREE, x_hat)
    if not phase.critical_points:
        raise HypothesisError("recovery needs a phase with an interior critical point")

    design = stationary_design(phase, taus)
    n_points = len(phase.critical_points)
    if design.shape[1] > taus.size:
        raise FitError(f"{design.shape[1]} unknowns from {n_points} critical points need at least "
                       f"{design.shape[1]} tau values; widen the sweep")

    breakdowns, signal = [], []
    for tau in taus:
        u1, v = build_cgo_pair(q1, q2, phase, a, tau, domain, workers=workers)
        breakdown = identity_terms(q1, q2, u1, v, domain)
        breakdowns.append(breakdown)
        signal.append(breakdown.direct - _non_stationary(breakdown))
    signal = np.array(signal, dtype=complex)

    coefficients, condition = _fit(design, signal)
    if condition > LabSettings.RECOVERY_MAX_CONDITION:
        raise FitError(f"recovery fit condition {condition:.2e} exceeds {LabSettings.RECOVERY_MAX_CONDITION:g}; "
                       f"use a wider tau sweep", residual=condition)

    critical = phase.critical_z
    target = int(np.argmin(np.abs(critical - x_hat)))
    z_crit = complex(critical[target])
    weight = abs(complex(a(z_crit))) ** 2
    estimate = complex(coefficients[target]) / weight

    truth = _truth(q1, q2, x_hat)
    error = None
    if truth is not None:
        error = float(abs(estimate - truth) / abs(truth)) if abs(truth) > 0 else float(abs(estimate - truth))
    logger.info(f"Recovery at {x_hat:.3g}: estimate {estimate:.4g}, truth {truth}, condition {condition:.2e}")

    return RecoveryResult(
        x_hat=x_hat,
        tau_sweep=[float(t) for t in taus],
        estimate=estimate,
        truth=truth,
        relative_error=error,
        condition=condition,
        critical_point=z_crit,
        signal=[complex(s) for s in signal],
        breakdowns=breakdowns,
    )


@dataclass
class RecoveryMap:
    """Recovery results over a probe grid; failed probes keep their error message."""

    points: List[complex]
    results: List[Optional[RecoveryResult]]
    errors: Dict[int, str] = field(default_factory=dict)

    @property
    def estimates(self) -> np.ndarray:
        return np.array([np.nan if r is None else r.estimate for r in self.results], dtype=complex)

    def to_dataframe(self) -> pd.DataFrame:
        rows = []
        for z, result in zip(self.points, self.results):
            estimate = np.nan if result is None else result.estimate
            truth = np.nan if result is None or result.truth is None else result.truth
            error = np.nan if result is None or result.relative_error is None else result.relative_error
            rows.append({
                "x1": z.real,
                "x2": z.imag,
                "re_c": np.real(estimate),
                "im_c": np.imag(estimate),
                "truth_re": np.real(truth),
                "truth_im": np.imag(truth),
                "rel_err": error,
            })
        return pd.DataFrame(rows, columns=["x1", "x2", "re_c", "im_c", "truth_re", "truth_im", "rel_err"])

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_dataframe().to_csv(path, index=False)
        return path


def square_probe_grid(half_width: float, n: int, center: complex = 0j) -> List[complex]:
    """n x n probe points on the square of the given half width, row-major in x2 then x1."""
    ticks = np.linspace(-half_width, half_width, n) if n > 1 else np.zeros(1)
    return [complex(center + x1 + 1j * x2) for x2 in ticks for x1 in ticks]


def recovery_map(q1, q2, domain: Domain, probe_grid: Sequence[complex], tau_sweep: Sequence[float],
                 workers: int = 1, **kwargs) -> RecoveryMap:
    """
    Run recover_pointwise at every probe point.

    Failures are recorded per point and the scan continues.
    """
    points = [complex(p) for p in probe_grid]

    def probe(point: complex):
        try:
            return recover_pointwise(q1, q2, domain, point, tau_sweep, **kwargs), None
        except CGOLabError as e:
            logger.warning(f"Recovery probe at {point:.3g} skipped: {e}")
            return None, str(e)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(probe, points))
    else:
        outcomes = [probe(p) for p in points]

    results = [result for result, _ in outcomes]
    errors = {i: message for i, (_, message) in enumerate(outcomes) if message is not None}
    logger.info(f"Recovery map: {len(points) - len(errors)} of {len(points)} probes succeeded")
    return RecoveryMap(points, results, errors)
