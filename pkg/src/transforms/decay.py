"""
Decay of the conjugated transforms across a tau sweep.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import linregress

from config.settings import LabSettings
from src.exceptions import HypothesisError
from src.geometry.domain import Domain, o_epsilon_mask
from src.holo.phase import PhaseFunction
from src.transforms.cauchy import local_polynomial_fit
from src.transforms.grid_function import GridFunction
from src.transforms.oscillatory import r_phi_tau, r_tilde_phi_tau

logger = logging.getLogger(__name__)

DECAY_MODES = ("collar_sup", "l2_r_of_z", "refined")
VANISHING_RTOL = 1e-6


@dataclass
class DecayReport:
    """
    Norms of the transforms across a tau sweep and their log-log slope.

    ``fitted_series`` names the sequence the slope was fitted to. For the
    refined mode that series is tau times the expansion residual, which
    should decrease rather than follow a power law.
    """

    mode: str
    tau_values: List[float]
    sup_norm_on_collar: List[float]
    l2_norm: List[float]
    fitted_slope: float
    slope_ci: float
    slope_defined: bool
    fitted_series: str
    series: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def fitted_values(self) -> List[float]:
        return self.series[self.fitted_series]

    @property
    def strictly_decreasing(self) -> bool:
        values = np.asarray(self.fitted_values)
        return bool(np.all(np.diff(values) < 0))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["strictly_decreasing"] = self.strictly_decreasing
        for key in ("fitted_slope", "slope_ci"):
            if not np.isfinite(data[key]):
                data[key] = None
        return data


def _check_sweep(tau_sweep: Sequence[float]) -> List[float]:
    taus = [float(t) for t in tau_sweep]
    if len(taus) < 4:
        raise HypothesisError(f"tau sweep needs at least 4 values, got {len(taus)}")
    if any(t <= 0 for t in taus) or any(b <= a for a, b in zip(taus, taus[1:])):
        raise HypothesisError(f"tau sweep must be positive and strictly increasing, got {taus}")
    return taus


def _fit_slope(taus: Sequence[float], values: Sequence[float]):
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        return float("nan"), float("nan"), False
    fit = linregress(np.log(taus), np.log(values))
    return float(fit.slope), float(fit.stderr), True


def _check_refined_hypothesis(g: GridFunction, phase: PhaseFunction, domain: Domain, epsilon: float) -> None:
    scale = max(g.sup(), 1e-300)
    collar = o_epsilon_mask(domain, epsilon)
    if g.sup(collar) > VANISHING_RTOL * scale:
        raise HypothesisError(
            f"refined mode needs g = 0 on the collar of width {epsilon:g}; sup there is {g.sup(collar):.3e}"
        )
    values = g.values.ravel()
    for point in phase.critical_points:
        _, coef, _ = local_polynomial_fit(values, domain, point.z, 2)
        if abs(coef[0]) > VANISHING_RTOL * scale:
            raise HypothesisError(
                f"refined mode needs g = 0 on the critical set; |g({point.z:.4g})| ~ {abs(coef[0]):.3e}"
            )


def _safe_quotient(g: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    out = np.zeros_like(g, dtype=complex)
    nonzero = g != 0
    out[nonzero] = g[nonzero] / denominator[nonzero]
    return out


def decay_probe(g: GridFunction, phase: PhaseFunction, tau_sweep: Sequence[float], mode: str,
                domain: Domain, epsilon: Optional[float] = None, workers: int = 1) -> DecayReport:
    """
    Measure the decay of R g and R~ g over a tau sweep.

    Modes:
        collar_sup: sup of |R g| + |R~ g| on the collar of width epsilon/2
        l2_r_of_z:  L2 norms of R~(conj(r) g) and R(r g), r the critical polynomial
        refined:    tau times the L2 residuals of R g + g / (tau conj Phi')
                    and R~ g - g / (tau Phi')

    Args:
        g: Input field
        phase: Validated phase
        tau_sweep: At least 4 increasing positive values
        mode: One of DECAY_MODES
        domain: Discretized domain
        epsilon: Collar width, COLLAR_FACTOR * R by default
        workers: Threads across tau values

    Returns:
        DecayReport

    Raises:
        HypothesisError: On a short sweep, or refined mode with g not vanishing
            on the collar and the critical set
    """
    if mode not in DECAY_MODES:
        raise ValueError(f"Unknown decay mode '{mode}', expected one of {DECAY_MODES}")
    taus = _check_sweep(tau_sweep)
    if epsilon is None:
        epsilon = LabSettings.COLLAR_FACTOR * domain.radius
    half_collar = o_epsilon_mask(domain, epsilon / 2.0)
    if mode == "refined":
        _check_refined_hypothesis(g, phase, domain, epsilon)

    z = domain.quadrature.z
    slope = phase.dphi(z)
    r_poly = phase.r_polynomial(z)

    def measure(tau: float) -> Dict[str, float]:
        if mode == "l2_r_of_z":
            rg = r_phi_tau(g * r_poly, phase, tau, domain)
            rtg = r_tilde_phi_tau(g * np.conj(r_poly), phase, tau, domain)
        else:
            rg = r_phi_tau(g, phase, tau, domain)
            rtg = r_tilde_phi_tau(g, phase, tau, domain)
        sup = float(np.max(np.abs(rg.values[half_collar]) + np.abs(rtg.values[half_collar])))
        row = {"sup": sup, "l2_r": rg.norm_l2(domain), "l2_r_tilde": rtg.norm_l2(domain)}
        if mode == "refined":
            plus = rg.values + _safe_quotient(g.values, tau * np.conj(slope))
            minus = rtg.values - _safe_quotient(g.values, tau * slope)
            row["refined_r"] = tau * GridFunction(plus).norm_l2(domain)
            row["refined_r_tilde"] = tau * GridFunction(minus).norm_l2(domain)
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(measure, taus))
    else:
        rows = [measure(tau) for tau in taus]

    series: Dict[str, List[float]] = {key: [row[key] for row in rows] for key in rows[0]}
    sup_norms = series["sup"]
    l2_norms = [a + b for a, b in zip(series["l2_r"], series["l2_r_tilde"])]
    series["l2"] = l2_norms
    if mode == "refined":
        series["refined"] = [a + b for a, b in zip(series["refined_r"], series["refined_r_tilde"])]
        fitted_series = "refined"
    elif mode == "l2_r_of_z":
        fitted_series = "l2"
    else:
        fitted_series = "sup"

    fitted_slope, slope_ci, defined = _fit_slope(taus, series[fitted_series])
    if not defined:
        logger.warning(f"Decay slope undefined for mode {mode}: a measured norm is zero")

    report = DecayReport(
        mode=mode,
        tau_values=taus,
        sup_norm_on_collar=sup_norms,
        l2_norm=l2_norms,
        fitted_slope=fitted_slope,
        slope_ci=slope_ci,
        slope_defined=defined,
        fitted_series=fitted_series,
        series=series,
    )
    logger.info(f"Decay probe {mode}: slope {fitted_slope:.3f} +/- {slope_ci:.3f} over tau {taus}")
    return report
