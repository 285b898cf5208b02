"""
Subcommands. Each builds an ExperimentRunner, records its checks and
returns the RunReport; exit codes are decided in cgolab.py.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.experiment import ExperimentConfig
from config.settings import LabSettings
from src.analysis import (
    hessian_data,
    identity_terms,
    oscillatory_integral,
    recover_pointwise,
    recovery_map,
    square_probe_grid,
    stationary_phase_leading,
    two_point_beat,
)
from src.cgo import build_cgo_pair
from src.geometry import c2_bump
from src.holo import (
    HolomorphicFunction,
    PhaseFunction,
    amplitude_residual,
    boundary_phase_identity,
    build_phase,
    cauchy_riemann_extend,
    critical_set_distance,
    fit_amplitude,
    validate_phase,
)
from src.pde import (
    cauchy_data,
    carleman_constant,
    carleman_estimate_check,
    carleman_solve,
    random_h10_samples,
)
from src.pde.potential import gaussian_bump
from src.runner import ExperimentRunner, RunReport
from src.transforms import (
    ENERGY_CASES,
    GridFunction,
    decay_probe,
    dbar_inverse,
    dz_inverse,
    energy_identity_check,
    r_phi_tau,
    r_tilde_phi_tau,
    tau_max,
    transport_residual,
)

logger = logging.getLogger(__name__)

DbPath = Optional[Union[str, Path]]

CAUCHY_BASIS = 8
SCALE_FACTOR = 3.7
VANISHING_SLOPE = -1.8
VANISHING_SLOPE_MIN_TAU = 80.0


def _decreasing(values: Sequence[float], strict: bool = True) -> bool:
    values = np.asarray(values, dtype=float)
    if values.size < 2 or not np.all(np.isfinite(values)):
        return False
    steps = np.diff(values)
    return bool(np.all(steps < 0) if strict else np.all(steps <= 1e-12 * np.max(np.abs(values))))


def _label(tau: float) -> str:
    return f"tau={tau:g}"


def _phase(runner: ExperimentRunner) -> Optional[PhaseFunction]:
    cfg = runner.config.phase
    return runner.attempt("phase_build", build_phase, runner.domain, cfg.x_hat, cfg.epsilon, cfg.delta,
                          degrees=cfg.degrees, workers=runner.jobs)


def _amplitude(runner: ExperimentRunner) -> Optional[HolomorphicFunction]:
    cfg = runner.config.phase
    return runner.attempt("amplitude_fit", fit_amplitude, runner.domain, cfg.amplitude_degree, cfg.x_hat)


def _ones(domain) -> GridFunction:
    return GridFunction.from_callable(domain, lambda z: np.ones_like(z, dtype=complex))


def _clear_center(phase: PhaseFunction, radius: float) -> complex:
    """A point of |z| <= 0.45 R as far as possible from the critical set."""
    candidates = [0j] + [0.45 * radius * np.exp(0.25j * np.pi * k) for k in range(8)]
    critical = phase.critical_z
    if critical.size == 0:
        return 0j
    return complex(max(candidates, key=lambda c: float(np.min(np.abs(critical - c)))))


# transforms-selftest -----------------------------------------------------------

def _transforms_selftest(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    z = domain.quadrature.z

    def closed_form():
        one = _ones(domain)
        with runner.timed("closed_form"):
            t_one = dbar_inverse(one, domain)
            s_one = dz_inverse(one, domain)
        runner.check("dbar_inverse_one", float(np.max(np.abs(t_one.values - np.conj(z)))), tol("closed_form"))
        runner.check("dz_inverse_one", float(np.max(np.abs(s_one.values - z))), tol("closed_form"))
        runner.write_csv("dbar_inverse_one.csv", t_one.to_dataframe(domain))

    runner.attempt("closed_form", closed_form)

    phase = _phase(runner)
    if phase is None:
        return
    g = GridFunction.from_callable(domain, gaussian_bump(config.phase.x_hat, 0.3))

    def transport():
        rows = []
        for tau in config.tau_sweep:
            with runner.timed("transport"):
                rg = r_phi_tau(g, phase, tau, domain)
                rtg = r_tilde_phi_tau(g, phase, tau, domain)
            rows.append({
                "tau": tau,
                "r": transport_residual(rg, g, phase, tau, domain, "r"),
                "r_tilde": transport_residual(rtg, g, phase, tau, domain, "r_tilde"),
            })
        frame = pd.DataFrame(rows, columns=["tau", "r", "r_tilde"])
        runner.write_csv("transport_residuals.csv", frame)
        runner.check("transport_r", frame["r"].max(), tol("transport"))
        runner.check("transport_r_tilde", frame["r_tilde"].max(), tol("transport"))

    runner.attempt("transport", transport)

    def decay():
        low, high = tol("decay_slope_low"), tol("decay_slope_high")
        center = _clear_center(phase, domain.radius)
        gap = float(np.min(np.abs(phase.critical_z - center))) if phase.critical_z.size else domain.radius
        radius = min(0.3 * domain.radius, 0.6 * gap, 0.8 * domain.radius - abs(center))
        away = GridFunction.from_callable(domain, lambda zz: c2_bump(zz, center, radius).astype(complex))

        # supported away from the collar and the critical set
        with runner.timed("decay"):
            plain = decay_probe(away, phase, config.tau_sweep, "collar_sup", domain, workers=runner.jobs)
        runner.write_json("decay_collar_sup.json", plain)
        runner.check("decay_collar_slope", plain.fitted_slope, high,
                     passed=plain.slope_defined and plain.fitted_slope <= high,
                     detail=f"bump at {center:.3g}, radius {radius:.3g}")

        # nonzero on the collar, so the local term g / (tau conj Phi') sets the rate
        spread = GridFunction.from_callable(domain, gaussian_bump(0j, 0.5 * domain.radius))
        with runner.timed("decay"):
            window = decay_probe(spread, phase, config.tau_sweep, "collar_sup", domain, workers=runner.jobs)
        runner.write_json("decay_collar_window.json", window)
        runner.check("decay_collar_window", window.fitted_slope, high,
                     passed=window.slope_defined and low <= window.fitted_slope <= high,
                     detail=f"window [{low:g}, {high:g}]")

        with runner.timed("decay"):
            weighted = decay_probe(_ones(domain), phase, config.tau_sweep, "l2_r_of_z", domain, workers=runner.jobs)
        runner.write_json("decay_l2_r_of_z.json", weighted)
        runner.check("decay_l2_r_of_z_slope", weighted.fitted_slope, high,
                     passed=weighted.slope_defined and weighted.fitted_slope <= high)

        # r(z) times a bump: zero on the critical set to first order and zero on the collar
        hub = phase.x_hat_eps if phase.x_hat_eps is not None else 0j
        reach = min(0.6 * domain.radius, 0.85 * domain.radius - abs(hub))
        vanishing = GridFunction(phase.r_polynomial(z) * c2_bump(z, hub, reach))
        with runner.timed("decay"):
            second = decay_probe(vanishing, phase, config.tau_sweep, "collar_sup", domain, workers=runner.jobs)
        runner.write_json("decay_vanishing.json", second)
        runner.report.results["decay_vanishing_slope"] = second.fitted_slope
        if max(config.tau_sweep) >= VANISHING_SLOPE_MIN_TAU:
            runner.check("decay_vanishing_slope", second.fitted_slope, VANISHING_SLOPE,
                         passed=second.slope_defined and second.fitted_slope <= VANISHING_SLOPE)

        with runner.timed("decay"):
            refined = decay_probe(away, phase, config.tau_sweep, "refined", domain, workers=runner.jobs)
        runner.write_json("decay_refined.json", refined)
        values = refined.fitted_values
        runner.check("decay_refined_decreasing", values[-1] / values[0] if values[0] else float("nan"), 1.0,
                     passed=refined.strictly_decreasing, detail="tau * residual strictly decreasing")

    runner.attempt("decay", decay)

    def energy():
        v = GridFunction.from_callable(domain, lambda zz: np.exp(-np.abs(zz - 0.2) ** 2) * (1.0 + 0.5j * zz))
        rows = []
        with runner.timed("energy"):
            for tau in config.energy_taus:
                for which in ENERGY_CASES:
                    rows.append({"tau": tau, "case": which,
                                 "relative_gap": energy_identity_check(v, phase, tau, which, domain)})
        frame = pd.DataFrame(rows, columns=["tau", "case", "relative_gap"])
        runner.write_csv("energy_identities.csv", frame)
        runner.check("energy_identities", frame["relative_gap"].max(), tol("energy"))

    runner.attempt("energy", energy)


def cmd_transforms_selftest(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                            record: bool = True) -> RunReport:
    """Closed-form, transport, decay and energy-identity checks of the transforms."""
    return ExperimentRunner(config, jobs, db_path, record).run("transforms-selftest", _transforms_selftest)


# phase-build ---------------------------------------------------------------------

def _phase_build(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    x_hat = config.phase.x_hat

    with runner.timed("phase"):
        phase = _phase(runner)
    if phase is None:
        return

    report = validate_phase(phase, domain, x_hat)
    runner.check("phase_structure", float(report.n_critical), 1.0, passed=report.passed,
                 detail="critical points present, separated, nondegenerate, clear of the boundary")
    runner.check("phase_nondegenerate", report.min_second_derivative, report.nondegeneracy_tol,
                 passed=report.nondegenerate)

    rows = []
    for k, point in enumerate(phase.critical_points):
        data = hessian_data(phase, point.z)
        rows.append({
            "index": k,
            "x1": point.z.real,
            "x2": point.z.imag,
            "im_phi": data.im_phi,
            "abs_d2phi": abs(point.second_derivative),
            "hessian_det": data.det,
            "signature": data.signature,
        })
    runner.write_csv("critical_points.csv", pd.DataFrame(
        rows, columns=["index", "x1", "x2", "im_phi", "abs_d2phi", "hessian_det", "signature"]))

    limit = tau_max(phase, domain)
    runner.check("tau_sweep_budget", max(config.tau_sweep), limit)

    identity = boundary_phase_identity(phase, domain)
    runner.check("boundary_phase_identity", identity.max_identity_gap, tol("boundary_identity"))

    def extension():
        g0 = domain.boundary_z[domain.on_gamma0]
        data = (np.real(phase(g0)), np.imag(phase(g0)))
        reports = [cauchy_riemann_extend(data, eps, domain, LabSettings.CR_EXTENSION_DEGREE)[1]
                   for eps in config.eps_reg_sweep]
        misfits = [r.relative_misfit for r in reports]
        runner.write_json("cr_extension.json", reports)
        runner.check("cr_extension_monotone", misfits[-1], misfits[0], passed=_decreasing(misfits, strict=False),
                     detail="misfit non-increasing over the eps_reg sweep")
        runner.check("cr_extension_final", misfits[-1], tol("cr_misfit"))

    runner.attempt("cr_extension", extension)

    a = _amplitude(runner)
    payload = {
        "phase": phase,
        "validation": report,
        "tau_max": limit,
        "boundary_identity_gap": identity.max_identity_gap,
        "x_hat_eps": phase.x_hat_eps,
        "x_hat_drift": critical_set_distance([phase.x_hat_eps], [x_hat]) if phase.x_hat_eps is not None else None,
        "amplitude": a,
        "amplitude_gamma0_residual": amplitude_residual(a, domain) if a is not None else None,
    }
    runner.write_json("phase.json", payload)
    runner.report.results["n_critical"] = report.n_critical
    runner.report.results["tau_max"] = limit


def cmd_phase_build(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                    record: bool = True) -> RunReport:
    """Build and validate the phase; writes the critical-point table."""
    return ExperimentRunner(config, jobs, db_path, record).run("phase-build", _phase_build)


# cgo-build -----------------------------------------------------------------------

def _potentials(runner: ExperimentRunner):
    domain = runner.domain
    return runner.config.q1.build(domain), runner.config.q2.build(domain)


def _cgo_build(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    q1, q2 = _potentials(runner)
    phase = _phase(runner)
    a = _amplitude(runner)
    if phase is None or a is None:
        return

    rows = []
    for tau in config.tau_sweep:
        with runner.timed("cgo"):
            pair = runner.attempt(f"cgo_{_label(tau)}", build_cgo_pair, q1, q2, phase, a, tau, domain,
                                  workers=min(2, runner.jobs))
        if pair is None:
            continue
        for name, solution in zip(("u1", "v"), pair):
            ledger = solution.ledger
            runner.check(f"{name}_{_label(tau)}_pde_residual", ledger["total"]["pde_residual"], tol("pde_residual"))
            runner.check(f"{name}_{_label(tau)}_gamma0_trace", ledger["total"]["gamma0_trace"],
                         tol("gamma0_trace"))
            rows.append({
                "tau": tau,
                "solution": name,
                "leading_l2": ledger["leading"]["l2"],
                "u11_l2": ledger["u11"]["l2"],
                "u12_l2": ledger["u12"]["l2"],
                "tau_u12_l2": ledger["u12"]["tau_l2"],
                "bound_ratio": ledger["u12"]["bound_ratio"],
                "defect_l2": ledger["defect"]["l2"],
                "gamma0_trace": ledger["total"]["gamma0_trace"],
                "pde_residual": ledger["total"]["pde_residual"],
            })
        runner.write_json(f"cgo_{_label(tau)}.json", {"u1": pair[0].ledger, "v": pair[1].ledger})

    frame = pd.DataFrame(rows)
    if frame.empty:
        return
    runner.write_csv("cgo_layers.csv", frame)

    top = frame[frame["tau"] == frame["tau"].max()]
    ordered = bool(np.all(top["leading_l2"] > top["u11_l2"]) and np.all(top["u11_l2"] > top["u12_l2"]))
    runner.check("layer_ordering", float((top["u11_l2"] / top["leading_l2"]).max()), 1.0, passed=ordered,
                 detail="leading > u11 > u12 at the largest tau")
    for name, group in frame.groupby("solution", sort=True):
        series = group.sort_values("tau")["tau_u12_l2"].tolist()
        runner.check(f"{name}_tau_u12_decreasing", series[-1], series[0], passed=_decreasing(series))

    def forward_data():
        with runner.timed("cauchy_data"):
            first = cauchy_data(q1, domain, CAUCHY_BASIS, workers=runner.jobs)
            second = cauchy_data(q2, domain, CAUCHY_BASIS, workers=runner.jobs)
        runner.write_csv("cauchy_data_q1.csv", first.to_dataframe())
        runner.write_csv("cauchy_data_q2.csv", second.to_dataframe())
        discrepancy = first.max_flux_discrepancy(second)
        if config.q1 == config.q2:
            runner.check("cauchy_data_identical", discrepancy, 0.0)
        else:
            runner.check("cauchy_data_distinct", discrepancy, 10.0 * LabSettings.SOLVER_TOL,
                         passed=discrepancy > 10.0 * LabSettings.SOLVER_TOL)

    runner.attempt("cauchy_data", forward_data)


def cmd_cgo_build(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                  record: bool = True) -> RunReport:
    """Both CGO builds over the tau sweep, with their layer ledgers."""
    return ExperimentRunner(config, jobs, db_path, record).run("cgo-build", _cgo_build)


# identity ------------------------------------------------------------------------

TERM_NAMES = ["I1", "I2", "I3", "I4", "J1", "J2", "J3", "J4"]


def _identity(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    q1, q2 = _potentials(runner)
    phase = _phase(runner)
    a = _amplitude(runner)
    if phase is None or a is None:
        return

    breakdowns = []
    for tau in config.tau_sweep:
        with runner.timed("identity"):
            pair = runner.attempt(f"cgo_{_label(tau)}", build_cgo_pair, q1, q2, phase, a, tau, domain,
                                  workers=min(2, runner.jobs))
            if pair is None:
                continue
            breakdown = runner.attempt(f"identity_{_label(tau)}", identity_terms, q1, q2, pair[0], pair[1], domain)
        if breakdown is not None:
            breakdowns.append(breakdown)
    runner.write_json("identity.json", breakdowns)
    if not breakdowns:
        return

    rows = []
    for b in breakdowns:
        terms = dict(zip(TERM_NAMES, list(b.minus_integrals) + list(b.plus_integrals)))
        terms.update({
            "zero_mode": b.zero_mode,
            "stationary_sum": b.stationary_sum,
            "corrector_first_order": b.corrector_first_order,
            "corrector_second_order": b.corrector_second_order,
            "direct": b.direct,
        })
        for name, value in terms.items():
            rows.append({"tau": b.tau, "term": name, "re": value.real, "im": value.imag,
                         "tau_abs": b.tau * abs(value)})
    frame = pd.DataFrame(rows, columns=["tau", "term", "re", "im", "tau_abs"])
    runner.write_csv("identity_terms.csv", frame)

    if config.q1 == config.q2:
        largest = float(np.hypot(frame["re"], frame["im"]).max())
        runner.check("identity_zero", largest, tol("identity_zero"))
    else:
        scaled = [b.scaled_gap for b in breakdowns]
        runner.check("identity_gap_decay", scaled[-1], scaled[0], passed=_decreasing(scaled),
                     detail="tau * gap decreasing")
        for name in TERM_NAMES:
            series = frame[frame["term"] == name]["tau_abs"].tolist()
            runner.check(f"{name}_o_inverse_tau", series[-1], series[0], passed=_decreasing(series),
                         detail="tau * |term| decreasing")

    def stationary_phase():
        tau = float(config.tau_sweep[-1])
        center = phase.x_hat_eps if phase.x_hat_eps is not None else config.phase.x_hat
        h = gaussian_bump(center, 0.4)
        direct = oscillatory_integral(h, phase, tau, domain)
        leading = stationary_phase_leading(h, phase, tau, domain)
        runner.check("stationary_phase_ratio", abs(direct / leading - 1.0), tol("stationary_phase"))

    runner.attempt("stationary_phase", stationary_phase)

    def beat():
        with runner.timed("beat"):
            result = two_point_beat()
        runner.write_json("stationary_phase_beat.json", result.to_dict())
        runner.check("stationary_phase_beat", result.relative_error, tol("stationary_phase"),
                     detail=f"two critical points, tau={result.tau:g}")

    runner.attempt("stationary_phase_beat", beat)
    runner.report.results["scaled_gaps"] = [b.scaled_gap for b in breakdowns]


def cmd_identity(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                 record: bool = True) -> RunReport:
    """Term-by-term breakdown of int (q1 - q2) u1 v over the tau sweep."""
    return ExperimentRunner(config, jobs, db_path, record).run("identity", _identity)


# recover -------------------------------------------------------------------------

def _recover(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    q1, q2 = _potentials(runner)
    cfg = config.phase

    with runner.timed("probe"):
        probe = runner.attempt("recovery_probe", recover_pointwise, q1, q2, domain, cfg.x_hat, config.tau_sweep,
                               epsilon=cfg.epsilon, delta=cfg.delta, workers=min(2, runner.jobs))
    if probe is not None:
        runner.write_json("recovery_probe.json", probe)
        if probe.truth is not None and abs(probe.truth) > 0:
            runner.check("recovery_probe", probe.relative_error, tol("recovery"))
        else:
            runner.check("recovery_probe_off_support", abs(probe.estimate), tol("off_support"))

    grid = square_probe_grid(config.probe.half_width, config.probe.n, config.probe.center)
    with runner.timed("map"):
        result = recovery_map(q1, q2, domain, grid, config.tau_sweep, workers=runner.jobs,
                              epsilon=cfg.epsilon, delta=cfg.delta)
    frame = result.to_dataframe()
    runner.write_csv("recovery_map.csv", frame)
    runner.check("recovery_map_failures", float(len(result.errors)), 0.0,
                 detail="; ".join(f"probe {k}: {v}" for k, v in sorted(result.errors.items())))

    truth = np.abs(frame["truth_re"] + 1j * frame["truth_im"])
    estimate = frame["re_c"] + 1j * frame["im_c"]
    if truth.notna().any():
        scale = float(truth.max())
        on = truth > 0.1 * scale
        off = truth.notna() & ~on
        if on.any():
            runner.check("recovery_map_on_support", float(frame.loc[on, "rel_err"].max()), tol("recovery"))
        if off.any():
            errors = np.abs(estimate[off] - (frame.loc[off, "truth_re"] + 1j * frame.loc[off, "truth_im"]))
            runner.check("recovery_map_off_support", float(errors.max()), tol("off_support"))
    runner.report.results["n_probes"] = len(grid)


def cmd_recover(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                record: bool = True) -> RunReport:
    """Pointwise recovery at x_hat and over the probe grid."""
    return ExperimentRunner(config, jobs, db_path, record).run("recover", _recover)


# carleman ------------------------------------------------------------------------

def _carleman(runner: ExperimentRunner) -> None:
    config, domain = runner.config, runner.domain
    tol = config.tolerance
    c_max = LabSettings.get_c_max()
    sweep = config.carleman_tau_sweep
    phase = _phase(runner)
    if phase is None:
        return

    R = domain.radius
    u = GridFunction.from_callable(domain, lambda z: (1.0 - np.abs(z) ** 2 / R ** 2) ** 2 + 0j)
    u = u.with_boundary(np.zeros(domain.boundary_z.size, dtype=complex))

    def estimate():
        with runner.timed("estimate"):
            report = carleman_estimate_check(u, phase, sweep, domain)
            scaled = carleman_estimate_check(u * SCALE_FACTOR, phase, sweep, domain)
            zero = carleman_estimate_check(GridFunction.zeros(domain), phase, sweep, domain)
        runner.write_json("carleman_estimate.json", report)
        runner.check("carleman_ratio_max", report.ratio_max, c_max)
        drift = max(abs(s - r) / r if r > 0 else abs(s) for r, s in zip(report.ratios, scaled.ratios))
        runner.check("carleman_scale_invariance", drift, tol("carleman_scale"))
        largest = max(max(row) for row in zero.lhs_terms + zero.rhs_terms)
        runner.check("carleman_zero_input", largest, 0.0)
        runner.check("carleman_stability", report.stability, tol("carleman_stability"),
                     passed=report.stability < tol("carleman_stability"),
                     detail=f"covering constants {report.covering_constants}, raw spread {report.ratio_spread:.3g}")
        runner.report.results["carleman_stability"] = report.stability

    runner.attempt("carleman_estimate", estimate)

    def constant():
        samples = random_h10_samples(domain, config.carleman_samples, runner.rng())
        with runner.timed("samples"):
            value = carleman_constant(samples, phase, sweep, domain)
        runner.check("carleman_sample_constant", value, c_max,
                     detail=f"{config.carleman_samples} samples, seed {config.seed}")
        runner.report.results["carleman_constant"] = value

    runner.attempt("carleman_samples", constant)

    def solves():
        q0 = config.q1.build(domain)
        f = GridFunction.from_callable(domain, gaussian_bump(config.phase.x_hat, 0.3))
        rows = []
        for tau in sweep:
            with runner.timed("solve"):
                result = carleman_solve(q0, f, None, phase, tau, domain)
            rows.append({"tau": tau, "ratio": result.ratio, "flagged": result.flagged, "residual": result.residual})
        trivial = carleman_solve(q0, None, None, phase, sweep[0], domain)
        frame = pd.DataFrame(rows, columns=["tau", "ratio", "flagged", "residual"])
        runner.write_csv("carleman_solve.csv", frame)
        runner.check("carleman_solve_ratio", frame["ratio"].max(), c_max)
        runner.check("carleman_solve_residual", frame["residual"].max(), 10.0 * LabSettings.SOLVER_TOL)
        runner.check("carleman_solve_trivial", trivial.weighted.sup(), 0.0)

    runner.attempt("carleman_solve", solves)


def cmd_carleman(config: ExperimentConfig, jobs: Optional[int] = None, db_path: DbPath = None,
                 record: bool = True) -> RunReport:
    """Carleman estimate ratios, the sample constant and weighted solves."""
    return ExperimentRunner(config, jobs, db_path, record).run("carleman", _carleman)


COMMANDS: Dict[str, Callable[..., RunReport]] = {
    "transforms-selftest": cmd_transforms_selftest,
    "phase-build": cmd_phase_build,
    "cgo-build": cmd_cgo_build,
    "identity": cmd_identity,
    "recover": cmd_recover,
    "carleman": cmd_carleman,
}
