import numpy as np
import pytest

from config.settings import LabSettings

from src.analysis import (
    RecoveryMap,
    RecoveryResult,
    hessian_data,
    identity_terms,
    oscillatory_integral,
    recover_pointwise,
    recovery_map,
    square_probe_grid,
    stationary_design,
    stationary_phase_leading,
    two_point_beat,
)
from src.cgo import build_cgo_pair
from src.exceptions import FitError, HypothesisError, OscillationBudgetError, PhaseValidationError
from src.holo import HolomorphicFunction, build_phase, fit_amplitude
from src.pde import Potential, build_potential
from src.pde.potential import gaussian_bump
from src.transforms import GridFunction

ONE = HolomorphicFunction([1.0])


# Stationary phase ----------------------------------------------------------------

def test_hessian_of_quadratic_phase(quadratic_phase):
    data = hessian_data(quadratic_phase, 0j)
    assert data.det == pytest.approx(-1.0)
    assert data.signature == 0
    assert data.im_phi == 0.0
    assert data.sqrt_abs_det == pytest.approx(1.0)


def test_hessian_rejects_non_critical_point(quadratic_phase):
    with pytest.raises(PhaseValidationError) as excinfo:
        hessian_data(quadratic_phase, 0.3)
    assert excinfo.value.diagnostics["kind"] == "not_critical"


def test_gaussian_oscillatory_integral_matches_closed_form(default_domain, quadratic_phase_default):
    # int exp(-|x|^2 / w^2) 2 cos(2 tau x1 x2) dx = 2 pi / sqrt(tau^2 + w^-4) over the plane
    width, tau = 0.4, 32.0
    h = gaussian_bump(0j, width)
    value = oscillatory_integral(h, quadratic_phase_default, tau, default_domain)
    assert value.real == pytest.approx(2.0 * np.pi / np.sqrt(tau ** 2 + width ** -4), rel=2e-2)


def test_stationary_phase_leading_term(default_domain, quadratic_phase_default):
    h = gaussian_bump(0j, 0.4)
    tau = 32.0
    direct = oscillatory_integral(h, quadratic_phase_default, tau, default_domain)
    leading = stationary_phase_leading(h, quadratic_phase_default, tau, default_domain)
    assert leading == pytest.approx(2.0 * np.pi / tau)
    assert abs(direct - leading) / abs(leading) < 0.05


def test_leading_term_from_samples_matches_callable(small_domain, quadratic_phase):
    h = gaussian_bump(0.1, 0.5)
    sampled = GridFunction.from_callable(small_domain, h)
    exact = stationary_phase_leading(h, quadratic_phase, 10.0, small_domain)
    fitted = stationary_phase_leading(sampled, quadratic_phase, 10.0, small_domain)
    assert fitted == pytest.approx(exact, rel=1e-4)


def test_stationary_phase_guards(small_domain, quadratic_phase):
    h = gaussian_bump(0j, 0.4)
    with pytest.raises(HypothesisError):
        stationary_phase_leading(h, quadratic_phase, 0.0, small_domain)
    with pytest.raises(OscillationBudgetError):
        oscillatory_integral(h, quadratic_phase, 40.0, small_domain)


def test_stationary_design_of_single_point(quadratic_phase):
    taus = np.array([8.0, 12.0, 16.0, 24.0])
    design = stationary_design(quadratic_phase, taus)
    assert design.shape == (4, 2)
    np.testing.assert_allclose(design[:, 0], 2.0 * np.pi / taus)
    np.testing.assert_allclose(design[:, 1], 2.0 * np.pi / taus ** 3)


@pytest.mark.slow
def test_two_point_beat_matches_direct_quadrature():
    result = two_point_beat(50.0)
    assert sorted(z.real for z in result.critical_points) == pytest.approx([-0.5, 0.5], abs=1e-8)
    assert sorted(result.im_phi) == pytest.approx([-7.0 / 30.0, 13.0 / 30.0], abs=1e-8)
    assert result.relative_error < 0.05
    assert result.to_dict()["relative_error"] == result.relative_error


# Identity ------------------------------------------------------------------------

def test_identity_vanishes_for_equal_potentials(small_domain, quadratic_phase):
    q = Potential.zero(small_domain)
    u1, v = build_cgo_pair(q, q, quadratic_phase, ONE, 8.0, small_domain)
    breakdown = identity_terms(q, q, u1, v, small_domain)
    data = breakdown.to_dict()
    assert breakdown.direct == 0
    assert breakdown.gap == 0.0
    assert data["minus_integrals"] == [[0.0, 0.0]] * 4
    assert data["scaled_gap"] == 0.0


def test_identity_rejects_mismatched_builds(small_domain, quadratic_phase):
    q = Potential.zero(small_domain)
    u1, v = build_cgo_pair(q, q, quadratic_phase, ONE, 8.0, small_domain)
    with pytest.raises(HypothesisError):
        identity_terms(q, q, u1, u1, small_domain)
    with pytest.raises(HypothesisError):
        identity_terms(q, q, v, u1, small_domain)


@pytest.mark.slow
def test_identity_gap_for_distinct_potentials_shrinks_faster_than_inverse_tau(default_domain):
    phase = build_phase(default_domain, 0j, 0.05, 0.0)
    a = fit_amplitude(default_domain, LabSettings.AMPLITUDE_DEGREE, 0j)
    q1 = build_potential("gaussian_bump", {"center": [0.0, 0.0], "width": 0.3}, default_domain)
    q2 = Potential.zero(default_domain)
    scaled = []
    for tau in (8.0, 12.0, 16.0, 24.0):
        u1, v = build_cgo_pair(q1, q2, phase, a, tau, default_domain, workers=2)
        breakdown = identity_terms(q1, q2, u1, v, default_domain)
        assert abs(breakdown.direct) > 0.0
        scaled.append(breakdown.scaled_gap)
    assert np.all(np.isfinite(scaled))
    assert all(later < earlier for earlier, later in zip(scaled, scaled[1:]))


# Recovery ------------------------------------------------------------------------

def test_square_probe_grid():
    grid = square_probe_grid(0.1, 3, center=0.2j)
    assert len(grid) == 9
    assert grid[0] == pytest.approx(-0.1 + 0.1j)
    assert grid[4] == pytest.approx(0.2j)
    assert grid[2] == pytest.approx(0.1 + 0.1j)
    assert square_probe_grid(0.5, 1) == [0j]


def test_recovery_needs_four_tau_values(small_domain):
    q = Potential.zero(small_domain)
    with pytest.raises(FitError):
        recover_pointwise(q, q, small_domain, 0j, (6.0, 8.0, 10.0))


def test_recovery_map_records_failed_probes(small_domain):
    q = Potential.zero(small_domain)
    scan = recovery_map(q, q, small_domain, [1.5 + 0j], (6.0, 8.0, 10.0, 12.0))
    assert scan.results == [None]
    assert 0 in scan.errors
    frame = scan.to_dataframe()
    assert list(frame.columns) == ["x1", "x2", "re_c", "im_c", "truth_re", "truth_im", "rel_err"]
    assert np.isnan(frame["re_c"].iloc[0])


def test_recovery_map_frame_from_results():
    result = RecoveryResult(x_hat=0.1j, tau_sweep=[8.0, 12.0, 16.0, 24.0], estimate=0.98 + 0.01j,
                            truth=1.0 + 0j, relative_error=0.0224, condition=3.0, critical_point=0.1j)
    scan = RecoveryMap([0.1j, 0.5j], [result, None], {1: "skipped"})
    frame = scan.to_dataframe()
    assert frame["re_c"].iloc[0] == pytest.approx(0.98)
    assert frame["x2"].tolist() == [0.1, 0.5]
    assert np.isnan(scan.estimates[1])
    assert result.to_dict()["truth"] == [1.0, 0.0]


@pytest.mark.slow
def test_recovers_bump_at_its_center(default_domain):
    q1 = build_potential("gaussian_bump", {"center": [0.0, 0.0], "width": 0.3}, default_domain)
    q2 = Potential.zero(default_domain)
    result = recover_pointwise(q1, q2, default_domain, 0j, (8.0, 12.0, 16.0, 24.0), workers=2)
    assert result.truth == pytest.approx(1.0)
    assert result.relative_error < 0.15
    assert len(result.breakdowns) == 4


@pytest.mark.slow
def test_estimate_off_the_support_stays_small(default_domain):
    q1 = build_potential("gaussian_bump", {"center": [0.3, 0.0], "width": 0.15}, default_domain)
    q2 = Potential.zero(default_domain)
    result = recover_pointwise(q1, q2, default_domain, -0.3 + 0j, (8.0, 12.0, 16.0, 24.0),
                               epsilon=0.05, workers=2)
    assert abs(result.truth) < 1e-6
    assert abs(result.estimate) < 0.1


@pytest.mark.slow
def test_recovers_bump_at_tau_80(high_tau_config, high_tau_domain):
    q1 = high_tau_config.q1.build(high_tau_domain)
    q2 = high_tau_config.q2.build(high_tau_domain)
    result = recover_pointwise(q1, q2, high_tau_domain, 0j, high_tau_config.tau_sweep,
                               epsilon=high_tau_config.phase.epsilon, workers=2)
    assert max(result.tau_sweep) == 80.0
    assert result.relative_error < 0.15


def _map_estimates(q1, domain, n=9):
    grid = square_probe_grid(0.3, n)
    scan = recovery_map(q1, Potential.zero(domain), domain, grid, (8.0, 12.0, 16.0, 24.0),
                        workers=4, epsilon=0.05)
    return np.real(scan.estimates).reshape(n, n)


@pytest.mark.slow
def test_recovery_map_peaks_at_single_bump(default_domain):
    q1 = build_potential("gaussian_bump", {"center": [0.0, 0.0], "width": 0.3}, default_domain)
    estimates = _map_estimates(q1, default_domain)
    assert np.unravel_index(np.nanargmax(estimates), estimates.shape) == (4, 4)


@pytest.mark.slow
def test_recovery_map_separates_two_bumps(default_domain):
    terms = [{"name": "gaussian_bump", "params": {"center": [x, 0.0], "width": 0.15}} for x in (-0.225, 0.225)]
    q1 = build_potential("sum", {"terms": terms}, default_domain)
    estimates = _map_estimates(q1, default_domain)
    row = estimates[4]
    assert row[1] > row[4] and row[7] > row[4]
