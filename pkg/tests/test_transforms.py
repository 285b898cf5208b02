import numpy as np
import pandas as pd
import pytest

from src.exceptions import DomainSpecError, HypothesisError, NonFiniteFieldError, OscillationBudgetError
from src.geometry import c2_bump, o_epsilon_mask
from src.holo import HolomorphicFunction, PhaseFunction
from src.pde.potential import gaussian_bump
from src.transforms import (
    ENERGY_CASES,
    GridFunction,
    cauchy_jets,
    check_budget,
    dbar_inverse,
    decay_probe,
    dz_inverse,
    energy_identity_check,
    r_phi_tau,
    r_tilde_phi_tau,
    tau_max,
    transport_residual,
)


def ones(domain):
    return GridFunction.from_callable(domain, lambda z: np.ones_like(z))


# GridFunction --------------------------------------------------------------------

def test_non_finite_values_are_rejected(small_domain):
    values = np.zeros(small_domain.quadrature.shape, dtype=complex)
    values[3, 4] = np.nan
    with pytest.raises(NonFiniteFieldError):
        GridFunction(values)


def test_grid_function_arithmetic_keeps_boundary(small_domain):
    f = GridFunction.from_callable(small_domain, lambda z: z)
    g = 2.0 * f - f + 1.0
    np.testing.assert_allclose(g.values, small_domain.quadrature.z + 1.0)
    np.testing.assert_allclose(g.boundary, small_domain.boundary_z + 1.0)
    assert (f * small_domain.quadrature.z).boundary is None


def test_integral_and_norms_of_one(small_domain):
    one = ones(small_domain)
    assert one.integrate(small_domain) == pytest.approx(np.pi, rel=1e-10)
    assert one.norm_l2(small_domain) == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    assert one.boundary_norm_l2(small_domain) == pytest.approx(np.sqrt(2.0 * np.pi), rel=1e-10)
    assert GridFunction.zeros(small_domain).sup() == 0.0


def test_to_dataframe_lists_interior_then_boundary(small_domain):
    frame = GridFunction.from_callable(small_domain, lambda z: 1j * z).to_dataframe(small_domain)
    assert list(frame.columns) == ["x1", "x2", "re", "im"]
    assert len(frame) == small_domain.quadrature.z.size + small_domain.boundary_z.size
    np.testing.assert_allclose(frame["im"], frame["x1"])


# Cauchy transforms ---------------------------------------------------------------

def test_dbar_inverse_of_one_is_conj_z(small_domain):
    t = dbar_inverse(ones(small_domain), small_domain)
    np.testing.assert_allclose(t.values, np.conj(small_domain.quadrature.z), atol=1e-12)
    np.testing.assert_allclose(t.boundary, np.conj(small_domain.boundary_z), atol=1e-12)


def test_dz_inverse_of_one_is_z(small_domain):
    s = dz_inverse(ones(small_domain), small_domain)
    np.testing.assert_allclose(s.values, small_domain.quadrature.z, atol=1e-12)


def test_dbar_inverse_of_z(small_domain):
    # T[z] = |z|^2 - R^2
    t = dbar_inverse(GridFunction.from_callable(small_domain, lambda z: z), small_domain)
    z = small_domain.quadrature.z
    np.testing.assert_allclose(t.values, np.abs(z) ** 2 - 1.0, atol=1e-6)
    np.testing.assert_allclose(t.boundary, 0.0, atol=1e-10)


def test_dbar_inverse_at_off_grid_target(small_domain):
    value = dbar_inverse(ones(small_domain), small_domain, targets=np.array([0.3 + 0.1j]))
    assert value[0] == pytest.approx(0.3 - 0.1j, abs=1e-8)


def test_dbar_inverse_rejects_exterior_target(small_domain):
    with pytest.raises(DomainSpecError):
        dbar_inverse(ones(small_domain), small_domain, targets=np.array([1.2]))


def test_cauchy_jets_of_one(small_domain):
    z0 = 0.25 - 0.4j
    jets = cauchy_jets(ones(small_domain), small_domain, z0, order=2)
    np.testing.assert_allclose(jets, [np.conj(z0), 0.0, 0.0], atol=1e-8)
    with pytest.raises(DomainSpecError):
        cauchy_jets(ones(small_domain), small_domain, 1.0)


# Oscillation budget --------------------------------------------------------------

def test_tau_max_of_quadratic_phase(small_domain, quadratic_phase):
    assert tau_max(quadratic_phase, small_domain) == pytest.approx(16.0, rel=1e-6)


def test_budget_error_names_required_resolution(small_domain, quadratic_phase):
    check_budget(quadratic_phase, 16.0, small_domain)
    with pytest.raises(OscillationBudgetError) as excinfo:
        check_budget(quadratic_phase, -40.0, small_domain)
    err = excinfo.value
    assert err.tau == -40.0
    assert err.tau_max == pytest.approx(16.0, rel=1e-6)
    assert err.required_angular_nodes >= 320
    assert err.required_angular_nodes % 2 == 0


def test_conjugated_transforms_at_zero_tau(small_domain, quadratic_phase):
    g = GridFunction.from_callable(small_domain, gaussian_bump(0.1j, 0.3))
    np.testing.assert_allclose(r_phi_tau(g, quadratic_phase, 0.0, small_domain).values,
                               dbar_inverse(g, small_domain).values)
    np.testing.assert_allclose(r_tilde_phi_tau(g, quadratic_phase, 0.0, small_domain).values,
                               dz_inverse(g, small_domain).values)


def test_conjugated_transform_respects_budget(small_domain, quadratic_phase):
    with pytest.raises(OscillationBudgetError):
        r_phi_tau(ones(small_domain), quadratic_phase, 64.0, small_domain)


def test_unknown_transport_kind(small_domain, quadratic_phase):
    one = ones(small_domain)
    with pytest.raises(ValueError):
        transport_residual(one, one, quadratic_phase, 1.0, small_domain, kind="laplace")


@pytest.mark.slow
@pytest.mark.parametrize("tau", [8.0, -8.0, 16.0])
def test_transport_equations_hold(default_domain, quadratic_phase_default, tau):
    g = GridFunction.from_callable(default_domain, gaussian_bump(0j, 0.3))
    rg = r_phi_tau(g, quadratic_phase_default, tau, default_domain)
    rtg = r_tilde_phi_tau(g, quadratic_phase_default, tau, default_domain)
    assert transport_residual(rg, g, quadratic_phase_default, tau, default_domain, "r") < 1e-2
    assert transport_residual(rtg, g, quadratic_phase_default, tau, default_domain, "r_tilde") < 1e-2


# Energy identities ---------------------------------------------------------------

@pytest.mark.parametrize("which", ENERGY_CASES)
@pytest.mark.parametrize("tau", [2.0, 6.0])
def test_energy_identity(small_domain, quadratic_phase, which, tau):
    v = GridFunction.from_callable(small_domain, lambda z: np.exp(-np.abs(z - 0.2) ** 2) * (1.0 + 0.5j * z))
    gap = energy_identity_check(v, quadratic_phase, tau, which, small_domain, method="spectral")
    assert gap < 1e-3


def test_energy_identity_unknown_case(small_domain, quadratic_phase):
    with pytest.raises(ValueError):
        energy_identity_check(ones(small_domain), quadratic_phase, 1.0, "laplace_case", small_domain)


# Decay probes --------------------------------------------------------------------

@pytest.mark.parametrize("sweep", [(4.0, 8.0, 12.0), (4.0, 8.0, 8.0, 12.0), (-1.0, 2.0, 4.0, 8.0)])
def test_decay_probe_rejects_bad_sweeps(small_domain, quadratic_phase, sweep):
    with pytest.raises(HypothesisError):
        decay_probe(ones(small_domain), quadratic_phase, sweep, "collar_sup", small_domain)


def test_decay_probe_unknown_mode(small_domain, quadratic_phase):
    with pytest.raises(ValueError):
        decay_probe(ones(small_domain), quadratic_phase, (2.0, 4.0, 6.0, 8.0), "sup", small_domain)


def test_refined_mode_needs_vanishing_input(small_domain, quadratic_phase):
    with pytest.raises(HypothesisError):
        decay_probe(ones(small_domain), quadratic_phase, (2.0, 4.0, 6.0, 8.0), "refined", small_domain)


def test_decay_report_serializes(small_domain, quadratic_phase):
    report = decay_probe(ones(small_domain), quadratic_phase, (2.0, 4.0, 6.0, 8.0), "collar_sup", small_domain)
    data = report.to_dict()
    assert data["mode"] == "collar_sup"
    assert data["fitted_series"] == "sup"
    assert len(data["sup_norm_on_collar"]) == 4
    assert isinstance(data["strictly_decreasing"], bool)
    assert pd.Series(report.l2_norm).gt(0).all()


def test_weighted_mode_fits_l2_norms(small_domain, quadratic_phase):
    report = decay_probe(ones(small_domain), quadratic_phase, (2.0, 4.0, 6.0, 8.0), "l2_r_of_z", small_domain)
    assert report.fitted_series == "l2"
    np.testing.assert_allclose(report.l2_norm, np.add(report.series["l2_r"], report.series["l2_r_tilde"]))
    assert "refined" not in report.series


@pytest.mark.slow
def test_collar_sup_of_compact_bump_decays_at_least_like_inverse_tau(default_domain, quadratic_phase_default):
    # supported in |z - 0.45| <= 0.25, clear of the boundary and of z = 0
    g = GridFunction.from_callable(default_domain, lambda z: c2_bump(z, 0.45, 0.25).astype(complex))
    assert g.sup(o_epsilon_mask(default_domain, 0.15)) == 0.0
    report = decay_probe(g, quadratic_phase_default, (8.0, 12.0, 16.0, 24.0),
                         "collar_sup", default_domain, workers=2)
    assert report.slope_defined
    assert report.fitted_slope <= -0.9


@pytest.mark.slow
def test_collar_sup_of_spread_bump_decays_like_inverse_tau(default_domain, quadratic_phase_default):
    g = GridFunction.from_callable(default_domain, gaussian_bump(0j, 0.5))
    report = decay_probe(g, quadratic_phase_default, (8.0, 12.0, 16.0, 24.0),
                         "collar_sup", default_domain, workers=2)
    assert report.slope_defined
    assert -1.3 <= report.fitted_slope <= -0.9


@pytest.mark.slow
def test_refined_residual_decreases_away_from_critical_set(default_domain, quadratic_phase_default):
    g = GridFunction.from_callable(default_domain, lambda z: c2_bump(z, 0.45, 0.25).astype(complex))
    report = decay_probe(g, quadratic_phase_default, (8.0, 12.0, 16.0, 24.0), "refined", default_domain)
    assert report.fitted_series == "refined"
    assert report.strictly_decreasing


@pytest.mark.slow
def test_collar_sup_of_input_vanishing_on_critical_set_decays_like_inverse_tau_squared(high_tau_domain):
    phase = PhaseFunction.from_holomorphic(HolomorphicFunction([0.0, 0.0, 0.5]), high_tau_domain, x_hat=0j)
    z = high_tau_domain.quadrature.z
    g = GridFunction(phase.r_polynomial(z) * c2_bump(z, 0j, 0.6))
    assert tau_max(phase, high_tau_domain) >= 80.0
    report = decay_probe(g, phase, (10.0, 20.0, 40.0, 80.0), "collar_sup", high_tau_domain, workers=2)
    assert report.slope_defined
    assert report.fitted_slope <= -1.8
