import numpy as np
import pytest

from src.exceptions import DomainSpecError, FitError, PhaseValidationError
from src.holo import (
    HolomorphicFunction,
    JetSpec,
    PhaseFunction,
    amplitude_residual,
    boundary_phase_identity,
    build_phase,
    cauchy_riemann_extend,
    critical_set_distance,
    find_critical_points,
    fit_amplitude,
    jet_interpolate,
    validate_phase,
)


# HolomorphicFunction -------------------------------------------------------------

def test_derivatives_are_exact():
    f = HolomorphicFunction([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(f.derivative(1).coefficients, [2.0, 6.0, 12.0])
    np.testing.assert_allclose(f.derivative(3).coefficients, [24.0])
    assert f.derivative(5).degree == 0
    assert f.dbar_residual() == 0.0


def test_jet_matches_closed_form():
    f = HolomorphicFunction([0.0, 0.0, 0.5])
    np.testing.assert_allclose(f.jet(0.3 + 0.2j), [0.5 * (0.3 + 0.2j) ** 2, 0.3 + 0.2j, 1.0])


def test_from_roots_and_roots():
    f = HolomorphicFunction.from_roots([0.5, -0.5j])
    assert f(0.5) == pytest.approx(0.0)
    assert f(-0.5j) == pytest.approx(0.0)
    np.testing.assert_allclose(np.sort_complex(f.roots()), np.sort_complex([0.5, -0.5j]), atol=1e-12)


def test_arithmetic():
    f = HolomorphicFunction([1.0, 1.0])
    g = HolomorphicFunction([0.0, 0.0, 1.0])
    z = 0.2 - 0.7j
    assert (f + g)(z) == pytest.approx(f(z) + g(z))
    assert (f - g)(z) == pytest.approx(f(z) - g(z))
    assert (f * g)(z) == pytest.approx(f(z) * g(z))
    assert (2.0 * f)(z) == pytest.approx(2.0 * f(z))
    assert (-f)(z) == pytest.approx(-f(z))


def test_serialized_coefficients():
    f = HolomorphicFunction([1 + 2j, -0.5])
    assert f.to_dict() == {"coefficients": [[1.0, 2.0], [-0.5, 0.0]]}
    np.testing.assert_array_equal(HolomorphicFunction.from_dict(f.to_dict()).coefficients, f.coefficients)


# Critical points -----------------------------------------------------------------

def test_quadratic_has_single_critical_point(small_domain):
    points = find_critical_points(HolomorphicFunction([0.0, 0.0, 0.5]), small_domain)
    assert len(points) == 1
    assert abs(points[0].z) < 1e-14
    assert points[0].second_derivative == pytest.approx(1.0)
    assert points[0].im_phi == pytest.approx(0.0)


def test_cubic_has_two_critical_points(small_domain):
    points = find_critical_points(HolomorphicFunction([0.0, -0.25, 0.0, 1.0 / 3.0]), small_domain)
    z = sorted(p.z.real for p in points)
    assert z == pytest.approx([-0.5, 0.5], abs=1e-12)
    seconds = sorted(p.second_derivative.real for p in points)
    assert seconds == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_degenerate_critical_point_rejected(small_domain):
    with pytest.raises(PhaseValidationError):
        find_critical_points(HolomorphicFunction([0.0, 0.0, 0.0, 1.0 / 3.0]), small_domain)


def test_critical_point_near_boundary_rejected(small_domain):
    # (z - 0.999)**2 / 2
    with pytest.raises(PhaseValidationError) as excinfo:
        find_critical_points(HolomorphicFunction([0.999 ** 2 / 2.0, -0.999, 0.5]), small_domain)
    assert excinfo.value.diagnostics["kind"] == "boundary"


def test_critical_points_agree_with_grid_scan(small_domain):
    phi = HolomorphicFunction([0.0, -0.25, 0.1j, 1.0 / 3.0])
    points = find_critical_points(phi, small_domain)
    x = np.linspace(-0.9, 0.9, 361)
    grid = x[None, :] + 1j * x[:, None]
    inside = np.abs(grid) < 0.9
    slope = np.where(inside, np.abs(phi.derivative(1)(grid)), np.inf)
    for z in (p.z for p in points):
        near = np.abs(grid - z) < 0.02
        assert slope[near].min() < 1e-2


# Phase validation ----------------------------------------------------------------

def test_single_critical_point_separation_is_vacuous(small_domain, quadratic_phase):
    report = validate_phase(quadratic_phase, small_domain, 0j)
    assert report.separated
    assert report.n_critical == 1
    assert report.separation_min == float("inf")


def test_quadratic_phase_fails_the_gamma0_condition(small_domain, quadratic_phase):
    # Im(z^2 / 2) = sin(2 theta) / 2 on the lower half circle
    report = validate_phase(quadratic_phase, small_domain, 0j)
    assert report.im_phi_gamma0_max == pytest.approx(0.5, abs=1e-3)
    assert not report.gamma0_ok
    assert not report.passed


def test_real_cubic_fails_separation(small_domain):
    phase = PhaseFunction.from_holomorphic(HolomorphicFunction([0.0, -0.25, 0.0, 1.0 / 3.0]), small_domain)
    report = validate_phase(phase, small_domain, 0.5)
    assert report.n_critical == 2
    assert not report.separated
    assert not report.passed


def test_perturbation_separates_cubic(small_domain):
    # critical points +-sqrt(0.25 - 0.1i), Im Phi about +-0.05 there
    phi = HolomorphicFunction([0.0, -0.25 + 0.1j, 0.0, 1.0 / 3.0])
    phase = PhaseFunction.from_holomorphic(phi, small_domain)
    report = validate_phase(phase, small_domain, 0.5)
    assert report.separated
    assert report.separation_min > 0.05
    assert report.nondegenerate and report.clear_of_boundary


def test_phase_serializes_critical_points(quadratic_phase):
    data = quadratic_phase.to_dict()
    assert data["critical_points"] == [{"z": [0.0, 0.0], "second_derivative": [1.0, 0.0], "im_phi": 0.0}]
    assert data["x_hat"] == [0.0, 0.0]


def test_boundary_phase_identity_holds_for_any_phase(small_domain):
    phase = PhaseFunction.from_holomorphic(HolomorphicFunction([0.1, 0.2j, 0.5, 0.1 - 0.05j]), small_domain)
    identity = boundary_phase_identity(phase, small_domain)
    assert identity.max_identity_gap < 1e-10
    assert identity.max_normal_flux > 0.1


def test_critical_set_distance():
    assert critical_set_distance([0.0, 1.0], [0.0, 1.0]) == 0.0
    assert critical_set_distance([0.0], [0.0, 0.5]) == pytest.approx(0.5)
    assert critical_set_distance([], []) == 0.0
    assert critical_set_distance([0.0], []) == float("inf")


# Amplitude and jets --------------------------------------------------------------

def test_imaginary_constant_has_zero_residual(small_domain):
    assert amplitude_residual(HolomorphicFunction([2.0j]), small_domain) == 0.0


def test_fit_amplitude_normalized_and_improves_with_degree(small_domain):
    low = fit_amplitude(small_domain, 4, 0j)
    high = fit_amplitude(small_domain, 16, 0j)
    assert high(0.0) == pytest.approx(1.0, abs=1e-10)
    assert low(0.0) == pytest.approx(1.0, abs=1e-10)
    assert amplitude_residual(high, small_domain) < amplitude_residual(low, small_domain)


def test_fit_amplitude_rejects_bad_inputs(small_domain):
    with pytest.raises(FitError):
        fit_amplitude(small_domain, 1, 0j)
    with pytest.raises(DomainSpecError):
        fit_amplitude(small_domain, 8, 1.2)


def test_jet_interpolation_single_point(small_domain):
    u = jet_interpolate(small_domain, JetSpec([0j], [(0.0, 0.0, 1.0)]), 2)
    np.testing.assert_allclose(u.jet(0j), [0.0, 0.0, 1.0], atol=1e-8)
    np.testing.assert_allclose(u.coefficients, [0.0, 0.0, 0.5], atol=1e-8)


def test_jet_interpolation_zero_jets_give_zero(small_domain):
    u = jet_interpolate(small_domain, JetSpec([0.2j], [(0.0, 0.0, 0.0)]), 8)
    assert np.max(np.abs(u.coefficients)) < 1e-12


def test_jet_interpolation_two_points(small_domain):
    jets = JetSpec([0.4, -0.4], [(1.0, 0.0, 1.0), (-1.0, 0.0, 1.0)])
    u = jet_interpolate(small_domain, jets, 12)
    np.testing.assert_allclose(u.jet(0.4), [1.0, 0.0, 1.0], atol=1e-8)
    np.testing.assert_allclose(u.jet(-0.4), [-1.0, 0.0, 1.0], atol=1e-8)
    assert abs(u(0.4) - u(-0.4)) == pytest.approx(2.0, abs=1e-8)


def test_jet_interpolation_rejects_close_points(small_domain):
    with pytest.raises(FitError):
        jet_interpolate(small_domain, JetSpec([0.0, 1e-4], [(0, 0, 1), (0, 0, 1)]), 12)


# Cauchy-Riemann extension --------------------------------------------------------

def test_cr_extension_of_zero_data(small_domain):
    n = int(small_domain.on_gamma0.sum())
    f, report = cauchy_riemann_extend((np.zeros(n), np.zeros(n)), 0.1, small_domain, 16)
    assert np.max(np.abs(f.coefficients)) == 0.0
    assert report.objective == 0.0
    assert report.relative_misfit == 0.0


def test_cr_extension_of_holomorphic_trace_converges(small_domain):
    zb = small_domain.boundary_z[small_domain.on_gamma0]
    data = (np.real(zb ** 2), np.imag(zb ** 2))
    misfits = [cauchy_riemann_extend(data, eps, small_domain, 16)[1].relative_misfit
               for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    for earlier, later in zip(misfits, misfits[1:]):
        assert later <= earlier * (1.0 + 1e-8) + 1e-14
    assert misfits[-1] < 1e-3


def test_cr_extension_misfit_floor_scales_with_the_weight(small_domain):
    # the whole-boundary penalty of z**2 is about twice its Gamma_0 norm
    zb = small_domain.boundary_z[small_domain.on_gamma0]
    data = (np.real(zb ** 2), np.imag(zb ** 2))
    for eps in (1e-3, 1e-4):
        misfit = cauchy_riemann_extend(data, eps, small_domain, 16)[1].relative_misfit
        assert eps <= misfit < 10.0 * eps


def test_cr_extension_rejects_bad_weight(small_domain):
    n = int(small_domain.on_gamma0.sum())
    with pytest.raises(FitError):
        cauchy_riemann_extend((np.zeros(n), np.zeros(n)), 0.0, small_domain)


# Phase construction --------------------------------------------------------------

def test_quadratic_u_is_rejected_for_the_gamma0_condition(small_domain):
    with pytest.raises(PhaseValidationError) as excinfo:
        build_phase(small_domain, 0j, 0.0, 0.0, degrees=(2, 12, None))
    assert "Gamma_0" in str(excinfo.value)


def test_shifted_quadratic_violates_gamma0_condition(small_domain):
    x_hat = 0.3 + 0.1j
    phi = HolomorphicFunction([x_hat ** 2 / 2.0, -x_hat, 0.5])
    phase = PhaseFunction.from_holomorphic(phi, small_domain, x_hat=x_hat)
    assert phase.x_hat_eps == pytest.approx(x_hat, abs=1e-10)
    report = validate_phase(phase, small_domain, x_hat)
    assert not report.gamma0_ok
    with pytest.raises(PhaseValidationError):
        build_phase(small_domain, x_hat, 0.0, 0.0, degrees=(2, 12, None))


def test_monotone_jet_fit_is_real_and_decreasing_on_gamma0(small_domain):
    margin = 0.1
    u = jet_interpolate(small_domain, JetSpec([0j], [(0.0, 0.0, 1.0)]), 16, margin=margin)
    np.testing.assert_allclose(u.jet(0j), [0.0, 0.0, 1.0], atol=1e-8)
    g0 = small_domain.on_gamma0
    zb = small_domain.boundary_z[g0]
    d_tau = np.real(u.derivative(1)(zb) * small_domain.tangents[g0])
    assert np.max(d_tau) < 0.0
    assert np.max(np.abs(np.imag(u(zb)))) < 1e-3


def test_default_build_meets_the_gamma0_condition(small_domain):
    phase = build_phase(small_domain, 0j, 0.05, 0.0)
    report = validate_phase(phase, small_domain, 0j)
    assert report.gamma0_ok
    assert report.passed
    assert report.im_phi_gamma0_max <= report.gamma0_tol
    assert phase.x_hat_eps is not None
    assert abs(phase.x_hat_eps) < 0.05
    assert abs(phase.phi_holo.jet(phase.x_hat_eps)[2]) > 0.5


def test_build_phase_rejects_exterior_point(small_domain):
    with pytest.raises(DomainSpecError):
        build_phase(small_domain, 1.0 + 0j, 0.0, 0.0)


def test_critical_point_drift_shrinks_with_epsilon(small_domain):
    x_hat = 0.2 + 0.1j
    results = []
    for eps in (1e-2, 1e-3, 1e-4):
        phase = build_phase(small_domain, x_hat, eps, 0.0)
        results.append((phase.epsilon, abs(phase.x_hat_eps - x_hat)))
    results.sort()
    drifts = [d for _, d in results]
    for smaller, larger in zip(drifts, drifts[1:]):
        assert smaller <= larger + 1e-12
    assert drifts[0] < 1e-2
