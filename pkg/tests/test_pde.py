import numpy as np
import pytest
from scipy.special import j0
from scipy.stats import linregress

from src.exceptions import ConfigError, DomainSpecError, HypothesisError
from src.pde import (
    CarlemanReport,
    Potential,
    build_potential,
    carleman_constant,
    carleman_estimate_check,
    carleman_solve,
    carleman_solve_many,
    catalog_expression,
    cauchy_data,
    conductivity_to_potential,
    exp_linear_conductivity,
    quadratic_x1_conductivity,
    random_h10_samples,
    solve_dirichlet,
)
from src.pde.potential import gaussian_bump
from src.transforms import GridFunction


def bubble(domain):
    """(1 - |z|^2)^2 with an exactly zero trace."""
    u = GridFunction.from_callable(domain, lambda z: (1.0 - np.abs(z) ** 2) ** 2 + 0j)
    return u.with_boundary(np.zeros(domain.boundary_z.size, dtype=complex))


# Dirichlet solver ----------------------------------------------------------------

def test_laplace_reproduces_harmonic_function(small_domain):
    solution = solve_dirichlet(0.0, None, small_domain.boundary_z, small_domain)
    np.testing.assert_allclose(solution.field.values, small_domain.quadrature.z, atol=5e-3)
    np.testing.assert_allclose(solution.field.boundary, small_domain.boundary_z)
    np.testing.assert_allclose(solution.flux, small_domain.boundary_z, atol=5e-2)
    assert solution.residual < 1e-8


def test_helmholtz_reproduces_bessel_mode(small_domain):
    g = np.full(small_domain.boundary_z.size, j0(1.0), dtype=complex)
    solution = solve_dirichlet(1.0, None, g, small_domain)
    np.testing.assert_allclose(solution.field.values, j0(np.abs(small_domain.quadrature.z)), atol=5e-3)


def test_dirichlet_data_must_match_boundary(small_domain):
    with pytest.raises(DomainSpecError):
        solve_dirichlet(0.0, None, np.zeros(5), small_domain)


# Partial Cauchy data -------------------------------------------------------------

def test_cauchy_data_identical_for_equal_potentials(small_domain):
    q = build_potential("gaussian_bump", {"center": [0.1, 0.0], "width": 0.3, "height": 2.0}, small_domain)
    first = cauchy_data(q, small_domain, 4)
    second = cauchy_data(q, small_domain, 4, workers=2)
    assert first.max_flux_discrepancy(second) == 0.0
    assert first.n_basis == 4


def test_cauchy_data_inputs_live_on_gamma_tilde(small_domain):
    data = cauchy_data(Potential.zero(small_domain), small_domain, 4)
    assert np.all(data.basis[:, small_domain.on_gamma0] == 0)
    assert data.traces.shape == (4, int(small_domain.on_gamma_tilde.sum()))
    frame = data.to_dataframe()
    assert list(frame.columns) == ["basis_id", "theta", "trace_re", "trace_im", "flux_re", "flux_im"]
    assert len(frame) == 4 * int(small_domain.on_gamma_tilde.sum())


def test_cauchy_data_separates_potentials(small_domain):
    q = build_potential("gaussian_bump", {"center": [0.1, 0.2], "width": 0.3, "height": 5.0}, small_domain)
    with_bump = cauchy_data(q, small_domain, 4)
    without = cauchy_data(Potential.zero(small_domain), small_domain, 4)
    assert with_bump.max_flux_discrepancy(without) > 1e-6


def test_cauchy_data_basis_size_is_bounded(small_domain):
    n_tilde = int(small_domain.on_gamma_tilde.sum())
    with pytest.raises(DomainSpecError):
        cauchy_data(0.0, small_domain, n_tilde + 1)
    with pytest.raises(DomainSpecError):
        cauchy_data(0.0, small_domain, 0)


# Potentials ----------------------------------------------------------------------

def test_catalog_potentials(small_domain):
    q = build_potential("gaussian_bump", {"center": [0.0, 0.0], "width": 0.5}, small_domain)
    assert q.smoothness == "analytic_expr"
    assert complex(q(0.0)) == pytest.approx(1.0)
    assert q.max_abs() == pytest.approx(1.0, abs=1e-2)
    rate = catalog_expression("exp_linear", {"direction": [0.0, 2.0], "rate": 0.5})
    assert rate(np.array([0.3]))[0] == pytest.approx(0.25)
    total = catalog_expression("sum", {"terms": [{"name": "constant", "params": {"value": 1.0}},
                                                 {"name": "constant", "params": {"value": [0.0, 2.0]}}]})
    assert total(np.array([0.0]))[0] == pytest.approx(1.0 + 2.0j)


@pytest.mark.parametrize(
    "name, params",
    [
        ("laplace", {}),
        ("gaussian_bump", {"width": 0.0}),
        ("gaussian_bump", {"radius": 0.3}),
        ("constant", {"value": [1.0, 2.0, 3.0]}),
        ("sum", {"terms": []}),
    ],
)
def test_bad_catalog_entries(name, params):
    with pytest.raises(ConfigError):
        catalog_expression(name, params)


def test_potential_difference_of_equal_potentials_is_zero(small_domain):
    q = build_potential("gaussian_bump", {}, small_domain)
    diff = q - build_potential("gaussian_bump", {}, small_domain)
    assert diff.is_zero
    assert diff.smoothness == "analytic_expr"
    assert not q.is_zero


def test_exponential_conductivity_gives_constant_potential(small_domain):
    q = conductivity_to_potential(exp_linear_conductivity(1.0, 1.0), small_domain)
    np.testing.assert_allclose(q.values, 0.25, atol=1e-12)


def test_sampled_conductivity_matches_closed_form(small_domain):
    gamma = quadratic_x1_conductivity(1.0)
    sampled = GridFunction.from_callable(small_domain, gamma, with_boundary=False)
    q = conductivity_to_potential(sampled, small_domain)
    exact = conductivity_to_potential(gamma, small_domain)
    assert q.smoothness == "sampled"
    np.testing.assert_allclose(q.values, exact.values, atol=1e-6)


def test_nonpositive_conductivity_is_rejected(small_domain):
    sampled = GridFunction.from_callable(small_domain, lambda z: np.real(z) + 0j, with_boundary=False)
    with pytest.raises(HypothesisError):
        conductivity_to_potential(sampled, small_domain)


# Carleman estimate ---------------------------------------------------------------

def test_carleman_ratio_is_scale_invariant(small_domain, quadratic_phase):
    u = bubble(small_domain)
    base = carleman_estimate_check(u, quadratic_phase, (6.0, 10.0), small_domain)
    scaled = carleman_estimate_check(3.7 * u, quadratic_phase, (6.0, 10.0), small_domain)
    assert 0.0 < base.ratio_max < np.inf
    np.testing.assert_allclose(scaled.ratios, base.ratios, rtol=1e-10)
    assert len(base.lhs_terms[0]) == 4
    assert len(base.rhs_terms[0]) == 2
    assert base.to_dict()["stability"] >= 1.0


def test_carleman_ratio_of_zero_is_zero(small_domain, quadratic_phase):
    report = carleman_estimate_check(GridFunction.zeros(small_domain), quadratic_phase, (6.0, 10.0), small_domain)
    assert report.ratios == [0.0, 0.0]
    assert report.stability == 1.0


def test_carleman_check_needs_real_field_vanishing_on_boundary(small_domain, quadratic_phase):
    with pytest.raises(HypothesisError):
        carleman_estimate_check(bubble(small_domain) * 1j, quadratic_phase, (6.0,), small_domain)
    ones = GridFunction.from_callable(small_domain, lambda z: np.ones_like(z))
    with pytest.raises(HypothesisError):
        carleman_estimate_check(ones, quadratic_phase, (6.0,), small_domain)


def test_random_samples_are_real_and_vanish_on_boundary(small_domain):
    samples = random_h10_samples(small_domain, 3, np.random.default_rng(7))
    again = random_h10_samples(small_domain, 3, np.random.default_rng(7))
    assert len(samples) == 3
    for sample, twin in zip(samples, again):
        assert np.max(np.abs(sample.values.imag)) == 0.0
        assert not np.any(sample.boundary)
        np.testing.assert_array_equal(sample.values, twin.values)


def test_carleman_stability_of_bubble_is_below_three(default_domain, quadratic_phase_default):
    taus = (5.0, 10.0, 20.0, 40.0)
    report = carleman_estimate_check(bubble(default_domain), quadratic_phase_default, taus, default_domain)
    assert report.stability < 3.0
    assert report.covering_constants[0] == report.ratios[0]
    # ratio ~ tau^-2
    fit = linregress(np.log(taus), np.log(report.ratios))
    assert -3.0 <= fit.slope <= -1.5
    assert report.ratio_spread > report.stability


def test_stability_follows_the_covering_constant():
    growing = CarlemanReport([5.0, 10.0, 20.0, 40.0], [], [], [1.0, 2.0, 4.0, 8.0], 8.0)
    assert growing.covering_constants == [1.0, 2.0, 4.0, 8.0]
    assert growing.stability == pytest.approx(8.0)
    falling = CarlemanReport([5.0, 10.0, 20.0, 40.0], [], [], [8.0, 2.0, 1.0, 0.5], 8.0)
    assert falling.covering_constants == [8.0] * 4
    assert falling.stability == 1.0
    assert falling.ratio_spread == pytest.approx(16.0)
    assert falling.to_dict()["covering_constants"] == [8.0] * 4


def test_carleman_constant_covers_samples(small_domain, quadratic_phase):
    samples = random_h10_samples(small_domain, 2, np.random.default_rng(0))
    constant = carleman_constant(samples, quadratic_phase, (6.0, 10.0), small_domain)
    for sample in samples:
        assert carleman_estimate_check(sample, quadratic_phase, (6.0, 10.0), small_domain).ratio_max <= constant


# Carleman-weighted solves --------------------------------------------------------

def test_carleman_solve_below_threshold_raises(small_domain, quadratic_phase):
    with pytest.raises(HypothesisError):
        carleman_solve(0.0, None, None, quadratic_phase, 3.0, small_domain)


def test_carleman_solve_trivial_data(small_domain, quadratic_phase):
    result = carleman_solve(0.0, None, None, quadratic_phase, 8.0, small_domain)
    assert result.weighted.sup() == 0.0
    assert result.ratio == 0.0
    assert not result.flagged


def test_carleman_solve_with_source(small_domain, quadratic_phase):
    f = GridFunction.from_callable(small_domain, gaussian_bump(0.2j, 0.3))
    result = carleman_solve(0.0, f, None, quadratic_phase, 8.0, small_domain)
    assert result.residual < 1e-6
    assert 0.0 < result.ratio < np.inf
    gamma_tilde = result.weighted.boundary[small_domain.on_gamma_tilde]
    assert not np.any(gamma_tilde)


def test_carleman_solve_rejects_misshaped_gamma0_data(small_domain, quadratic_phase):
    with pytest.raises(DomainSpecError):
        carleman_solve(0.0, None, np.ones(7), quadratic_phase, 8.0, small_domain)


def test_least_norm_solve_is_no_larger_than_dirichlet(small_domain, quadratic_phase):
    f = GridFunction.from_callable(small_domain, gaussian_bump(0.2j, 0.3))
    g = np.cos(np.angle(small_domain.boundary_z))
    dirichlet = carleman_solve(0.0, f, g, quadratic_phase, 8.0, small_domain)
    least = carleman_solve(0.0, f, g, quadratic_phase, 8.0, small_domain, selection="least_norm")
    g0 = small_domain.on_gamma0
    assert least.selection == "least_norm"
    assert least.residual < 1e-8
    np.testing.assert_allclose(least.weighted.boundary[g0], dirichlet.weighted.boundary[g0])
    assert np.linalg.norm(least.weighted.values) <= np.linalg.norm(dirichlet.weighted.values) * (1.0 + 1e-8)
    expected = f.values * np.exp(-8.0 * quadratic_phase.phi(small_domain.quadrature.z))
    np.testing.assert_allclose(least.image, expected, atol=1e-6 * np.max(np.abs(expected)))


def test_batched_solves_match_single_solves(small_domain, quadratic_phase):
    f = GridFunction.from_callable(small_domain, gaussian_bump(-0.1, 0.4))
    g = np.sin(np.angle(small_domain.boundary_z))
    batch = carleman_solve_many(0.0, [(f, None), (None, g)], quadratic_phase, 8.0, small_domain,
                                selection="least_norm")
    for (source, data), result in zip([(f, None), (None, g)], batch):
        single = carleman_solve(0.0, source, data, quadratic_phase, 8.0, small_domain, selection="least_norm")
        np.testing.assert_allclose(result.weighted.values, single.weighted.values, atol=1e-12)


def test_unknown_selection_is_rejected(small_domain, quadratic_phase):
    with pytest.raises(ValueError):
        carleman_solve(0.0, None, None, quadratic_phase, 8.0, small_domain, selection="smallest")
