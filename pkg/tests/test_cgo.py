import numpy as np
import pytest

from src.exceptions import CGOLayerError, DomainSpecError, PhaseValidationError
from src.cgo import build_cgo, build_cgo_pair, hermite_from_jets, hermite_polynomials, partition_e1e2, pde_residual
from src.holo import HolomorphicFunction
from src.pde import Potential, build_potential
from src.transforms import GridFunction

ONE = HolomorphicFunction([1.0])
IMAG = HolomorphicFunction([1.0j])


# Partition of unity --------------------------------------------------------------

def test_partition_sums_to_one(small_domain):
    e1, e2 = partition_e1e2(small_domain, [0j, 0.3])
    np.testing.assert_allclose(e1.values + e2.values, 1.0, atol=1e-14)
    np.testing.assert_allclose(e1.boundary, 0.0)
    np.testing.assert_allclose(e2.boundary, 1.0)


def test_partition_supports(small_domain):
    points = [0j, 0.3]
    e1, e2 = partition_e1e2(small_domain, points, epsilon=0.15, rho=0.1)
    z = small_domain.quadrature.z
    near_points = np.min(np.abs(z[..., None] - np.array(points)), axis=-1) < 0.1
    in_collar = small_domain.quadrature.boundary_distance < 0.15
    np.testing.assert_allclose(e2.values[near_points], 0.0, atol=1e-14)
    np.testing.assert_allclose(e1.values[np.broadcast_to(in_collar, z.shape)], 0.0, atol=1e-14)


def test_partition_halo_must_clear_collar(small_domain):
    with pytest.raises(DomainSpecError):
        partition_e1e2(small_domain, [0.8])
    with pytest.raises(DomainSpecError):
        partition_e1e2(small_domain, [0j], epsilon=0.0)


# Hermite polynomials -------------------------------------------------------------

def test_hermite_single_point_in_z():
    poly = hermite_from_jets([0.2], np.array([[1.0, 2.0, 3.0]]), "M1")
    np.testing.assert_allclose(poly.polynomial.jet(0.2), [1.0, 2.0, 3.0], atol=1e-12)
    assert poly.variable == "z"
    assert poly.jet_residual < 1e-12


def test_hermite_in_conj_z_interpolates_at_conjugate_nodes():
    z0 = 0.2 + 0.3j
    poly = hermite_from_jets([z0], np.array([[1.0j, 0.5, -1.0]]), "M3")
    assert poly.variable == "zbar"
    np.testing.assert_allclose(poly.polynomial.jet(np.conj(z0)), [1.0j, 0.5, -1.0], atol=1e-12)
    assert poly(z0) == pytest.approx(1.0j)


def test_hermite_two_points():
    jets = np.array([[1.0, 0.0, 2.0], [-1.0, 1.0j, 0.0]])
    poly = hermite_from_jets([0.3, -0.3], jets, "M2")
    assert poly.coefficients.size == 6
    np.testing.assert_allclose(poly.polynomial.jet(0.3), jets[0], atol=1e-10)
    np.testing.assert_allclose(poly.polynomial.jet(-0.3), jets[1], atol=1e-10)


def test_hermite_rejects_confluent_points_and_unknown_kind():
    with pytest.raises(PhaseValidationError):
        hermite_from_jets([0.1, 0.1], np.zeros((2, 3)), "M1")
    with pytest.raises(ValueError):
        hermite_from_jets([0.1], np.zeros((1, 3)), "M5")


def test_hermite_without_points_is_zero():
    poly = hermite_from_jets([], np.zeros((0, 3)), "M4")
    assert poly(0.5) == 0.0


def test_hermite_matches_transform_jets(small_domain):
    # dbar_inverse(1) = conj(z), dz_inverse(1) = z
    z0 = 0.3 + 0.2j
    one = GridFunction.from_callable(small_domain, lambda z: np.ones_like(z))
    m1 = hermite_polynomials(one, [z0], "M1", small_domain)
    m3 = hermite_polynomials(one, [z0], "M3", small_domain)
    np.testing.assert_allclose(m1.coefficients, [np.conj(z0), 0.0, 0.0], atol=1e-8)
    np.testing.assert_allclose(m3.coefficients, [z0, 0.0, 0.0], atol=1e-8)
    assert m1.to_dict()["variable"] == "z"


# Builder -------------------------------------------------------------------------

def test_build_cgo_validates_arguments(small_domain, quadratic_phase):
    with pytest.raises(ValueError):
        build_cgo(Potential.zero(small_domain), quadratic_phase, ONE, 8.0, small_domain, sign=0)


def test_build_cgo_names_failing_layer(small_domain, quadratic_phase):
    with pytest.raises(CGOLayerError) as excinfo:
        build_cgo(Potential.zero(small_domain), quadratic_phase, ONE, 3.0, small_domain)
    assert excinfo.value.layer == "u12"


def test_zero_potential_is_leading_term_plus_defect(small_domain, quadratic_phase):
    cgo = build_cgo(Potential.zero(small_domain), quadratic_phase, IMAG, 8.0, small_domain)
    assert cgo.ledger["u11"]["l2"] == 0.0
    assert cgo.ledger["u12"]["l2"] == 0.0
    assert cgo.ledger["total"]["pde_residual"] < 1e-4
    assert cgo.ledger["total"]["gamma0_trace"] <= 1e-8
    assert cgo.passed
    np.testing.assert_allclose(cgo.weighted_total.values, cgo.leading.values + cgo.defect.values)


def test_defect_layer_cancels_gamma0_trace(small_domain, quadratic_phase):
    cgo = build_cgo(Potential.zero(small_domain), quadratic_phase, ONE, 8.0, small_domain, sign=-1)
    assert cgo.sigma == -8.0
    assert cgo.ledger["total"]["gamma0_trace"] < 1e-12
    assert cgo.ledger["leading"]["gamma0_mismatch"] > 0.1
    assert cgo.ledger["defect"]["data_max"] == cgo.ledger["leading"]["gamma0_mismatch"]
    assert cgo.ledger["defect"]["l2"] > 0.0
    assert set(cgo.ledger) >= {"hermite", "leading", "u11", "correctors", "u12", "defect", "total", "passed"}
    assert cgo.to_dict()["ledger"] is cgo.ledger


def test_pde_residual_counts_solved_layers_through_their_image(small_domain, quadratic_phase):
    cgo = build_cgo(Potential.zero(small_domain), quadratic_phase, ONE, 8.0, small_domain)
    spectral_only = pde_residual(cgo.weighted_total, Potential.zero(small_domain), quadratic_phase,
                                 cgo.sigma, small_domain)
    assert cgo.ledger["total"]["pde_residual"] <= spectral_only


@pytest.mark.slow
def test_build_pair_with_bump_potential(small_domain, quadratic_phase):
    q = build_potential("gaussian_bump", {"center": [0.1, 0.1], "width": 0.3}, small_domain)
    scaled = {"u1": [], "v": []}
    for tau in (8.0, 12.0, 16.0):
        u1, v = build_cgo_pair(q, q, quadratic_phase, ONE, tau, small_domain, workers=2)
        assert (u1.sign, v.sign) == (1, -1)
        for name, cgo in (("u1", u1), ("v", v)):
            assert max(cgo.ledger["hermite"].values()) <= 1e-8
            assert cgo.ledger["correctors"]["relative_misfit"] <= 1e-4
            assert cgo.ledger["u12"]["solver_residual"] < 1e-8
            assert cgo.ledger["total"]["pde_residual"] < 0.1
            assert cgo.ledger["total"]["gamma0_trace"] <= 1e-8
            assert np.all(np.isfinite(cgo.weighted_total.values))
            scaled[name].append(cgo.ledger["u12"]["tau_l2"])
    for series in scaled.values():
        assert series[0] > series[1] > series[2]
