import numpy as np
import pytest

from src.exceptions import DomainSpecError
from src.geometry import (
    DomainSpec,
    arc_bump,
    build_domain,
    build_polar_quadrature,
    c2_bump,
    collar_area,
    o_epsilon_mask,
    smoothstep,
)


def test_default_domain_splits_boundary_evenly():
    domain = build_domain(DomainSpec(boundary_nodes=256))
    assert int(domain.on_gamma_tilde.sum()) == 128
    assert int(domain.on_gamma0.sum()) == 128


def test_gamma0_and_gamma_tilde_partition_the_boundary(small_domain):
    assert np.all(small_domain.on_gamma0 ^ small_domain.on_gamma_tilde)
    assert small_domain.on_gamma0.size == small_domain.boundary_z.size


def test_quadrature_weights_sum_to_area(default_domain):
    assert default_domain.quadrature.weights.sum() == pytest.approx(np.pi, rel=1e-10)


def test_quadrature_weights_scaled_disk():
    grid = build_polar_quadrature(2.0, 24, 96)
    assert grid.weights.sum() == pytest.approx(4.0 * np.pi, rel=1e-10)


def test_boundary_length_of_radius_two_disk():
    domain = build_domain(DomainSpec(kind="scaled_disk", radius=2.0))
    assert domain.boundary_length == pytest.approx(4.0 * np.pi, rel=1e-10)


@pytest.mark.parametrize(
    "integrand, exact",
    [
        (lambda z: np.ones_like(z.real), np.pi),
        (lambda z: np.abs(z) ** 2, np.pi / 2.0),
        (lambda z: z.real ** 2 * z.imag ** 2, np.pi / 24.0),
        (lambda z: z.real ** 6, 5.0 * np.pi / 64.0),
        (lambda z: z.real ** 3 * z.imag, 0.0),
    ],
)
def test_polynomial_moments(small_domain, integrand, exact):
    value = small_domain.quadrature.integrate(integrand(small_domain.quadrature.z))
    assert value.real == pytest.approx(exact, rel=1e-8, abs=1e-12)


def test_boundary_frame_is_orthonormal(small_domain):
    nu, t = small_domain.normals, small_domain.tangents
    np.testing.assert_allclose(np.abs(nu), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.abs(t), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.real(nu * np.conj(t)), 0.0, atol=1e-14)
    # tangent (nu_2, -nu_1)
    np.testing.assert_allclose(t.real, nu.imag, atol=1e-14)
    np.testing.assert_allclose(t.imag, -nu.real, atol=1e-14)


def test_interior_nodes_are_off_the_boundary(small_domain):
    assert np.all(small_domain.quadrature.boundary_distance > 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gamma_tilde": (1.0, 1.0)},
        {"gamma_tilde": (0.0, 2.0 * np.pi)},
        {"boundary_nodes": 32},
        {"radial_nodes": 8},
        {"angular_nodes": 32},
        {"angular_nodes": 129},
        {"radius": 2.0},
        {"kind": "annulus"},
    ],
)
def test_invalid_specs_are_rejected(kwargs):
    with pytest.raises(DomainSpecError):
        build_domain(DomainSpec(**kwargs))


def test_spec_round_trips_through_dict():
    spec = DomainSpec(kind="scaled_disk", radius=1.5, boundary_nodes=96)
    assert DomainSpec.from_dict(spec.to_dict()) == spec


def test_collar_mask_empty_for_tiny_epsilon(small_domain):
    assert not o_epsilon_mask(small_domain, 1e-6).any()


def test_collar_mask_selects_outer_annulus(small_domain):
    mask = o_epsilon_mask(small_domain, 0.5)
    r = np.abs(small_domain.quadrature.z)
    assert np.all(r[mask] >= 0.5)
    assert np.all(r[~mask] < 0.5)
    area = small_domain.quadrature.weights[mask].sum()
    assert area == pytest.approx(np.pi - np.pi / 4.0, rel=0.1)


@pytest.mark.parametrize("epsilon", [0.25, 0.5, 0.1])
def test_collar_area_matches_annulus(default_domain, epsilon):
    exact = np.pi - np.pi * (1.0 - epsilon) ** 2
    assert collar_area(default_domain, epsilon) == pytest.approx(exact, rel=1e-3)


@pytest.mark.parametrize("epsilon", [0.0, 1.0, 1.5, -0.1])
def test_collar_width_out_of_range(small_domain, epsilon):
    with pytest.raises(DomainSpecError):
        o_epsilon_mask(small_domain, epsilon)


def test_bump_profiles():
    assert c2_bump(0.2 + 0.1j, 0.2 + 0.1j, 0.3) == pytest.approx(1.0)
    assert c2_bump(0.6, 0.0, 0.5) == 0.0
    assert smoothstep(-1.0) == 0.0
    assert smoothstep(2.0) == 1.0
    assert smoothstep(0.5) == pytest.approx(0.5)
    assert arc_bump(2.0 * np.pi - 0.1, 0.0, 0.2) == pytest.approx(arc_bump(0.1, 0.0, 0.2))
    assert arc_bump(np.pi, 0.0, 0.2) == 0.0
