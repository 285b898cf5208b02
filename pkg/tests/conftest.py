"""
Shared fixtures: domains are immutable, so they are built once per session.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from config.experiment import ExperimentConfig
from src.geometry import DomainSpec, build_domain
from src.holo import HolomorphicFunction, PhaseFunction


@pytest.fixture(scope="session")
def small_domain():
    """Unit disk, 32x128 grid, 128 boundary nodes, Gamma_tilde = [0, pi)."""
    spec = DomainSpec(
        kind="unit_disk",
        radius=1.0,
        gamma_tilde=(0.0, np.pi),
        boundary_nodes=128,
        radial_nodes=32,
        angular_nodes=128,
    )
    return build_domain(spec)


@pytest.fixture(scope="session")
def default_domain():
    """Unit disk on the default 64x256 grid."""
    return build_domain(DomainSpec())


@pytest.fixture(scope="session")
def quadratic_phase(small_domain):
    """Phi = z**2 / 2, one critical point at the origin."""
    return PhaseFunction.from_holomorphic(HolomorphicFunction([0.0, 0.0, 0.5]), small_domain, x_hat=0j)


@pytest.fixture(scope="session")
def quadratic_phase_default(default_domain):
    return PhaseFunction.from_holomorphic(HolomorphicFunction([0.0, 0.0, 0.5]), default_domain, x_hat=0j)


@pytest.fixture(scope="session")
def high_tau_config():
    """configs/high_tau.json: a 128x1024 grid whose budget reaches tau = 80."""
    path = Path(__file__).resolve().parent.parent / "configs" / "high_tau.json"
    return ExperimentConfig.from_dict(json.loads(path.read_text(encoding="utf-8")))


@pytest.fixture(scope="session")
def high_tau_domain(high_tau_config):
    return high_tau_config.build_domain()
