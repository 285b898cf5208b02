"""
Experiment configuration: JSON loading and validation.

Every failure raises ConfigError with the offending field in the message.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from config.settings import LabSettings
from src.exceptions import CGOLabError, ConfigError
from src.geometry.domain import Domain, DomainSpec, build_domain
from src.holo.phase import PhaseFunction
from src.holo.series import HolomorphicFunction
from src.pde.potential import Potential, build_potential, catalog_expression
from src.transforms.oscillatory import check_budget
from utils.serialization import stable_hash

logger = logging.getLogger(__name__)

MIN_TAU_SWEEP = 4

DEFAULT_TOLERANCES: Dict[str, float] = {
    "closed_form": 1e-3,
    "transport": LabSettings.TRANSPORT_RESIDUAL_TOL,
    "energy": 1e-3,
    "decay_slope_low": -1.3,
    "decay_slope_high": -0.9,
    "pde_residual": LabSettings.ASSEMBLY_TOL,
    "gamma0_trace": 1e-6,
    "identity_zero": 1e-10,
    "stationary_phase": 0.05,
    "recovery": 0.15,
    "off_support": 0.1,
    "carleman_scale": 1e-10,
    "carleman_stability": 3.0,
    "cr_misfit": 1e-3,
    "boundary_identity": 1e-6,
}


def _pair(value: Any, name: str) -> complex:
    """Read a complex number written as [re, im] or a bare real."""
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"expected [re, im], got {value}")
            return complex(float(value[0]), float(value[1]))
        return complex(float(value))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: {e}") from e


def _floats(values: Any, name: str) -> List[float]:
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: expected a list of numbers ({e})") from e


@dataclass(frozen=True)
class PhaseConfig:
    """Probe point, weights and degrees handed to build_phase."""

    x_hat: complex = 0j
    epsilon: float = 0.05
    delta: float = 0.0
    degrees: Tuple[int, int, Optional[int]] = (LabSettings.PHASE_DEGREE_U, LabSettings.PHASE_DEGREE_P, None)
    amplitude_degree: int = LabSettings.AMPLITUDE_DEGREE

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhaseConfig":
        degrees = data.get("degrees", [LabSettings.PHASE_DEGREE_U, LabSettings.PHASE_DEGREE_P, None])
        try:
            d_u, d_p, d_w = degrees
            parsed = (int(d_u), int(d_p), None if d_w is None else int(d_w))
            return cls(
                x_hat=_pair(data.get("x_hat", 0.0), "phase.x_hat"),
                epsilon=float(data.get("epsilon", 0.05)),
                delta=float(data.get("delta", 0.0)),
                degrees=parsed,
                amplitude_degree=int(data.get("amplitude_degree", LabSettings.AMPLITUDE_DEGREE)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"phase: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x_hat": [self.x_hat.real, self.x_hat.imag],
            "epsilon": self.epsilon,
            "delta": self.delta,
            "degrees": list(self.degrees),
            "amplitude_degree": self.amplitude_degree,
        }


@dataclass(frozen=True)
class PotentialSpec:
    """A catalog name and its parameters."""

    name: str = "constant"
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], label: str) -> "PotentialSpec":
        if not isinstance(data, dict) or "name" not in data:
            raise ConfigError(f"{label}: expected an object with a 'name'")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{label}.params: expected an object")
        return cls(str(data["name"]), dict(params))

    def resolve(self, label: str) -> None:
        try:
            catalog_expression(self.name, self.params)
        except ConfigError as e:
            raise ConfigError(f"{label}: {e}") from e

    def build(self, domain: Domain) -> Potential:
        return build_potential(self.name, self.params, domain)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "params": self.params}


@dataclass(frozen=True)
class ProbeConfig:
    """Square probe grid for recovery maps."""

    half_width: float = 0.3
    n: int = 3
    center: complex = 0j

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProbeConfig":
        try:
            return cls(float(data.get("half_width", 0.3)), int(data.get("n", 3)),
                       _pair(data.get("center", 0.0), "probe.center"))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"probe: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {"half_width": self.half_width, "n": self.n, "center": [self.center.real, self.center.imag]}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything a subcommand needs; identical configs produce identical reports.

    Attributes:
        domain: Disk and grid
        phase: Phase construction parameters
        q1, q2: Potentials from the catalog
        tau_sweep: Oscillating-parameter sweep, checked against the grid budget
        tolerances: Check thresholds, DEFAULT_TOLERANCES overridden by name
        output_dir: Artifact directory
        seed: Seed of the random sample suites
        probe: Recovery probe grid
        carleman_tau_sweep: Sweep of the Carleman checks
        carleman_samples: Number of random H1_0 samples
        energy_taus: Parameters of the energy identities
        eps_reg_sweep: Regularization sweep of the Cauchy-Riemann extension
    """

    domain: DomainSpec = field(default_factory=DomainSpec)
    phase: PhaseConfig = field(default_factory=PhaseConfig)
    q1: PotentialSpec = field(default_factory=lambda: PotentialSpec(
        "gaussian_bump", {"center": [0.0, 0.0], "width": 0.3, "height": 1.0}))
    q2: PotentialSpec = field(default_factory=lambda: PotentialSpec("constant", {"value": 0.0}))
    tau_sweep: Tuple[float, ...] = LabSettings.DEFAULT_TAU_SWEEP
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: Path = Path("outputs")
    seed: int = 0
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    carleman_tau_sweep: Tuple[float, ...] = (5.0, 10.0, 20.0, 40.0)
    carleman_samples: int = 20
    energy_taus: Tuple[float, ...] = (3.0, 5.0, 10.0)
    eps_reg_sweep: Tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        known = {"domain", "phase", "q1", "q2", "tau_sweep", "tolerances", "output_dir", "seed", "probe",
                 "carleman_tau_sweep", "carleman_samples", "energy_taus", "eps_reg_sweep"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {unknown}")

        defaults = cls()
        try:
            domain = DomainSpec.from_dict(data.get("domain", {}))
        except CGOLabError as e:
            raise ConfigError(f"domain: {e}") from e

        tolerances = dict(DEFAULT_TOLERANCES)
        overrides = data.get("tolerances", {})
        if not isinstance(overrides, dict):
            raise ConfigError("tolerances: expected an object")
        for name, value in overrides.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"tolerances.{name}: unknown tolerance, expected one of {sorted(DEFAULT_TOLERANCES)}")
            try:
                tolerances[name] = float(value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"tolerances.{name}: {e}") from e

        output_dir = Path(data.get("output_dir", defaults.output_dir))

        try:
            seed = int(data.get("seed", 0))
            carleman_samples = int(data.get("carleman_samples", defaults.carleman_samples))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"seed/carleman_samples: {e}") from e

        return cls(
            domain=domain,
            phase=PhaseConfig.from_dict(data.get("phase", {})),
            q1=PotentialSpec.from_dict(data["q1"], "q1") if "q1" in data else defaults.q1,
            q2=PotentialSpec.from_dict(data["q2"], "q2") if "q2" in data else defaults.q2,
            tau_sweep=tuple(_floats(data.get("tau_sweep", defaults.tau_sweep), "tau_sweep")),
            tolerances=tolerances,
            output_dir=output_dir,
            seed=seed,
            probe=ProbeConfig.from_dict(data.get("probe", {})),
            carleman_tau_sweep=tuple(_floats(data.get("carleman_tau_sweep", defaults.carleman_tau_sweep),
                                             "carleman_tau_sweep")),
            carleman_samples=carleman_samples,
            energy_taus=tuple(_floats(data.get("energy_taus", defaults.energy_taus), "energy_taus")),
            eps_reg_sweep=tuple(_floats(data.get("eps_reg_sweep", defaults.eps_reg_sweep), "eps_reg_sweep")),
        )

    def with_output_dir(self, output_dir: Union[str, Path]) -> "ExperimentConfig":
        return replace(self, output_dir=Path(output_dir))

    def tolerance(self, name: str) -> float:
        return self.tolerances[name]

    def build_domain(self) -> Domain:
        return build_domain(self.domain)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_dict(),
            "phase": self.phase.to_dict(),
            "q1": self.q1.to_dict(),
            "q2": self.q2.to_dict(),
            "tau_sweep": list(self.tau_sweep),
            "tolerances": dict(sorted(self.tolerances.items())),
            "output_dir": self.output_dir.as_posix(),
            "seed": self.seed,
            "probe": self.probe.to_dict(),
            "carleman_tau_sweep": list(self.carleman_tau_sweep),
            "carleman_samples": self.carleman_samples,
            "energy_taus": list(self.energy_taus),
            "eps_reg_sweep": list(self.eps_reg_sweep),
        }

    def config_hash(self) -> str:
        return stable_hash(self.to_dict())


def _check_increasing(values: Tuple[float, ...], name: str, minimum: int = 1) -> None:
    if len(values) < minimum:
        raise ConfigError(f"{name}: needs at least {minimum} values, got {len(values)}")
    if any(not math.isfinite(v) or v <= 0 for v in values):
        raise ConfigError(f"{name}: values must be positive and finite, got {list(values)}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name}: values must be strictly increasing, got {list(values)}")


def default_phase(config: ExperimentConfig) -> PhaseFunction:
    """The quadratic (z - x_hat)**2 / 2 that seeds build_phase; the sweep is budgeted against it."""
    x_hat = config.phase.x_hat
    return PhaseFunction(HolomorphicFunction([x_hat ** 2 / 2.0, -x_hat, 0.5]), x_hat=x_hat)


def validate_config(config: ExperimentConfig, check_output: bool = True) -> Domain:
    """
    Check a parsed config.

    Args:
        config: Parsed configuration
        check_output: Also create output_dir and check it is writable

    Returns:
        The built domain, reused by the runner

    Raises:
        ConfigError: Naming the offending field
    """
    try:
        domain = build_domain(config.domain)
    except CGOLabError as e:
        raise ConfigError(f"domain: {e}") from e

    config.q1.resolve("q1")
    config.q2.resolve("q2")

    phase = config.phase
    if abs(phase.x_hat) >= config.domain.radius:
        raise ConfigError(f"phase.x_hat: {phase.x_hat} is not interior to the disk of radius {config.domain.radius}")
    if phase.epsilon < 0 or phase.delta < 0:
        raise ConfigError(f"phase: epsilon and delta must be non-negative, got {phase.epsilon}, {phase.delta}")
    if min(d for d in phase.degrees if d is not None) < 0 or phase.amplitude_degree < 0:
        raise ConfigError(f"phase.degrees: degrees must be non-negative, got {list(phase.degrees)}")

    _check_increasing(config.tau_sweep, "tau_sweep", MIN_TAU_SWEEP)
    try:
        check_budget(default_phase(config), max(config.tau_sweep), domain)
    except CGOLabError as e:
        raise ConfigError(f"tau_sweep: {e}") from e

    _check_increasing(config.carleman_tau_sweep, "carleman_tau_sweep", MIN_TAU_SWEEP)
    _check_increasing(config.energy_taus, "energy_taus")
    if any(not 0 < e <= 1 for e in config.eps_reg_sweep):
        raise ConfigError(f"eps_reg_sweep: values must lie in (0, 1], got {list(config.eps_reg_sweep)}")
    if any(b >= a for a, b in zip(config.eps_reg_sweep, config.eps_reg_sweep[1:])):
        raise ConfigError(f"eps_reg_sweep: values must be strictly decreasing, got {list(config.eps_reg_sweep)}")
    if config.carleman_samples < 1:
        raise ConfigError(f"carleman_samples: must be positive, got {config.carleman_samples}")
    if config.probe.n < 1 or config.probe.half_width < 0:
        raise ConfigError(f"probe: n must be positive and half_width non-negative, got {config.probe.to_dict()}")
    for name, value in config.tolerances.items():
        if not math.isfinite(value):
            raise ConfigError(f"tolerances.{name}: must be finite, got {value}")

    if check_output:
        ensure_writable(config.output_dir)

    logger.info(f"Config validated: grid {config.domain.radial_nodes}x{config.domain.angular_nodes}, "
                f"tau sweep {list(config.tau_sweep)}")
    return domain


def ensure_writable(path: Path) -> None:
    """
    Raises:
        ConfigError: If the directory cannot be created or written
    """
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"output_dir: cannot create {path}: {e}") from e
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output_dir: {path} is not writable")


def load_config(path: Union[str, Path], output_dir: Optional[Union[str, Path]] = None,
                check_output: bool = True) -> ExperimentConfig:
    """
    Load and validate a JSON experiment config.

    Args:
        path: Config file
        output_dir: Overrides the configured output_dir
        check_output: Also check that output_dir is writable

    Returns:
        ExperimentConfig

    Raises:
        ConfigError: On unreadable JSON or any failed validation
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e

    config = ExperimentConfig.from_dict(data)
    if output_dir is not None:
        config = config.with_output_dir(output_dir)
    validate_config(config, check_output=check_output)
    return config
