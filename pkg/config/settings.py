"""
Lab configuration settings.
"""

from pathlib import Path
from typing import Any, Dict, Optional


def _secret(key: str) -> Optional[Any]:
    """Look up an override in the ``lab`` section of the streamlit secrets."""
    try:
        import streamlit as st
        return st.secrets.get("lab", {}).get(key)
    except Exception:
        return None


class LabSettings:
    """Numerical defaults and tolerances shared by every pipeline."""

    # Default grid (radial x angular, boundary)
    DEFAULT_RADIUS = 1.0
    DEFAULT_RADIAL_NODES = 64
    DEFAULT_ANGULAR_NODES = 256
    DEFAULT_BOUNDARY_NODES = 256
    DEFAULT_GAMMA_TILDE = (0.0, 3.141592653589793)

    MIN_BOUNDARY_NODES = 64
    MIN_RADIAL_NODES = 16
    MIN_ANGULAR_NODES = 64

    # Quadrature evaluation block (targets per vectorized chunk)
    TARGET_BLOCK_SIZE = 64

    # Oscillation budget: grid points per period of exp(2i tau psi)
    POINTS_PER_OSCILLATION = 8

    # Transforms
    TRANSPORT_RESIDUAL_TOL = 1e-2
    DECAY_DELTA = 0.1
    JET_FIT_RADIUS_FACTOR = 4.0

    # Holomorphic fits
    AMPLITUDE_DEGREE = 16
    PHASE_DEGREE_U = 16
    PHASE_DEGREE_P = 12
    PHASE_DEGREE_W_MARGIN = 6
    CORRECTOR_DEGREE = 16
    JET_TOL = 1e-8
    NONDEGENERACY_RTOL = 1e-6
    SEPARATION_RTOL = 1e-8
    TANGENTIAL_MARGIN = 0.1
    PHASE_RETRY_BUDGET = 16
    # polynomials cannot be exactly real on an arc; the Gamma_0 fit residual floor
    IM_PHI_GAMMA0_TOL = 1e-3
    CORRECTOR_MISFIT_TOL = 1e-4
    CR_EXTENDABLE_RTOL = 1e-2
    CR_EXTENSION_DEGREE = 32

    # PDE
    TAU0 = 5.0
    C_MAX = 1e3
    SOLVER_PIVOT_RTOL = 1e-12
    SOLVER_TOL = 1e-8

    # CGO construction
    HALO_FACTOR = 0.15
    COLLAR_FACTOR = 0.15
    HERMITE_TOL = 1e-8
    CANCELLATION_TOL = 1e-1
    ASSEMBLY_TOL = 1e-1
    TRACE_TOL = 1e-8

    # Analysis
    DEFAULT_TAU_SWEEP = (8.0, 12.0, 16.0, 24.0)
    RECOVERY_MAX_CONDITION = 1e6

    # Run ledger
    DB_FILE = Path(__file__).parent.parent / "data" / "cgolab_runs.db"
    DEFAULT_WORKERS = 1
    MAX_WORKERS = 32

    @classmethod
    def get_tau0(cls) -> float:
        """
        Get the Carleman threshold tau_0 from secrets or use default.

        Returns:
            Smallest |tau| accepted by the weighted solver
        """
        value = _secret("tau0")
        try:
            if value is not None:
                return float(value)
        except (TypeError, ValueError):
            pass
        return cls.TAU0

    @classmethod
    def get_c_max(cls) -> float:
        """Bound-ratio ceiling above which Carleman solves are flagged."""
        value = _secret("c_max")
        try:
            if value is not None:
                return float(value)
        except (TypeError, ValueError):
            pass
        return cls.C_MAX

    @classmethod
    def get_workers(cls, requested: Optional[int] = None) -> int:
        """
        Resolve the worker count for parallel sections.

        Args:
            requested: Value given on the command line, if any

        Returns:
            Worker count clamped to [1, MAX_WORKERS]
        """
        value = requested if requested is not None else _secret("workers")
        try:
            if value is not None:
                return max(1, min(int(value), cls.MAX_WORKERS))
        except (TypeError, ValueError):
            pass
        return cls.DEFAULT_WORKERS

    @classmethod
    def get_db_path(cls) -> Path:
        value = _secret("db_path")
        return Path(value) if value else cls.DB_FILE

    @classmethod
    def get_lab_config(cls) -> Dict[str, Any]:
        """
        Get the effective numerical configuration.

        Returns:
            Dictionary with the settings echoed into run reports
        """
        return {
            "points_per_oscillation": cls.POINTS_PER_OSCILLATION,
            "tau0": cls.get_tau0(),
            "c_max": cls.get_c_max(),
            "halo_factor": cls.HALO_FACTOR,
            "collar_factor": cls.COLLAR_FACTOR,
            "corrector_degree": cls.CORRECTOR_DEGREE,
            "phase_degree_u": cls.PHASE_DEGREE_U,
            "phase_degree_p": cls.PHASE_DEGREE_P,
            "decay_delta": cls.DECAY_DELTA,
        }


# Feature flags
class FeatureFlags:
    """Feature flags for optional pipeline extras and dashboard sections."""

    # Numerical extras
    ENABLE_SPECTRAL_DERIVATIVES = True
    ENABLE_CANCELLATION_DIAGNOSTIC = True

    # Dashboard sections
    ENABLE_RUN_HISTORY = True
    ENABLE_CHECK_DETAILS = True
    ENABLE_SUMMARY_METRICS = True

    @classmethod
    def is_enabled(cls, feature_name: str) -> bool:
        """
        Check if a feature is enabled.

        Args:
            feature_name: Name of the feature flag

        Returns:
            True if feature is enabled
        """
        return getattr(cls, feature_name, False)
