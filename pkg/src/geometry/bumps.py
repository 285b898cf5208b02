"""
Compactly supported C2 profiles used for partitions, boundary bases and test fields.
"""

from typing import Any

import numpy as np


def c2_bump(z: Any, center: complex, radius: float) -> np.ndarray:
    """(1 - |z - c|^2 / rho^2)^3 inside the disk B(c, rho), zero outside."""
    s = np.abs(np.asarray(z) - center) ** 2 / radius ** 2
    return np.where(s < 1.0, (1.0 - np.minimum(s, 1.0)) ** 3, 0.0)


def smoothstep(t: Any) -> np.ndarray:
    """C2 ramp from 0 (t <= 0) to 1 (t >= 1), the quintic 6t^5 - 15t^4 + 10t^3."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)


def arc_bump(theta: Any, center: float, half_width: float) -> np.ndarray:
    """C2 bump in the angle, periodic, supported on |theta - center| < half_width."""
    gap = np.angle(np.exp(1j * (np.asarray(theta) - center)))
    s = (gap / half_width) ** 2
    return np.where(s < 1.0, (1.0 - np.minimum(s, 1.0)) ** 3, 0.0)
