"""
Warping profiles for rotationally symmetric planes dr^2 + phi(r)^2 dtheta^2.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.errors import ProfileError

RadialFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class CapProfile:
    """
    phi(r) = integral_0^r h(s) ds with h = 1 on [0, r0/2], h = 0 on [r0, inf)
    and a quintic smoothstep in between. The plane is Euclidean near the
    origin and a cylinder of radius 3 r0 / 4 outside r0.
    """
    r0: float
    phi: RadialFn
    dphi: RadialFn
    d2phi: RadialFn

    @property
    def inner_radius(self) -> float:
        return 0.5 * self.r0

    @property
    def cylinder_radius(self) -> float:
        return 0.75 * self.r0

    def curvature(self, r) -> np.ndarray:
        """Gauss curvature -phi'' / phi of the polar metric."""
        r = np.asarray(r, dtype=float)
        return -self.d2phi(r) / self.phi(r)

    def fiber_weight(self, r) -> np.ndarray:
        """
        w(r) = ((phi / r)^2 - 1) / r^2, so that in Cartesian coordinates
        g = I + w(r) [[b^2, -ab], [-ab, a^2]]. Exactly zero for r <= r0 / 2.
        """
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        outer = r > self.inner_radius
        ro = r[outer]
        out[outer] = ((self.phi(ro) / ro) ** 2 - 1.0) / ro**2
        return out


def _smoothstep(t: np.ndarray) -> np.ndarray:
    return t**3 * (10.0 - 15.0 * t + 6.0 * t * t)


def _smoothstep_slope(t: np.ndarray) -> np.ndarray:
    return 30.0 * t * t * (1.0 - t) ** 2


def _smoothstep_integral(t: np.ndarray) -> np.ndarray:
    return t**6 - 3.0 * t**5 + 2.5 * t**4


def cap_profile(r0: float = 1.0) -> CapProfile:
    if not np.isfinite(r0) or r0 <= 0:
        raise ProfileError(f"Cap radius must be positive, got {r0}")
    half = 0.5 * r0

    def _t(r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ProfileError("Profile evaluated at negative radius")
        return r, np.clip((r - half) / half, 0.0, 1.0)

    def phi(r):
        r, t = _t(r)
        return np.where(r <= half, r, half + half * (t - _smoothstep_integral(t)))

    def dphi(r):
        _, t = _t(r)
        return 1.0 - _smoothstep(t)

    def d2phi(r):
        _, t = _t(r)
        return -_smoothstep_slope(t) / half

    return CapProfile(r0=float(r0), phi=phi, dphi=dphi, d2phi=d2phi)
