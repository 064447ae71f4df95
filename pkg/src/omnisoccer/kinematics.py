"""Body-velocity <-> wheel-speed conversion for the four-omniwheel drive.

Wheel i sits at angle phi_i from the robot's +x axis at distance
`wheel_offset` from the centre; its rolling direction is tangent to that
circle. A body velocity (vx, vy, omega) projects onto each rolling
direction, giving

    w_i = (-sin(phi_i) * vx + cos(phi_i) * vy + wheel_offset * omega) / wheel_radius

Positive wheel speeds drive counter-clockwise body rotation. The default
layout has the front pair 120 degrees apart and the rear pair 90 degrees
apart, wheel order front-left, front-right, rear-right, rear-left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import _require_finite

DEFAULT_WHEEL_ANGLES = (
    math.radians(60.0),    # front-left
    math.radians(-60.0),   # front-right
    math.radians(-135.0),  # rear-right
    math.radians(135.0),   # rear-left
)
DEFAULT_WHEEL_RADIUS = 0.0335  # 67 mm wheel diameter incl. subwheels
DEFAULT_WHEEL_OFFSET = 0.08


@dataclass(frozen=True)
class BodyVelocity:
    """Robot-frame velocity: forward, left, counter-clockwise spin."""

    vx: float
    vy: float
    omega: float

    def __post_init__(self) -> None:
        _require_finite(self.vx, self.vy, self.omega)

    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)

    @classmethod
    def zero(cls) -> "BodyVelocity":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class WheelSpeeds:
    """Four signed wheel angular velocities, rad/s, order FL, FR, RR, RL."""

    w: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.w) != 4:
            raise ValueError("exactly four wheel speeds expected")
        _require_finite(*self.w)


@dataclass(frozen=True)
class DriveGeometry:
    wheel_angles: tuple[float, float, float, float] = DEFAULT_WHEEL_ANGLES
    wheel_radius: float = DEFAULT_WHEEL_RADIUS
    wheel_offset: float = DEFAULT_WHEEL_OFFSET

    def __post_init__(self) -> None:
        if len(self.wheel_angles) != 4:
            raise ValueError("exactly four wheel angles expected")
        _require_finite(*self.wheel_angles)
        if self.wheel_radius <= 0 or self.wheel_offset <= 0:
            raise ValueError("wheel_radius and wheel_offset must be positive")


@lru_cache(maxsize=16)
def _wheel_matrices(g: DriveGeometry) -> tuple[np.ndarray, np.ndarray]:
    """4x3 inverse-kinematics matrix and its pseudoinverse."""
    m = np.array(
        [[-math.sin(phi), math.cos(phi), g.wheel_offset] for phi in g.wheel_angles]
    ) / g.wheel_radius
    return m, np.linalg.pinv(m)


def inverse_kinematics(v: BodyVelocity, g: DriveGeometry = DriveGeometry()) -> WheelSpeeds:
    """Map a body velocity to the four wheel angular velocities."""
    m, _ = _wheel_matrices(g)
    w = m @ (v.vx, v.vy, v.omega)
    return WheelSpeeds(tuple(w))


def forward_kinematics(w: WheelSpeeds, g: DriveGeometry = DriveGeometry()) -> BodyVelocity:
    """Least-squares body velocity for a set of wheel speeds.

    Uses the pseudoinverse of the 4x3 wheel matrix, so consistent wheel
    speeds round-trip exactly and inconsistent ones map to the closest
    realizable body velocity.
    """
    _, pinv = _wheel_matrices(g)
    vx, vy, omega = pinv @ w.w
    return BodyVelocity(vx, vy, omega)


def clamp_command(v: BodyVelocity, v_max: float, omega_max: float) -> BodyVelocity:
    """Limit a command: scale the translation to keep its norm within v_max
    (direction preserved), clamp omega symmetrically."""
    if v_max <= 0 or omega_max <= 0:
        raise ValueError("limits must be positive")
    speed = v.speed()
    scale = v_max / speed if speed > v_max else 1.0
    omega = min(omega_max, max(-omega_max, v.omega))
    return BodyVelocity(v.vx * scale, v.vy * scale, omega)
