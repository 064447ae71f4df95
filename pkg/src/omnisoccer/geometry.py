"""Planar geometry primitives shared by the whole stack.

Conventions: origin at field centre, +x toward the opponent goal (own goal
at x = -length/2), lengths in meters, angles in radians, time in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TAU = 2.0 * math.pi

# Robot footprint radius (SSL-typical) and a golf-ball sized game ball.
ROBOT_RADIUS = 0.09
BALL_RADIUS = 0.0215


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite value: {v!r}")


@dataclass(frozen=True)
class Vec2:
    """Immutable 2D vector / point. Components are always finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        _require_finite(self.x, self.y)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def rotated(self, angle: float) -> "Vec2":
        c, s = math.cos(angle), math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)


@dataclass(frozen=True)
class Pose2:
    """Position plus heading; heading is kept normalized to (-pi, pi]."""

    position: Vec2
    heading: float

    def __post_init__(self) -> None:
        _require_finite(self.heading)
        object.__setattr__(self, "heading", normalize_angle(self.heading))


@dataclass(frozen=True)
class Disc:
    """Circular obstacle footprint."""

    center: Vec2
    radius: float

    def __post_init__(self) -> None:
        _require_finite(self.radius)
        if self.radius <= 0.0:
            raise ValueError(f"disc radius must be positive, got {self.radius}")

    def inflated(self, margin: float) -> "Disc":
        return Disc(self.center, self.radius + margin)


@dataclass(frozen=True)
class FieldModel:
    """Rectangular field centred at the origin, +x is the attacking direction."""

    length: float
    width: float
    goal_width: float
    defense_line_x: float
    boundary_margin: float = 0.1

    def __post_init__(self) -> None:
        if self.length <= 0 or self.width <= 0:
            raise ValueError("field dimensions must be positive")
        if not (0.0 < self.goal_width < self.width):
            raise ValueError("goal_width must be in (0, width)")

    @classmethod
    def division_b(cls) -> "FieldModel":
        return cls(length=9.0, width=6.0, goal_width=1.0, defense_line_x=3.5)

    @classmethod
    def practice(cls) -> "FieldModel":
        return cls(length=5.0, width=2.75, goal_width=0.8, defense_line_x=2.0)

    @property
    def half_length(self) -> float:
        return 0.5 * self.length

    @property
    def half_width(self) -> float:
        return 0.5 * self.width

    def contains(self, p: Vec2, margin: float = 0.0) -> bool:
        return (abs(p.x) <= self.half_length - margin
                and abs(p.y) <= self.half_width - margin)


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    _require_finite(theta)
    wrapped = math.remainder(theta, TAU)
    if wrapped <= -math.pi:
        wrapped += TAU
    return wrapped


def segment_disc_distance(a: Vec2, b: Vec2, d: Disc) -> float:
    """Signed clearance between closed segment [a, b] and a disc.

    Returns the distance from the disc centre to the segment minus the disc
    radius; negative values mean the segment penetrates the disc. A degenerate
    segment (a == b) reduces to a point-to-disc distance.
    """
    ab = b - a
    ab_len2 = ab.dot(ab)
    if ab_len2 == 0.0:
        return a.dist(d.center) - d.radius
    t = (d.center - a).dot(ab) / ab_len2
    t = min(1.0, max(0.0, t))
    closest = a + ab * t
    return closest.dist(d.center) - d.radius


def clamp_to_field(p: Vec2, field: FieldModel, margin: float = 0.0) -> Vec2:
    """Clamp a point componentwise into the field shrunk by `margin`."""
    if margin < 0:
        raise ValueError("margin must be non-negative")
    hx = field.half_length - margin
    hy = field.half_width - margin
    if hx <= 0 or hy <= 0:
        raise ValueError("margin larger than the field")
    return Vec2(min(hx, max(-hx, p.x)), min(hy, max(-hy, p.y)))
