"""Ball trajectory estimation: windowed linear regression and goal geometry.

The last few ball observations are fitted with independent ordinary
least squares of x and y against time, giving a constant-velocity motion
model. Downstream helpers intersect that model with the goalkeeper's line
and classify goal-bound shots.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .geometry import FieldModel, Vec2

DEFAULT_WINDOW = 6
DEFAULT_MIN_SPEED = 0.1
VX_EPSILON = 1e-9


class DegenerateTimestamps(ValueError):
    """All observations in the window share one timestamp; no slope exists."""


@dataclass(frozen=True)
class BallObservation:
    t: float
    p: Vec2


class BallTrack:
    """Bounded FIFO of the most recent ball observations.

    Observations must arrive with strictly increasing timestamps; stale or
    duplicate timestamps are dropped.
    """

    def __init__(self, capacity: int = DEFAULT_WINDOW):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._window: deque[BallObservation] = deque(maxlen=capacity)

    def push(self, obs: BallObservation) -> bool:
        """Append an observation; returns False when dropped as stale."""
        if self._window and obs.t <= self._window[-1].t:
            return False
        self._window.append(obs)
        return True

    def observations(self) -> list[BallObservation]:
        return list(self._window)

    def latest(self) -> BallObservation | None:
        return self._window[-1] if self._window else None

    def clear(self) -> None:
        self._window.clear()

    def __len__(self) -> int:
        return len(self._window)


@dataclass(frozen=True)
class BallMotion:
    """Fitted constant-velocity model: position p0 at reference time t0."""

    p0: Vec2
    v: Vec2
    t0: float
    speed: float
    rms_residual: float

    def predict(self, t: float) -> Vec2:
        return self.p0 + self.v * (t - self.t0)


@dataclass(frozen=True)
class GoalkeeperLine:
    """Vertical segment directly in front of the own goal."""

    x_line: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if self.y_min >= self.y_max:
            raise ValueError("y_min must be below y_max")

    @classmethod
    def for_field(cls, field: FieldModel, offset: float = 0.1) -> "GoalkeeperLine":
        half_goal = 0.5 * field.goal_width
        return cls(x_line=-field.half_length + offset, y_min=-half_goal, y_max=half_goal)

    def clamp_y(self, y: float) -> float:
        return min(self.y_max, max(self.y_min, y))


@dataclass(frozen=True)
class LineCrossing:
    y: float
    t_hit: float
    in_segment: bool


def fit(track: BallTrack) -> BallMotion | None:
    """OLS fit of the track window; None with fewer than two observations."""
    obs = track.observations()
    if len(obs) < 2:
        return None
    t = np.array([o.t for o in obs])
    if np.ptp(t) == 0.0:
        raise DegenerateTimestamps("all observations share one timestamp")
    xy = np.array([[o.p.x, o.p.y] for o in obs])
    t0 = t[-1]
    tc = t - t.mean()
    denom = float(tc @ tc)
    slopes = tc @ (xy - xy.mean(axis=0)) / denom
    means = xy.mean(axis=0)
    fitted_at = means + np.outer(t - t.mean(), slopes)
    residual = xy - fitted_at
    rms = math.sqrt(float((residual ** 2).sum(axis=1).mean()))
    p0_arr = means + (t0 - t.mean()) * slopes
    v = Vec2(float(slopes[0]), float(slopes[1]))
    return BallMotion(p0=Vec2(float(p0_arr[0]), float(p0_arr[1])), v=v,
                      t0=float(t0), speed=v.norm(), rms_residual=rms)


def intersect_vertical_line(m: BallMotion, line: GoalkeeperLine) -> LineCrossing | None:
    """Forward-time crossing of the motion with the line's vertical abscissa.

    None when the ball moves parallel to the line or away from it; the
    crossing is reported even outside [y_min, y_max], flagged via in_segment.
    """
    if abs(m.v.x) < VX_EPSILON:
        return None
    t_hit = m.t0 + (line.x_line - m.p0.x) / m.v.x
    if t_hit < m.t0:
        return None
    y = m.p0.y + m.v.y * (t_hit - m.t0)
    return LineCrossing(y=y, t_hit=t_hit, in_segment=line.y_min <= y <= line.y_max)


def is_goal_bound(m: BallMotion, line: GoalkeeperLine, goal_half_width: float,
                  min_speed: float = DEFAULT_MIN_SPEED) -> bool:
    """True when a sufficiently fast ball will cross the line inside the goal mouth."""
    if m.speed < min_speed:
        return False
    crossing = intersect_vertical_line(m, line)
    return crossing is not None and abs(crossing.y) <= goal_half_width


def keeper_target(m: BallMotion | None, ball_now: Vec2, line: GoalkeeperLine) -> Vec2:
    """Point on the goalkeeper line to block the predicted crossing.

    Falls back to shadowing the ball's current y when no valid approaching
    intersection exists.
    """
    crossing = intersect_vertical_line(m, line) if m is not None else None
    y = crossing.y if crossing is not None else ball_now.y
    return Vec2(line.x_line, line.clamp_y(y))
