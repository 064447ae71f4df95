"""Deterministic 2D kinematic field simulator.

Robots track commanded body velocities through a first-order lag (real
dynamics live in the motor controllers, so tracking lag is the effect worth
modeling), the ball rolls with constant deceleration, and robot-ball contact
is a perfectly inelastic push along the contact normal. Everything is
deterministic given the seed and the command trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .geometry import (
    BALL_RADIUS,
    ROBOT_RADIUS,
    FieldModel,
    Pose2,
    Vec2,
    normalize_angle,
)
from .kinematics import BodyVelocity, clamp_command

BLUE = "blue"
YELLOW = "yellow"

RobotKey = tuple[str, int]


class UnknownRobot(KeyError):
    pass


@dataclass(frozen=True)
class SimConfig:
    field: FieldModel = dc_field(default_factory=FieldModel.division_b)
    n_robots_per_team: int = 3
    vision_rate: float = 60.0
    physics_dt: float = 1.0 / 240.0
    ball_deceleration: float = 0.3
    rng_seed: int = 0
    vision_noise_sigma: float = 0.0
    command_timeout: float = 0.2
    command_lag_tau: float = 0.03
    v_max: float = 2.0
    omega_max: float = 6.0

    def __post_init__(self) -> None:
        if self.vision_rate <= 0 or self.physics_dt <= 0:
            raise ValueError("rates must be positive")
        steps = (1.0 / self.vision_rate) / self.physics_dt
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 1:
            raise ValueError("physics_dt must divide the vision period")

    @property
    def steps_per_frame(self) -> int:
        return round((1.0 / self.vision_rate) / self.physics_dt)


@dataclass
class RobotState:
    pose: Pose2
    commanded: BodyVelocity = dc_field(default_factory=BodyVelocity.zero)
    tracked: BodyVelocity = dc_field(default_factory=BodyVelocity.zero)
    last_command_time: float = -math.inf


@dataclass
class BallState:
    p: Vec2
    v: Vec2 = dc_field(default_factory=lambda: Vec2(0.0, 0.0))


@dataclass(frozen=True)
class VisionBall:
    p: Vec2
    confidence: float = 1.0


@dataclass(frozen=True)
class VisionRobot:
    id: int
    pose: Pose2


@dataclass(frozen=True)
class VisionFrame:
    frame_number: int
    t_capture: float
    balls: tuple[VisionBall, ...]
    robots_yellow: tuple[VisionRobot, ...]
    robots_blue: tuple[VisionRobot, ...]


def default_lineup(cfg: SimConfig) -> dict[RobotKey, Pose2]:
    """Deterministic kickoff-style placement, both teams facing the ball."""
    poses: dict[RobotKey, Pose2] = {}
    spacing = min(1.0, cfg.field.width / (cfg.n_robots_per_team + 1))
    for i in range(cfg.n_robots_per_team):
        y = (i - (cfg.n_robots_per_team - 1) / 2.0) * spacing
        x = cfg.field.half_length * 0.5
        poses[(BLUE, i)] = Pose2(Vec2(-x, y), 0.0)
        poses[(YELLOW, i)] = Pose2(Vec2(x, y), math.pi)
    return poses


class Simulator:
    """Owns the world state; a single activity advances it with step()."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.tick = 0
        self.time = 0.0
        self.frame_number = 0
        self.robots: dict[RobotKey, RobotState] = {
            key: RobotState(pose=pose) for key, pose in default_lineup(cfg).items()
        }
        self.ball = BallState(p=Vec2(0.0, 0.0))
        self._rng = np.random.default_rng(cfg.rng_seed)

    # -- scenario setup -----------------------------------------------------

    def place_robot(self, key: RobotKey, pose: Pose2) -> None:
        self._robot(key).pose = pose

    def place_ball(self, p: Vec2, v: Vec2 = Vec2(0.0, 0.0)) -> None:
        self.ball = BallState(p=p, v=v)

    def _robot(self, key: RobotKey) -> RobotState:
        try:
            return self.robots[key]
        except KeyError:
            raise UnknownRobot(key) from None

    # -- commands -----------------------------------------------------------

    def apply_command(self, key: RobotKey, v: BodyVelocity) -> None:
        r = self._robot(key)
        r.commanded = clamp_command(v, self.cfg.v_max, self.cfg.omega_max)
        r.last_command_time = self.time

    # -- physics ------------------------------------------------------------

    def step(self, dt: float | None = None) -> None:
        cfg = self.cfg
        dt = cfg.physics_dt if dt is None else dt
        if abs(dt - cfg.physics_dt) > 1e-12:
            raise ValueError("step must use the configured physics_dt")
        lag = math.exp(-dt / cfg.command_lag_tau)
        for key in sorted(self.robots):
            r = self.robots[key]
            if self.time - r.last_command_time > cfg.command_timeout:
                r.commanded = BodyVelocity.zero()
            r.tracked = BodyVelocity(
                r.commanded.vx + (r.tracked.vx - r.commanded.vx) * lag,
                r.commanded.vy + (r.tracked.vy - r.commanded.vy) * lag,
                r.commanded.omega + (r.tracked.omega - r.commanded.omega) * lag,
            )
            heading = r.pose.heading
            world_v = Vec2(r.tracked.vx, r.tracked.vy).rotated(heading)
            pos = r.pose.position + world_v * dt
            hx, hy = cfg.field.half_length, cfg.field.half_width
            pos = Vec2(min(hx, max(-hx, pos.x)), min(hy, max(-hy, pos.y)))
            r.pose = Pose2(pos, normalize_angle(heading + r.tracked.omega * dt))
        self._step_ball(dt)
        self.tick += 1
        self.time += dt

    def _step_ball(self, dt: float) -> None:
        b = self.ball
        speed = b.v.norm()
        if speed > 0.0:
            # trapezoidal position update: exact for constant deceleration
            new_speed = max(0.0, speed - self.cfg.ball_deceleration * dt)
            b.p = b.p + b.v * (0.5 * (speed + new_speed) / speed * dt)
            b.v = b.v * (new_speed / speed)
        # push contact: ball takes the robot's normal velocity component
        for key in sorted(self.robots):
            r = self.robots[key]
            offset = b.p - r.pose.position
            dist = offset.norm()
            contact = ROBOT_RADIUS + BALL_RADIUS
            if dist >= contact:
                continue
            n = offset * (1.0 / dist) if dist > 1e-9 else Vec2(1.0, 0.0)
            robot_world_v = Vec2(r.tracked.vx, r.tracked.vy).rotated(r.pose.heading)
            rel_normal = b.v.dot(n) - robot_world_v.dot(n)
            if rel_normal < 0.0:
                b.v = b.v + n * (-rel_normal)
            b.p = r.pose.position + n * contact
        hx, hy = self.cfg.field.half_length, self.cfg.field.half_width
        px = min(hx, max(-hx, b.p.x))
        py = min(hy, max(-hy, b.p.y))
        vx, vy = b.v.x, b.v.y
        if px != b.p.x:
            vx = 0.0
        if py != b.p.y:
            vy = 0.0
        b.p, b.v = Vec2(px, py), Vec2(vx, vy)

    def step_frame(self) -> None:
        """Advance one full vision period of physics."""
        for _ in range(self.cfg.steps_per_frame):
            self.step()

    # -- vision -------------------------------------------------------------

    def emit_vision(self) -> VisionFrame:
        self.frame_number += 1
        noisy = self._noisy_point
        yellow = tuple(
            VisionRobot(id=rid, pose=Pose2(noisy(st.pose.position), st.pose.heading))
            for (team, rid), st in sorted(self.robots.items()) if team == YELLOW
        )
        blue = tuple(
            VisionRobot(id=rid, pose=Pose2(noisy(st.pose.position), st.pose.heading))
            for (team, rid), st in sorted(self.robots.items()) if team == BLUE
        )
        return VisionFrame(
            frame_number=self.frame_number,
            t_capture=self.time,
            balls=(VisionBall(p=noisy(self.ball.p)),),
            robots_yellow=yellow,
            robots_blue=blue,
        )

    def _noisy_point(self, p: Vec2) -> Vec2:
        sigma = self.cfg.vision_noise_sigma
        if sigma == 0.0:
            return p
        dx, dy = self._rng.normal(0.0, sigma, size=2)
        return Vec2(p.x + dx, p.y + dy)

    def summary(self) -> dict:
        return {
            "tick": self.tick,
            "time": self.time,
            "ball": {"x": self.ball.p.x, "y": self.ball.p.y,
                     "vx": self.ball.v.x, "vy": self.ball.v.y},
            "robots": {
                f"{team}:{rid}": {
                    "x": st.pose.position.x,
                    "y": st.pose.position.y,
                    "theta": st.pose.heading,
                }
                for (team, rid), st in sorted(self.robots.items())
            },
        }
