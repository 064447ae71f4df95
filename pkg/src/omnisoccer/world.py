"""World model and per-robot behaviours for the team controller.

Vision frames update a single world model (stale frames are dropped), each
robot resolves its behaviour to a target point, plan maintenance decides
between going straight, following an active plan, or replanning, and a
saturated proportional controller turns the chosen waypoint into a body
velocity command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import planner as prm
from .balltrack import (
    BallMotion,
    BallObservation,
    BallTrack,
    DegenerateTimestamps,
    GoalkeeperLine,
    fit,
    is_goal_bound,
    keeper_target,
)
from .formation import Formation, Role, home_position
from .geometry import ROBOT_RADIUS, Disc, FieldModel, Pose2, Vec2, normalize_angle
from .kinematics import BodyVelocity, clamp_command
from .sim import VisionFrame


class StaleFrame(ValueError):
    pass


# behaviour kinds
IDLE = "idle"
FOLLOW_BALL = "follow"
INTERCEPT_BALL = "intercept"
GOALKEEPER = "goalkeeper"
HOLD_FORMATION = "formation"
TELEOP = "teleop"

BEHAVIOUR_KINDS = (IDLE, FOLLOW_BALL, INTERCEPT_BALL, GOALKEEPER, HOLD_FORMATION, TELEOP)


@dataclass(frozen=True)
class Behaviour:
    kind: str
    role: Role | None = None  # only for HOLD_FORMATION

    def __post_init__(self) -> None:
        if self.kind not in BEHAVIOUR_KINDS:
            raise ValueError(f"unknown behaviour {self.kind!r}")


@dataclass(frozen=True)
class RobotCommand:
    robot_id: int
    v: BodyVelocity
    stamp: float
    sequence: int


@dataclass
class RobotEstimate:
    pose: Pose2
    velocity: Vec2 = dc_field(default_factory=lambda: Vec2(0.0, 0.0))
    last_seen: float = 0.0


class WorldModel:
    """Single-writer model of the field built from the vision stream."""

    def __init__(self, window: int = 6):
        self.latest_frame: VisionFrame | None = None
        self.ball_track = BallTrack(capacity=window)
        self.ball_motion: BallMotion | None = None
        self.our_robots: dict[int, RobotEstimate] = {}
        self.their_robots: dict[int, RobotEstimate] = {}
        self.dropped_frames = 0

    @property
    def time(self) -> float:
        return self.latest_frame.t_capture if self.latest_frame else 0.0

    def ball_position(self) -> Vec2 | None:
        latest = self.ball_track.latest()
        return latest.p if latest else None

    def ingest_frame(self, f: VisionFrame) -> None:
        """Fold one frame into the model; raises StaleFrame on reordering."""
        if self.latest_frame is not None and f.frame_number <= self.latest_frame.frame_number:
            self.dropped_frames += 1
            raise StaleFrame(f"frame {f.frame_number} not newer than "
                             f"{self.latest_frame.frame_number}")
        self._update_robots(self.our_robots, f.robots_blue, f.t_capture)
        self._update_robots(self.their_robots, f.robots_yellow, f.t_capture)
        if f.balls:
            self.ball_track.push(BallObservation(t=f.t_capture, p=f.balls[0].p))
        try:
            self.ball_motion = fit(self.ball_track)
        except DegenerateTimestamps:
            self.ball_motion = None
        self.latest_frame = f

    @staticmethod
    def _update_robots(store: dict[int, RobotEstimate], seen, t: float) -> None:
        for r in seen:
            prev = store.get(r.id)
            if prev is not None and t > prev.last_seen:
                dt = t - prev.last_seen
                vel = (r.pose.position - prev.pose.position) * (1.0 / dt)
            else:
                vel = Vec2(0.0, 0.0)
            store[r.id] = RobotEstimate(pose=r.pose, velocity=vel, last_seen=t)

    def obstacles_for(self, robot_id: int) -> list[Disc]:
        """Every robot on the field except the acting one, as discs."""
        obstacles = [
            Disc(est.pose.position, ROBOT_RADIUS)
            for rid, est in sorted(self.our_robots.items())
            if rid != robot_id
        ]
        obstacles += [
            Disc(est.pose.position, ROBOT_RADIUS)
            for _, est in sorted(self.their_robots.items())
        ]
        return obstacles


def intercept_point(m: BallMotion, robot: Vec2, v_max: float, now: float) -> Vec2 | None:
    """Earliest point on the predicted ball ray the robot reaches before the ball.

    Assumes straight-line robot travel at v_max; None when the ball cannot be
    caught on its ray.
    """
    b0 = m.predict(now)
    u = m.v
    w = b0 - robot
    a = u.dot(u) - v_max * v_max
    b = 2.0 * w.dot(u)
    c = w.dot(w)
    s: float | None = None
    if abs(a) < 1e-12:
        if b < 0.0:
            s = -c / b
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots = sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
            for root in roots:
                if root >= 0.0 and a * root * root + b * root + c <= 1e-9:
                    s = root
                    break
    if s is None:
        return None
    return b0 + u * s


@dataclass(frozen=True)
class FormationContext:
    role: Role | None
    field: FieldModel
    keeper_line: GoalkeeperLine


def behaviour_target(b: Behaviour, robot_id: int, wm: WorldModel,
                     ctx: FormationContext, v_max: float = 2.0) -> Vec2 | None:
    """Resolve a behaviour to a target point; None means no positional goal."""
    if b.kind in (IDLE, TELEOP):
        return None
    ball = wm.ball_position()
    if ball is None:
        return None
    if b.kind == FOLLOW_BALL:
        return ball
    if b.kind == INTERCEPT_BALL:
        est = wm.our_robots.get(robot_id)
        if wm.ball_motion is not None and est is not None:
            pt = intercept_point(wm.ball_motion, est.pose.position, v_max, wm.time)
            if pt is not None:
                return pt
        return ball
    if b.kind == GOALKEEPER:
        return keeper_target(wm.ball_motion, ball, ctx.keeper_line)
    if b.kind == HOLD_FORMATION:
        role = b.role if b.role is not None else ctx.role
        if role is None:
            return None
        return home_position(role, ball, ctx.field,
                             motion=wm.ball_motion, keeper_line=ctx.keeper_line)
    return None


@dataclass(frozen=True)
class ControllerParams:
    kp: float = 2.0
    kp_theta: float = 4.0
    deadband: float = 0.02
    v_max: float = 2.0
    omega_max: float = 6.0
    face_ball_radius: float = 1.0
    waypoint_pass_speed: float = 0.5


class TeamController:
    """Per-tick decision making for the whole team (one team, blue)."""

    def __init__(self, field: FieldModel,
                 planner_params: prm.PlannerParams = prm.PlannerParams(),
                 controller_params: ControllerParams = ControllerParams(),
                 keeper_line: GoalkeeperLine | None = None):
        self.field = field
        self.planner_params = planner_params
        self.params = controller_params
        self.keeper_line = keeper_line or GoalkeeperLine.for_field(field)
        self.wm = WorldModel()
        self.behaviours: dict[int, Behaviour] = {}
        self.roles: dict[int, Role] = {}
        self.teleop: dict[int, BodyVelocity] = {}
        self.active_plans: dict[int, prm.Plan] = {}
        self._sequences: dict[int, int] = {}
        self.tick_index = 0

    def set_behaviour(self, robot_id: int, b: Behaviour) -> None:
        self.behaviours[robot_id] = b
        self.active_plans.pop(robot_id, None)

    def set_teleop(self, robot_id: int, v: BodyVelocity) -> None:
        self.teleop[robot_id] = v
        self.behaviours[robot_id] = Behaviour(TELEOP)

    def assign_formation(self, formation: Formation, robot_ids: list[int]) -> None:
        from .formation import assign_roles

        self.roles = assign_roles(formation, robot_ids)
        for rid, role in self.roles.items():
            kind = GOALKEEPER if role.is_goalkeeper else HOLD_FORMATION
            self.behaviours[rid] = Behaviour(kind, role=None if role.is_goalkeeper else role)

    def ingest_frame(self, f: VisionFrame) -> bool:
        try:
            self.wm.ingest_frame(f)
            return True
        except StaleFrame:
            return False

    def _next_seq(self, robot_id: int) -> int:
        seq = self._sequences.get(robot_id, 0) + 1
        self._sequences[robot_id] = seq
        return seq

    def control_tick(self, now: float | None = None) -> list[RobotCommand]:
        """One command per assigned robot; zero-velocity failsafe when unseen."""
        now = self.wm.time if now is None else now
        self.tick_index += 1
        commands: list[RobotCommand] = []
        for rid in sorted(self.behaviours):
            v = self._robot_velocity(rid, now)
            commands.append(RobotCommand(robot_id=rid, v=v, stamp=now,
                                         sequence=self._next_seq(rid)))
        return commands

    def _robot_velocity(self, rid: int, now: float) -> BodyVelocity:
        b = self.behaviours[rid]
        est = self.wm.our_robots.get(rid)
        if est is None:
            return BodyVelocity.zero()
        if b.kind == TELEOP:
            v = self.teleop.get(rid, BodyVelocity.zero())
            return clamp_command(v, self.params.v_max, self.params.omega_max)
        ctx = FormationContext(role=self.roles.get(rid), field=self.field,
                               keeper_line=self.keeper_line)
        target = behaviour_target(b, rid, self.wm, ctx, v_max=self.params.v_max)
        if target is None:
            return BodyVelocity.zero()
        obstacles = self.wm.obstacles_for(rid)
        rng = np.random.default_rng((self.planner_params.rng_seed, self.tick_index, rid))
        active = self._advance_plan(rid, est.pose.position)
        action = prm.maintain_plan(est.pose.position, target, active, obstacles,
                                   self.field, self.planner_params, now=now, rng=rng)
        if action.kind == "go_direct":
            self.active_plans.pop(rid, None)
            waypoint = target
        elif action.kind == "follow":
            waypoint = action.next_waypoint
        elif action.kind == "replan":
            self.active_plans[rid] = action.new_plan
            waypoint = prm.next_unreached_waypoint(
                action.new_plan, est.pose.position,
                self.planner_params.waypoint_capture_radius)
            if waypoint is None:
                waypoint = target
        else:
            self.active_plans.pop(rid, None)
            return self._escape_velocity(est.pose, obstacles)
        return self._steer(est.pose, waypoint, target)

    def _advance_plan(self, rid: int, pos: Vec2) -> prm.Plan | None:
        """Permanently drop captured waypoints so 'reached' cannot flicker."""
        active = self.active_plans.get(rid)
        if active is None:
            return None
        capture = self.planner_params.waypoint_capture_radius
        wps = list(active.waypoints)
        while len(wps) > 1 and pos.dist(wps[0]) <= capture:
            wps.pop(0)
        if len(wps) != len(active.waypoints):
            active = prm.Plan(waypoints=tuple(wps), created_at=active.created_at,
                              target=active.target)
            self.active_plans[rid] = active
        return active

    def _escape_velocity(self, pose: Pose2, obstacles: list[Disc]) -> BodyVelocity:
        """Back out of an inflated obstacle that swallowed our own position.

        Planning fails with the start inside an inflated disc; a gentle move
        away from the nearest obstacle restores a plannable state.
        """
        p = self.params
        pos = pose.position
        worst_gap = math.inf
        away = None
        for d in obstacles:
            gap = pos.dist(d.center) - d.radius - self.planner_params.clearance
            if gap < worst_gap:
                worst_gap = gap
                offset = pos - d.center
                away = offset * (1.0 / offset.norm()) if offset.norm() > 1e-9 else Vec2(1.0, 0.0)
        if away is None or worst_gap >= 0.0:
            return BodyVelocity.zero()
        world_v = away * p.waypoint_pass_speed
        body_v = world_v.rotated(-pose.heading)
        return clamp_command(BodyVelocity(body_v.x, body_v.y, 0.0),
                             p.v_max, p.omega_max)

    def _steer(self, pose: Pose2, waypoint: Vec2, target: Vec2) -> BodyVelocity:
        """Saturated P-control toward the waypoint, in the robot body frame."""
        p = self.params
        to_wp = waypoint - pose.position
        dist = to_wp.norm()
        # P-gain deceleration applies to the final target only; intermediate
        # waypoints are passed at speed
        at_final = waypoint.dist(target) <= p.deadband
        error_dist = dist if at_final else max(dist, pose.position.dist(target))
        if dist <= p.deadband:
            world_v = Vec2(0.0, 0.0)
        else:
            # cap near the current waypoint so tracking lag cannot cause an
            # orbit just outside the capture radius
            approach_cap = max(p.waypoint_pass_speed, p.kp * dist)
            speed = min(p.v_max, p.kp * error_dist, approach_cap)
            world_v = to_wp * (speed / dist)
        # face the ball near the target, the direction of travel otherwise
        ball = self.wm.ball_position()
        near_target = pose.position.dist(target) < p.face_ball_radius
        if near_target and ball is not None and pose.position.dist(ball) > 1e-6:
            desired_heading = (ball - pose.position).angle()
        elif world_v.norm() > 1e-6:
            desired_heading = world_v.angle()
        else:
            desired_heading = pose.heading
        heading_error = normalize_angle(desired_heading - pose.heading)
        body_v = world_v.rotated(-pose.heading)
        cmd = BodyVelocity(body_v.x, body_v.y, p.kp_theta * heading_error)
        return clamp_command(cmd, p.v_max, p.omega_max)

    def telemetry_snapshot(self) -> dict:
        """Server -> console world snapshot (schema v1)."""
        wm = self.wm
        ball = wm.ball_position()
        motion = wm.ball_motion
        goal_bound = False
        if motion is not None:
            goal_bound = is_goal_bound(motion, self.keeper_line,
                                       goal_half_width=0.5 * self.field.goal_width)
        return {
            "v": 1,
            "type": "snapshot",
            "t": wm.time,
            "frame": wm.latest_frame.frame_number if wm.latest_frame else 0,
            "ball": {"x": ball.x, "y": ball.y} if ball else None,
            "ball_motion": (
                {"x": motion.p0.x, "y": motion.p0.y, "vx": motion.v.x,
                 "vy": motion.v.y, "t0": motion.t0, "speed": motion.speed}
                if motion else None
            ),
            "goal_bound": goal_bound,
            "field": {"length": self.field.length, "width": self.field.width,
                      "goal_width": self.field.goal_width},
            "robots": [
                {"id": rid, "x": est.pose.position.x, "y": est.pose.position.y,
                 "theta": est.pose.heading,
                 "behaviour": self.behaviours.get(rid, Behaviour(IDLE)).kind}
                for rid, est in sorted(wm.our_robots.items())
            ],
            "opponents": [
                {"id": rid, "x": est.pose.position.x, "y": est.pose.position.y,
                 "theta": est.pose.heading}
                for rid, est in sorted(wm.their_robots.items())
            ],
            "plans": {
                str(rid): [{"x": wp.x, "y": wp.y} for wp in plan.waypoints]
                for rid, plan in sorted(self.active_plans.items())
            },
        }
