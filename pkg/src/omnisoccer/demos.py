"""Scripted end-to-end scenarios: simulator and controller in one process.

Each scenario wires a Simulator to a TeamController through the same frame /
command values that would otherwise cross the UDP sockets, runs a seeded
episode, and reports a metrics dict.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .balltrack import GoalkeeperLine
from .formation import FormationLibrary
from .geometry import BALL_RADIUS, ROBOT_RADIUS, Pose2, Vec2
from .planner import PlannerParams
from .sim import BLUE, YELLOW, SimConfig, Simulator
from .world import (
    Behaviour,
    ControllerParams,
    FOLLOW_BALL,
    GOALKEEPER,
    INTERCEPT_BALL,
    TeamController,
)

SCENARIOS = ("follow", "intercept", "goalkeeper", "formation")


def _load_default_formations() -> FormationLibrary:
    from importlib.resources import files

    from .formation import parse_formation_file

    text = files("omnisoccer.data").joinpath("default.formation").read_text()
    return parse_formation_file(text)


def _ball_gap(sim: Simulator, robot: tuple[str, int] = (BLUE, 0)) -> float:
    """Surface-to-surface distance between a robot and the ball."""
    center_dist = sim.robots[robot].pose.position.dist(sim.ball.p)
    return center_dist - ROBOT_RADIUS - BALL_RADIUS


class _Episode:
    """Shared run loop: vision -> ingest -> tick -> commands -> physics."""

    def __init__(self, sim: Simulator, controller: TeamController):
        self.sim = sim
        self.controller = controller
        self.min_clearance = math.inf
        self._hash = hashlib.sha256()

    def run_frame(self) -> None:
        frame = self.sim.emit_vision()
        self.controller.ingest_frame(frame)
        for cmd in self.controller.control_tick():
            self.sim.apply_command((BLUE, cmd.robot_id), cmd.v)
        self.sim.step_frame()
        self._observe()

    def _observe(self) -> None:
        robots = sorted(self.sim.robots.items())
        for i, (key_a, a) in enumerate(robots):
            self._hash.update(
                np.array([a.pose.position.x, a.pose.position.y, a.pose.heading]).tobytes()
            )
            for key_b, b in robots[i + 1:]:
                gap = a.pose.position.dist(b.pose.position) - 2 * ROBOT_RADIUS
                self.min_clearance = min(self.min_clearance, gap)
        ball = self.sim.ball
        self._hash.update(np.array([ball.p.x, ball.p.y, ball.v.x, ball.v.y]).tobytes())

    def trace_hash(self) -> str:
        return self._hash.hexdigest()


def run_follow(seed: int = 0, duration: float = 5.0) -> dict:
    """Robot 0 drives to a static ball 2 m away around a blocking robot."""
    cfg = SimConfig(rng_seed=seed, n_robots_per_team=2)
    sim = Simulator(cfg)
    sim.place_ball(Vec2(0.0, 0.0))
    sim.place_robot((BLUE, 0), Pose2(Vec2(-2.0, 0.0), 0.0))
    sim.place_robot((BLUE, 1), Pose2(Vec2(-3.5, -2.0), 0.0))
    sim.place_robot((YELLOW, 0), Pose2(Vec2(-1.0, 0.0), math.pi))
    sim.place_robot((YELLOW, 1), Pose2(Vec2(3.5, 2.0), math.pi))

    controller = TeamController(cfg.field,
                                planner_params=PlannerParams(rng_seed=seed))
    controller.set_behaviour(0, Behaviour(FOLLOW_BALL))

    ep = _Episode(sim, controller)
    time_to_ball = None
    frames = int(duration * cfg.vision_rate)
    for _ in range(frames):
        ep.run_frame()
        dist = _ball_gap(sim)
        if time_to_ball is None and dist < 0.1:
            time_to_ball = sim.time
            break
    return {
        "scenario": "follow",
        "seed": seed,
        "time_to_ball": time_to_ball,
        "min_clearance": ep.min_clearance,
        "trace_hash": ep.trace_hash(),
    }


def run_intercept(seed: int = 0, duration: float = 5.0) -> dict:
    """Robot 0 cuts off a rolling ball using the fitted trajectory."""
    cfg = SimConfig(rng_seed=seed, n_robots_per_team=1)
    sim = Simulator(cfg)
    sim.place_ball(Vec2(-1.0, -1.0), Vec2(1.0, 0.6))
    sim.place_robot((BLUE, 0), Pose2(Vec2(1.5, -2.0), 0.0))
    sim.place_robot((YELLOW, 0), Pose2(Vec2(4.0, 2.5), math.pi))

    controller = TeamController(cfg.field,
                                planner_params=PlannerParams(rng_seed=seed))
    controller.set_behaviour(0, Behaviour(INTERCEPT_BALL))

    ep = _Episode(sim, controller)
    time_to_intercept = None
    for _ in range(int(duration * cfg.vision_rate)):
        ep.run_frame()
        if time_to_intercept is None and _ball_gap(sim) < 0.15:
            time_to_intercept = sim.time
            break
    return {
        "scenario": "intercept",
        "seed": seed,
        "time_to_intercept": time_to_intercept,
        "min_clearance": ep.min_clearance,
        "trace_hash": ep.trace_hash(),
    }


def run_goalkeeper(seed: int = 0, duration: float = 4.0) -> dict:
    """A seeded straight shot at the goal mouth; the keeper tries to block it."""
    cfg = SimConfig(rng_seed=seed, n_robots_per_team=1)
    sim = Simulator(cfg)
    field = cfg.field
    line = GoalkeeperLine.for_field(field)
    sim.place_robot((BLUE, 0), Pose2(Vec2(line.x_line, 0.0), 0.0))
    sim.place_robot((YELLOW, 0), Pose2(Vec2(4.0, 2.5), math.pi))

    rng = np.random.default_rng(seed)
    start = Vec2(-2.2, float(rng.uniform(-1.0, 1.0)))
    aim = Vec2(-field.half_length, float(rng.uniform(-0.45, 0.45)))
    speed = float(rng.uniform(1.5, 2.0))
    direction = aim - start
    sim.place_ball(start, direction * (speed / direction.norm()))

    controller = TeamController(field, planner_params=PlannerParams(rng_seed=seed),
                                keeper_line=line)
    controller.set_behaviour(0, Behaviour(GOALKEEPER))

    ep = _Episode(sim, controller)
    goal = False
    for _ in range(int(duration * cfg.vision_rate)):
        ep.run_frame()
        b = sim.ball
        if (b.p.x <= -field.half_length + BALL_RADIUS + 1e-9
                and abs(b.p.y) <= 0.5 * field.goal_width):
            goal = True
            break
        if b.v.norm() < 1e-3:
            break
    return {
        "scenario": "goalkeeper",
        "seed": seed,
        "shot": {"x": start.x, "y": start.y, "speed": speed, "aim_y": aim.y},
        "save": not goal,
        "min_clearance": ep.min_clearance,
        "trace_hash": ep.trace_hash(),
    }


def run_formation(seed: int = 0, duration: float = 6.0) -> dict:
    """Five robots settle into the shipped default formation."""
    lib = _load_default_formations()
    formation = lib.active_formation()
    cfg = SimConfig(rng_seed=seed, n_robots_per_team=5)
    sim = Simulator(cfg)
    sim.place_ball(Vec2(1.0, 0.5))

    controller = TeamController(cfg.field,
                                planner_params=PlannerParams(rng_seed=seed))
    controller.assign_formation(formation, list(range(5)))

    ep = _Episode(sim, controller)
    for _ in range(int(duration * cfg.vision_rate)):
        ep.run_frame()

    from .formation import home_position

    errors = []
    for rid, role in controller.roles.items():
        home = home_position(role, sim.ball.p, cfg.field,
                             motion=controller.wm.ball_motion,
                             keeper_line=controller.keeper_line)
        errors.append(sim.robots[(BLUE, rid)].pose.position.dist(home))
    return {
        "scenario": "formation",
        "seed": seed,
        "max_home_error": max(errors),
        "min_clearance": ep.min_clearance,
        "trace_hash": ep.trace_hash(),
    }


def run_demo(name: str, seed: int = 0) -> dict:
    if name == "follow":
        return run_follow(seed)
    if name == "intercept":
        return run_intercept(seed)
    if name == "goalkeeper":
        return run_goalkeeper(seed)
    if name == "formation":
        return run_formation(seed)
    raise ValueError(f"unknown scenario {name!r}")
