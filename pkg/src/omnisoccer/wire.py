"""JSON wire formats shared by the simulator, team server, and web console.

All schemas carry a top-level "v": 1 version field; decoders ignore unknown
fields so either side can extend its messages without breaking the other.
"""

from __future__ import annotations

import json
from typing import Any

from .geometry import Pose2, Vec2
from .kinematics import BodyVelocity
from .sim import VisionBall, VisionFrame, VisionRobot

SCHEMA_VERSION = 1


class WireError(ValueError):
    pass


def _check_version(obj: Any) -> dict:
    if not isinstance(obj, dict):
        raise WireError("expected a JSON object")
    if obj.get("v") != SCHEMA_VERSION:
        raise WireError(f"unsupported schema version {obj.get('v')!r}")
    return obj


def encode_vision_frame(f: VisionFrame) -> bytes:
    ball = f.balls[0].p if f.balls else None
    payload = {
        "v": SCHEMA_VERSION,
        "frame": f.frame_number,
        "t": f.t_capture,
        "ball": {"x": ball.x, "y": ball.y} if ball is not None else None,
        "yellow": [
            {"id": r.id, "x": r.pose.position.x, "y": r.pose.position.y,
             "theta": r.pose.heading}
            for r in f.robots_yellow
        ],
        "blue": [
            {"id": r.id, "x": r.pose.position.x, "y": r.pose.position.y,
             "theta": r.pose.heading}
            for r in f.robots_blue
        ],
    }
    return json.dumps(payload).encode()


def decode_vision_frame(data: bytes) -> VisionFrame:
    obj = _check_version(json.loads(data))
    try:
        balls = ()
        if obj.get("ball") is not None:
            balls = (VisionBall(p=Vec2(obj["ball"]["x"], obj["ball"]["y"])),)
        robots = {}
        for team in ("yellow", "blue"):
            robots[team] = tuple(
                VisionRobot(id=int(r["id"]),
                            pose=Pose2(Vec2(r["x"], r["y"]), r["theta"]))
                for r in obj.get(team, [])
            )
        return VisionFrame(
            frame_number=int(obj["frame"]),
            t_capture=float(obj["t"]),
            balls=balls,
            robots_yellow=robots["yellow"],
            robots_blue=robots["blue"],
        )
    except (KeyError, TypeError) as exc:
        raise WireError(f"malformed vision frame: {exc}") from exc


def encode_robot_command(robot_id: int, v: BodyVelocity, seq: int, t: float) -> bytes:
    return json.dumps({
        "v": SCHEMA_VERSION,
        "id": robot_id,
        "vx": v.vx,
        "vy": v.vy,
        "omega": v.omega,
        "seq": seq,
        "t": t,
    }).encode()


def decode_robot_command(data: bytes) -> tuple[int, BodyVelocity, int, float]:
    obj = _check_version(json.loads(data))
    try:
        return (
            int(obj["id"]),
            BodyVelocity(float(obj["vx"]), float(obj["vy"]), float(obj["omega"])),
            int(obj["seq"]),
            float(obj["t"]),
        )
    except (KeyError, TypeError) as exc:
        raise WireError(f"malformed robot command: {exc}") from exc


def decode_console_message(data: str | bytes) -> dict:
    """Validate a console -> server message (teleop / behaviour / formation)."""
    obj = _check_version(json.loads(data))
    kind = obj.get("type")
    if kind == "teleop":
        required = ("id", "vx", "vy", "omega")
    elif kind == "behaviour":
        required = ("id", "name")
    elif kind == "formation":
        required = ("name",)
    else:
        raise WireError(f"unknown console message type {kind!r}")
    for key in required:
        if key not in obj:
            raise WireError(f"{kind} message missing field {key!r}")
    return obj
