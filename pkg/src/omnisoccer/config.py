"""Stack configuration with layered overrides.

Precedence, lowest to highest: built-in defaults, config file, environment
variables (prefix OMNISOCCER_, dots replaced by underscores), command-line
flags. The config file is plain text, one `key = value` per line, `#`
comments allowed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field, fields, replace
from typing import Any, Mapping

from .geometry import FieldModel
from .kinematics import DriveGeometry
from .planner import PlannerParams
from .world import ControllerParams

ENV_PREFIX = "OMNISOCCER_"

FIELD_PRESETS = {
    "divB": FieldModel.division_b,
    "practice": FieldModel.practice,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class StackConfig:
    field_preset: str = "divB"
    field_length: float | None = None
    field_width: float | None = None
    field_goal_width: float | None = None

    wheel_radius: float = 0.0335
    wheel_offset: float = 0.08

    planner_samples: int = 10
    planner_k: int = 5
    planner_clearance: float = 0.2
    planner_seed: int = 0

    kp: float = 2.0
    kp_theta: float = 4.0
    deadband: float = 0.02
    v_max: float = 2.0
    omega_max: float = 6.0

    vision_port: int = 10020
    command_port: int = 10021
    ws_port: int = 8080
    host: str = "127.0.0.1"

    sim_seed: int = 0
    sim_noise: float = 0.0
    sim_robots: int = 3

    formation_file: str | None = None

    def field(self) -> FieldModel:
        if self.field_preset == "custom":
            if None in (self.field_length, self.field_width, self.field_goal_width):
                raise ConfigError("custom field preset needs length, width, goal width")
            return FieldModel(self.field_length, self.field_width, self.field_goal_width,
                              defense_line_x=self.field_length / 2 - 1.0)
        try:
            return FIELD_PRESETS[self.field_preset]()
        except KeyError:
            raise ConfigError(f"unknown field preset {self.field_preset!r}") from None

    def drive_geometry(self) -> DriveGeometry:
        return DriveGeometry(wheel_radius=self.wheel_radius, wheel_offset=self.wheel_offset)

    def planner_params(self) -> PlannerParams:
        return PlannerParams(n_samples=self.planner_samples, k_neighbors=self.planner_k,
                             clearance=self.planner_clearance, rng_seed=self.planner_seed)

    def controller_params(self) -> ControllerParams:
        return ControllerParams(kp=self.kp, kp_theta=self.kp_theta,
                                deadband=self.deadband, v_max=self.v_max,
                                omega_max=self.omega_max)


# config-file / flag key -> dataclass field
KEY_MAP = {
    "field": "field_preset",
    "field.length": "field_length",
    "field.width": "field_width",
    "field.goal_width": "field_goal_width",
    "drive.wheel_radius": "wheel_radius",
    "drive.wheel_offset": "wheel_offset",
    "planner.samples": "planner_samples",
    "planner.k": "planner_k",
    "planner.clearance": "planner_clearance",
    "planner.seed": "planner_seed",
    "control.kp": "kp",
    "control.kp_theta": "kp_theta",
    "control.deadband": "deadband",
    "control.v_max": "v_max",
    "control.omega_max": "omega_max",
    "ports.vision": "vision_port",
    "ports.command": "command_port",
    "ports.ws": "ws_port",
    "host": "host",
    "sim.seed": "sim_seed",
    "sim.noise": "sim_noise",
    "sim.robots": "sim_robots",
    "formation.file": "formation_file",
}

_FIELD_TYPES = {f.name: f.type for f in fields(StackConfig)}


def _coerce(name: str, raw: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    ftype = _FIELD_TYPES[name]
    if "int" in ftype:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected integer, got {raw!r}") from None
    if "float" in ftype:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected number, got {raw!r}") from None
    return raw


def parse_config_file(path: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in KEY_MAP:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[KEY_MAP[key]] = value
    return values


def env_overrides(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    environ = os.environ if environ is None else environ
    values: dict[str, Any] = {}
    for dotted, name in KEY_MAP.items():
        env_key = ENV_PREFIX + dotted.replace(".", "_").upper()
        if env_key in environ:
            values[name] = environ[env_key]
    return values


def load_config(file_path: str | None = None,
                flag_overrides: Mapping[str, Any] | None = None,
                environ: Mapping[str, str] | None = None) -> StackConfig:
    """Merge defaults, file, environment, and flags, in that order."""
    merged: dict[str, Any] = {}
    if file_path is not None:
        merged.update(parse_config_file(file_path))
    merged.update(env_overrides(environ))
    if flag_overrides:
        merged.update({k: v for k, v in flag_overrides.items() if v is not None})
    coerced = {name: _coerce(name, raw) for name, raw in merged.items()}
    return replace(StackConfig(), **coerced)
