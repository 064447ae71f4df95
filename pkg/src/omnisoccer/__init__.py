"""Omnidirectional robot soccer control stack.

Library modules: geometry, kinematics, planner, balltrack, formation, sim,
world; network frontends in server; CLI in cli.
"""

from .geometry import Disc, FieldModel, Pose2, Vec2
from .kinematics import BodyVelocity, DriveGeometry, WheelSpeeds

__all__ = [
    "Disc",
    "FieldModel",
    "Pose2",
    "Vec2",
    "BodyVelocity",
    "DriveGeometry",
    "WheelSpeeds",
]

__version__ = "0.1.0"
