"""Fit a rolling ball's trajectory and decide whether it threatens the goal.

Run: python3 demos/predict_a_shot.py
Feeds noisy observations of a straight shot into the tracker, fits a
constant-velocity model, and queries the goalkeeper helpers.
"""

import numpy as np

from omnisoccer.balltrack import (
    BallObservation,
    BallTrack,
    GoalkeeperLine,
    fit,
    intersect_vertical_line,
    is_goal_bound,
    keeper_target,
)
from omnisoccer.geometry import FieldModel, Vec2

field = FieldModel.division_b()
line = GoalkeeperLine.for_field(field)
rng = np.random.default_rng(6)

true_p0, true_v = Vec2(-1.0, 0.8), Vec2(-1.8, -0.45)
track = BallTrack()
for i in range(6):
    t = i / 60.0
    noise = rng.normal(0.0, 0.002, 2)
    p = true_p0 + true_v * t
    track.push(BallObservation(t, Vec2(p.x + noise[0], p.y + noise[1])))

motion = fit(track)
print(f"fitted velocity  ({motion.v.x:+.3f}, {motion.v.y:+.3f}) m/s "
      f"(truth {true_v.x:+.3f}, {true_v.y:+.3f})")
print(f"rms residual     {motion.rms_residual:.4f} m")

crossing = intersect_vertical_line(motion, line)
print(f"crosses x={line.x_line:+.2f} at y={crossing.y:+.3f}, "
      f"t={crossing.t_hit:.2f} s")
print(f"goal bound?      {is_goal_bound(motion, line, 0.5 * field.goal_width)}")
target = keeper_target(motion, track.latest().p, line)
print(f"keeper target    ({target.x:+.3f}, {target.y:+.3f})")
