"""Plan a path around a wall of obstacles and render it to SVG.

Run: python3 demos/plan_around_a_wall.py
Writes wall_plan.svg next to this script.
"""

from pathlib import Path

import numpy as np

from omnisoccer.geometry import Disc, FieldModel, Vec2
from omnisoccer.planner import PlannerParams, build_roadmap, dijkstra, plan, sample_milestones
from omnisoccer.svg import render_plan_svg

field = FieldModel.division_b()
wall = [Disc(Vec2(0.0, y), 0.2) for y in np.linspace(-1.5, 1.5, 11)]
start, target = Vec2(-2.5, 0.0), Vec2(2.5, 0.0)
params = PlannerParams(n_samples=20, rng_seed=4)

result = plan(start, target, wall, field, params)
print(f"planned {len(result.waypoints)} waypoints:")
for wp in result.waypoints:
    print(f"  ({wp.x:+.3f}, {wp.y:+.3f})")

# re-run the pipeline piecewise to also get the roadmap for drawing
milestones = sample_milestones(params, field, wall)
roadmap = build_roadmap(start, target, milestones, wall, params)
path = dijkstra(roadmap, 0, 1)
out = Path(__file__).with_name("wall_plan.svg")
out.write_text(render_plan_svg(field, wall, roadmap, path))
print(f"wrote {out}")
