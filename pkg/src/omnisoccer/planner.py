"""Probabilistic-roadmap path planning with Dijkstra search.

Milestones are sampled uniformly inside the field, kept if they clear every
inflated obstacle, linked to their k nearest neighbours when the connecting
segment is collision free, and the roadmap is searched with Dijkstra.

Plan maintenance applies three rules in order: go straight at the target if
the direct segment is clear (dropping any active plan), otherwise keep
following an active plan whose next waypoint is still visible, otherwise
build a fresh plan.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field

import numpy as np

from .geometry import Disc, FieldModel, Vec2, segment_disc_distance


class FreeSpaceExhausted(RuntimeError):
    """Milestone sampling could not find enough collision-free points."""


class StartOrGoalBlocked(ValueError):
    """Start or goal position violates the clearance constraint."""


@dataclass(frozen=True)
class PlannerParams:
    n_samples: int = 10
    k_neighbors: int = 5
    clearance: float = 0.2  # 2 * robot_radius + safety margin
    max_resample_attempts: int = 100
    rng_seed: int = 0
    waypoint_capture_radius: float = 0.05

    def __post_init__(self) -> None:
        if self.n_samples < 1 or self.k_neighbors < 1 or self.clearance <= 0:
            raise ValueError("invalid planner parameters")


@dataclass
class Roadmap:
    nodes: list[Vec2]
    # adjacency: node index -> list of (neighbour index, euclidean weight)
    edges: dict[int, list[tuple[int, float]]]


@dataclass(frozen=True)
class Plan:
    waypoints: tuple[Vec2, ...]
    created_at: float
    target: Vec2

    def __post_init__(self) -> None:
        if not self.waypoints:
            raise ValueError("plan needs at least one waypoint")


@dataclass(frozen=True)
class PlanAction:
    """Outcome of plan maintenance; exactly one variant."""

    kind: str  # "go_direct" | "follow" | "replan" | "unreachable"
    next_waypoint: Vec2 | None = None
    new_plan: Plan | None = None

    @classmethod
    def go_direct(cls) -> "PlanAction":
        return cls("go_direct")

    @classmethod
    def follow(cls, waypoint: Vec2) -> "PlanAction":
        return cls("follow", next_waypoint=waypoint)

    @classmethod
    def replan(cls, plan: Plan) -> "PlanAction":
        return cls("replan", new_plan=plan)

    @classmethod
    def unreachable(cls) -> "PlanAction":
        return cls("unreachable")


def _obstacle_arrays(obstacles: list[Disc]) -> tuple[np.ndarray, np.ndarray]:
    centers = np.array([[d.center.x, d.center.y] for d in obstacles]).reshape(-1, 2)
    radii = np.array([d.radius for d in obstacles])
    return centers, radii


def _segments_min_clearance(a: np.ndarray, b: np.ndarray,
                            centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Min over obstacles of (segment-to-centre distance - radius), per segment.

    a, b: (S, 2) segment endpoints; centers: (N, 2); radii: (N,). Returns (S,)
    of +inf when there are no obstacles.
    """
    s = a.shape[0]
    if centers.shape[0] == 0:
        return np.full(s, np.inf)
    ab = b - a                                        # (S, 2)
    ab_len2 = np.einsum("ij,ij->i", ab, ab)           # (S,)
    ac = centers[None, :, :] - a[:, None, :]          # (S, N, 2)
    t = np.einsum("snj,sj->sn", ac, ab)               # (S, N)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(ab_len2[:, None] > 0.0, t / ab_len2[:, None], 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a[:, None, :] + t[..., None] * ab[:, None, :]
    dist = np.linalg.norm(closest - centers[None, :, :], axis=2) - radii[None, :]
    return dist.min(axis=1)


def point_clear(p: Vec2, obstacles: list[Disc], clearance: float) -> bool:
    """True iff p keeps at least `clearance` from every obstacle boundary."""
    return all(p.dist(d.center) >= d.radius + clearance for d in obstacles)


def segment_clear(a: Vec2, b: Vec2, obstacles: list[Disc], clearance: float) -> bool:
    """True iff segment [a, b] clears every obstacle inflated by `clearance`."""
    return all(
        segment_disc_distance(a, b, d.inflated(clearance)) > 0.0 for d in obstacles
    )


def sample_milestones(params: PlannerParams, field: FieldModel,
                      obstacles: list[Disc],
                      rng: np.random.Generator | None = None) -> list[Vec2]:
    """Draw up to n_samples uniform collision-free points inside the field.

    Each slot is redrawn up to max_resample_attempts times; deterministic for
    a fixed rng_seed when no generator is passed in.
    """
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    xlim = field.half_length - field.boundary_margin
    ylim = field.half_width - field.boundary_margin
    milestones: list[Vec2] = []
    for _ in range(params.n_samples):
        for _ in range(params.max_resample_attempts):
            p = Vec2(rng.uniform(-xlim, xlim), rng.uniform(-ylim, ylim))
            if point_clear(p, obstacles, params.clearance):
                milestones.append(p)
                break
        else:
            raise FreeSpaceExhausted(
                f"no free sample after {params.max_resample_attempts} attempts"
            )
    return milestones


def build_roadmap(start: Vec2, goal: Vec2, milestones: list[Vec2],
                  obstacles: list[Disc], params: PlannerParams) -> Roadmap:
    """Connect {start, goal} + milestones via collision-free k-NN links."""
    for name, p in (("start", start), ("goal", goal)):
        if not point_clear(p, obstacles, params.clearance):
            raise StartOrGoalBlocked(f"{name} position violates clearance")
    nodes = [start, goal, *milestones]
    n = len(nodes)
    pts = np.array([[p.x, p.y] for p in nodes])
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    np.fill_diagonal(dist, np.inf)

    # Each node proposes links to its k nearest neighbours; a proposed link
    # survives only if the connecting segment is clear. The union of the
    # surviving links makes the graph undirected.
    k = min(params.k_neighbors, n - 1)
    candidates: list[tuple[int, int]] = []
    for i in range(n):
        for j in np.argsort(dist[i], kind="stable")[:k]:
            pair = (i, int(j)) if i < j else (int(j), i)
            candidates.append(pair)
    candidates = sorted(set(candidates))

    centers, radii = _obstacle_arrays(obstacles)
    if candidates:
        a = pts[[c[0] for c in candidates]]
        b = pts[[c[1] for c in candidates]]
        clear = _segments_min_clearance(a, b, centers, radii + params.clearance) > 0.0
    else:
        clear = np.array([], dtype=bool)

    edges: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
    for (i, j), ok in zip(candidates, clear):
        if ok:
            w = float(dist[i, j])
            edges[i].append((j, w))
            edges[j].append((i, w))
    for adj in edges.values():
        adj.sort()
    return Roadmap(nodes=nodes, edges=edges)


def dijkstra(r: Roadmap, start_index: int, goal_index: int) -> list[int] | None:
    """Minimum-weight path between two roadmap nodes.

    Deterministic tie-breaking: fewer hops first, then the lexicographically
    smallest index sequence. Returns None when the goal is unreachable.
    """
    n = len(r.nodes)
    if not (0 <= start_index < n and 0 <= goal_index < n):
        raise IndexError("node index out of range")
    heap: list[tuple[float, int, tuple[int, ...]]] = [(0.0, 0, (start_index,))]
    settled: set[int] = set()
    while heap:
        cost, hops, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == goal_index:
            return list(path)
        for nbr, w in r.edges.get(node, ()):
            if nbr not in settled:
                heapq.heappush(heap, (cost + w, hops + 1, path + (nbr,)))
    return None


def plan(start: Vec2, target: Vec2, obstacles: list[Disc], field: FieldModel,
         params: PlannerParams, now: float = 0.0,
         rng: np.random.Generator | None = None) -> Plan | None:
    """One-shot PRM plan: sample, build the roadmap, search.

    Returns waypoints excluding the start and ending at the target, or None
    when this sample set yields no path.
    """
    milestones = sample_milestones(params, field, obstacles, rng=rng)
    roadmap = build_roadmap(start, target, milestones, obstacles, params)
    path = dijkstra(roadmap, 0, 1)
    if path is None:
        return None
    waypoints = tuple(roadmap.nodes[i] for i in path[1:])
    return Plan(waypoints=waypoints, created_at=now, target=target)


def next_unreached_waypoint(p: Plan, current: Vec2, capture_radius: float) -> Vec2 | None:
    """First waypoint farther than capture_radius from the current position."""
    for wp in p.waypoints:
        if current.dist(wp) > capture_radius:
            return wp
    return None


def maintain_plan(current: Vec2, target: Vec2, active: Plan | None,
                  obstacles: list[Disc], field: FieldModel,
                  params: PlannerParams, now: float = 0.0,
                  rng: np.random.Generator | None = None) -> PlanAction:
    """Three-rule plan maintenance.

    (1) direct segment clear -> go straight, drop any plan; (2) active plan
    with a still-visible next waypoint -> keep following it; (3) otherwise
    replan from scratch, reporting unreachable when that fails.
    """
    if segment_clear(current, target, obstacles, params.clearance):
        return PlanAction.go_direct()
    if active is not None:
        nxt = next_unreached_waypoint(active, current, params.waypoint_capture_radius)
        if nxt is not None and segment_clear(current, nxt, obstacles, params.clearance):
            return PlanAction.follow(nxt)
    try:
        fresh = plan(current, target, obstacles, field, params, now=now, rng=rng)
    except (FreeSpaceExhausted, StartOrGoalBlocked):
        fresh = None
    if fresh is None:
        return PlanAction.unreachable()
    return PlanAction.replan(fresh)
