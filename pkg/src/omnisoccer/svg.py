"""SVG rendering of a roadmap and planned path over the field."""

from __future__ import annotations

from .geometry import Disc, FieldModel, Vec2
from .planner import Roadmap

SCALE = 80.0  # px per meter
PAD = 30.0


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Canvas:
    def __init__(self, field: FieldModel):
        self.field = field
        self.width = field.length * SCALE + 2 * PAD
        self.height = field.width * SCALE + 2 * PAD
        self.parts: list[str] = []

    def point(self, p: Vec2) -> tuple[float, float]:
        # +x right, +y up
        return (PAD + (p.x + self.field.half_length) * SCALE,
                PAD + (self.field.half_width - p.y) * SCALE)

    def line(self, a: Vec2, b: Vec2, stroke: str, width: float) -> None:
        (x1, y1), (x2, y2) = self.point(a), self.point(b)
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width}" />'
        )

    def circle(self, c: Vec2, radius_m: float, fill: str, stroke: str = "none") -> None:
        x, y = self.point(c)
        self.parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius_m * SCALE)}" '
            f'fill="{fill}" stroke="{stroke}" />'
        )

    def render(self) -> str:
        body = "\n  ".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(self.width)}" '
            f'height="{_fmt(self.height)}">\n  {body}\n</svg>\n'
        )


def render_plan_svg(field: FieldModel, obstacles: list[Disc], roadmap: Roadmap,
                    path: list[int] | None) -> str:
    """Field, obstacles, milestones, thin roadmap links, thick path."""
    cv = _Canvas(field)
    tl = cv.point(Vec2(-field.half_length, field.half_width))
    cv.parts.append(
        f'<rect x="{_fmt(tl[0])}" y="{_fmt(tl[1])}" width="{_fmt(field.length * SCALE)}" '
        f'height="{_fmt(field.width * SCALE)}" fill="#1a7a2e" stroke="white" stroke-width="2" />'
    )
    for d in obstacles:
        cv.circle(d.center, d.radius, fill="#d9a400", stroke="#333")
    seen = set()
    for i, adj in roadmap.edges.items():
        for j, _w in adj:
            if (j, i) not in seen:
                seen.add((i, j))
                cv.line(roadmap.nodes[i], roadmap.nodes[j], stroke="#cccccc", width=1)
    if path:
        for i, j in zip(path, path[1:]):
            cv.line(roadmap.nodes[i], roadmap.nodes[j], stroke="#1255cc", width=5)
    for idx, node in enumerate(roadmap.nodes):
        fill = "#ff3333" if idx == 0 else "#3333ff" if idx == 1 else "white"
        cv.circle(node, 0.05, fill=fill, stroke="#222")
    return cv.render()
