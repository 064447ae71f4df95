"""Formation files and ball-driven home positions.

A formation names an ordered list of roles. Each role anchors a robot at a
fixed point (its home when the ball sits at field centre) and couples that
home to the ball position with a per-axis weight; roles may additionally be
required to stay behind the ball, and one role per formation may be the
goalkeeper.

File format (UTF-8, line based, `#` starts a comment):

    formation <name>
    role <name> anchor <x> <y> weight <wx> <wy> [behind <margin>] [goalkeeper]

A `formation` line opens a block; the following `role` lines belong to it
until the next `formation` line or end of file.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .balltrack import BallMotion, GoalkeeperLine, keeper_target
from .geometry import ROBOT_RADIUS, FieldModel, Vec2, clamp_to_field

DEFAULT_BEHIND_MARGIN = 0.2


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Role:
    name: str
    anchor: Vec2
    ball_weight: Vec2
    stay_behind_ball: bool = False
    behind_margin: float = DEFAULT_BEHIND_MARGIN
    is_goalkeeper: bool = False

    def __post_init__(self) -> None:
        for w in (self.ball_weight.x, self.ball_weight.y):
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"ball_weight components must be in [0, 1], got {w}")


@dataclass(frozen=True)
class Formation:
    name: str
    roles: tuple[Role, ...]

    def __post_init__(self) -> None:
        if not self.roles:
            raise ValueError("formation needs at least one role")
        names = [r.name for r in self.roles]
        if len(set(names)) != len(names):
            raise ValueError("duplicate role names")
        if sum(r.is_goalkeeper for r in self.roles) > 1:
            raise ValueError("at most one goalkeeper role per formation")

    def goalkeeper(self) -> Role | None:
        for r in self.roles:
            if r.is_goalkeeper:
                return r
        return None


@dataclass
class FormationLibrary:
    formations: dict[str, Formation]
    active: str

    def __post_init__(self) -> None:
        if self.active not in self.formations:
            raise ValueError(f"active formation {self.active!r} not defined")

    def active_formation(self) -> Formation:
        return self.formations[self.active]


def parse_formation_file(text: str) -> FormationLibrary:
    """Parse the line-based formation format; errors carry line numbers."""
    formations: dict[str, Formation] = {}
    current_name: str | None = None
    current_name_line = 0
    current_roles: list[Role] = []

    def close_block() -> None:
        nonlocal current_name, current_roles
        if current_name is None:
            return
        if not current_roles:
            raise ParseError(current_name_line, f"formation {current_name!r} has no roles")
        formations[current_name] = Formation(current_name, tuple(current_roles))
        current_name, current_roles = None, []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "formation":
            if len(tokens) != 2:
                raise ParseError(lineno, "expected: formation <name>")
            close_block()
            if tokens[1] in formations:
                raise ParseError(lineno, f"duplicate formation name {tokens[1]!r}")
            current_name = tokens[1]
            current_name_line = lineno
        elif keyword == "role":
            if current_name is None:
                raise ParseError(lineno, "role line outside a formation block")
            current_roles.append(_parse_role(tokens, lineno, current_roles))
        else:
            raise ParseError(lineno, f"unknown keyword {keyword!r}")
    close_block()
    if not formations:
        raise ParseError(1, "no formations defined")
    return FormationLibrary(formations=formations, active=next(iter(formations)))


def _parse_role(tokens: list[str], lineno: int, existing: list[Role]) -> Role:
    if len(tokens) < 8 or tokens[2] != "anchor" or tokens[5] != "weight":
        raise ParseError(
            lineno,
            "expected: role <name> anchor <x> <y> weight <wx> <wy> [behind <m>] [goalkeeper]",
        )
    name = tokens[1]
    if any(r.name == name for r in existing):
        raise ParseError(lineno, f"duplicate role name {name!r}")

    def number(tok: str) -> float:
        try:
            return float(tok)
        except ValueError:
            raise ParseError(lineno, f"malformed number {tok!r}") from None

    anchor = Vec2(number(tokens[3]), number(tokens[4]))
    weight = (number(tokens[6]), number(tokens[7]))
    stay_behind = False
    behind_margin = DEFAULT_BEHIND_MARGIN
    is_goalkeeper = False
    rest = tokens[8:]
    while rest:
        tok = rest.pop(0)
        if tok == "behind":
            if not rest:
                raise ParseError(lineno, "behind requires a margin value")
            stay_behind = True
            behind_margin = number(rest.pop(0))
        elif tok == "goalkeeper":
            if is_goalkeeper:
                raise ParseError(lineno, "duplicate goalkeeper flag")
            is_goalkeeper = True
        else:
            raise ParseError(lineno, f"unknown role option {tok!r}")
    try:
        return Role(name=name, anchor=anchor, ball_weight=Vec2(*weight),
                    stay_behind_ball=stay_behind, behind_margin=behind_margin,
                    is_goalkeeper=is_goalkeeper)
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def serialize_library(lib: FormationLibrary) -> str:
    """Normalized text form; parse(serialize(parse(x))) == parse(x)."""
    lines: list[str] = []
    for f in lib.formations.values():
        lines.append(f"formation {f.name}")
        for r in f.roles:
            parts = [
                f"role {r.name} anchor {r.anchor.x:g} {r.anchor.y:g}",
                f"weight {r.ball_weight.x:g} {r.ball_weight.y:g}",
            ]
            if r.stay_behind_ball:
                parts.append(f"behind {r.behind_margin:g}")
            if r.is_goalkeeper:
                parts.append("goalkeeper")
            lines.append(" ".join(parts))
        lines.append("")
    return "\n".join(lines)


def home_position(role: Role, ball: Vec2, field: FieldModel,
                  margin: float = ROBOT_RADIUS,
                  motion: BallMotion | None = None,
                  keeper_line: GoalkeeperLine | None = None) -> Vec2:
    """Ball-driven home position for a role, clamped into the field.

    Goalkeeper roles delegate to the trajectory-based keeper target when a
    goalkeeper line is supplied.
    """
    if role.is_goalkeeper and keeper_line is not None:
        return clamp_to_field(keeper_target(motion, ball, keeper_line), field, margin)
    h = Vec2(role.anchor.x + role.ball_weight.x * ball.x,
             role.anchor.y + role.ball_weight.y * ball.y)
    if role.stay_behind_ball:
        h = Vec2(min(h.x, ball.x - role.behind_margin), h.y)
    return clamp_to_field(h, field, margin)


def assign_roles(f: Formation, robot_ids: list[int]) -> dict[int, Role]:
    """Deterministic role assignment in file order.

    With fewer robots than roles the goalkeeper is filled first, then file
    order; with more robots than roles the extras all take the last role.
    """
    if not robot_ids:
        raise ValueError("need at least one robot id")
    roles = list(f.roles)
    if len(robot_ids) < len(roles):
        gk = f.goalkeeper()
        ordered = ([gk] if gk is not None else []) + [r for r in roles if not r.is_goalkeeper]
        return {rid: ordered[i] for i, rid in enumerate(robot_ids)}
    return {rid: roles[min(i, len(roles) - 1)] for i, rid in enumerate(robot_ids)}
