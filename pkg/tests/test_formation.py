from importlib.resources import files

import pytest
from hypothesis import given, strategies as st

from omnisoccer.balltrack import GoalkeeperLine
from omnisoccer.formation import (
    DEFAULT_BEHIND_MARGIN,
    Formation,
    FormationLibrary,
    ParseError,
    Role,
    assign_roles,
    home_position,
    parse_formation_file,
    serialize_library,
)
from omnisoccer.geometry import FieldModel, Vec2

FIELD = FieldModel.division_b()

MINIMAL = """\
formation test
role keeper anchor -4.3 0 weight 0 0 goalkeeper
"""


def role(name="r", anchor=(0.0, 0.0), weight=(0.0, 0.0), **kw) -> Role:
    return Role(name=name, anchor=Vec2(*anchor), ball_weight=Vec2(*weight), **kw)


class TestTypes:
    def test_weight_bounds(self):
        with pytest.raises(ValueError):
            role(weight=(1.5, 0.0))
        with pytest.raises(ValueError):
            role(weight=(0.0, -0.1))

    def test_formation_needs_roles(self):
        with pytest.raises(ValueError):
            Formation("empty", ())

    def test_duplicate_role_names(self):
        with pytest.raises(ValueError):
            Formation("f", (role("a"), role("a")))

    def test_single_goalkeeper(self):
        with pytest.raises(ValueError):
            Formation("f", (role("a", is_goalkeeper=True),
                            role("b", is_goalkeeper=True)))
        f = Formation("f", (role("a"), role("b", is_goalkeeper=True)))
        assert f.goalkeeper().name == "b"

    def test_library_active_must_exist(self):
        f = Formation("f", (role("a"),))
        with pytest.raises(ValueError):
            FormationLibrary(formations={"f": f}, active="missing")


class TestParser:
    def test_minimal_file(self):
        lib = parse_formation_file(MINIMAL)
        assert lib.active == "test"
        f = lib.active_formation()
        assert len(f.roles) == 1
        r = f.roles[0]
        assert r.is_goalkeeper and r.anchor == Vec2(-4.3, 0.0)

    def test_round_trip_idempotence(self):
        lib = parse_formation_file(MINIMAL)
        text = serialize_library(lib)
        again = parse_formation_file(text)
        assert serialize_library(again) == text
        assert again.formations.keys() == lib.formations.keys()

    def test_comments_and_blank_lines(self):
        text = "# header\n\nformation f # trailing\nrole a anchor 1 2 weight 0.1 0.2\n"
        lib = parse_formation_file(text)
        r = lib.active_formation().roles[0]
        assert r.anchor == Vec2(1.0, 2.0)
        assert r.ball_weight == Vec2(0.1, 0.2)

    def test_role_options(self):
        text = ("formation f\n"
                "role a anchor 0 0 weight 0 0 behind 0.3\n"
                "role b anchor 0 1 weight 0 0\n")
        roles = parse_formation_file(text).active_formation().roles
        assert roles[0].stay_behind_ball and roles[0].behind_margin == 0.3
        assert not roles[1].stay_behind_ball
        assert roles[1].behind_margin == DEFAULT_BEHIND_MARGIN

    def test_duplicate_formation_name_line_number(self):
        text = ("formation f\n"
                "role a anchor 0 0 weight 0 0\n"
                "formation f\n")
        with pytest.raises(ParseError) as exc:
            parse_formation_file(text)
        assert exc.value.line == 3

    @pytest.mark.parametrize("text, line", [
        ("formation\n", 1),
        ("role a anchor 0 0 weight 0 0\n", 1),
        ("formation f\nrole a anchor 0 0\n", 2),
        ("formation f\nrole a anchor x 0 weight 0 0\n", 2),
        ("formation f\nrole a anchor 0 0 weight 0 2\n", 2),
        ("formation f\nrole a anchor 0 0 weight 0 0 behind\n", 2),
        ("formation f\nrole a anchor 0 0 weight 0 0 goalkeeper goalkeeper\n", 2),
        ("formation f\nrole a anchor 0 0 weight 0 0 sideways\n", 2),
        ("formation f\nrole a anchor 0 0 weight 0 0\nrole a anchor 1 1 weight 0 0\n", 3),
        ("formation f\n# no roles\n", 1),
        ("formation f\nwaypoint 1 2\n", 2),
        ("", 1),
    ])
    def test_malformed_inputs_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_formation_file(text)
        assert exc.value.line == line
        assert f"line {line}:" in str(exc.value)

    def test_shipped_default_formation(self):
        text = files("omnisoccer.data").joinpath("default.formation").read_text()
        lib = parse_formation_file(text)
        f = lib.active_formation()
        assert lib.active == "default"
        assert [r.name for r in f.roles] == [
            "goalkeeper", "defender_left", "defender_right", "attacker", "assistant"]
        assert f.goalkeeper().name == "goalkeeper"
        assert sum(r.stay_behind_ball for r in f.roles) == 3


class TestHomePosition:
    def test_zero_coupling_is_static(self):
        r = role(anchor=(-2.0, 1.0))
        for ball in (Vec2(0, 0), Vec2(3, -2), Vec2(-4, 2)):
            assert home_position(r, ball, FIELD) == Vec2(-2.0, 1.0)

    def test_coupling_arithmetic(self):
        r = role(anchor=(-2.0, 0.0), weight=(0.5, 0.5))
        assert home_position(r, Vec2(1.0, 1.0), FIELD) == Vec2(-1.5, 0.5)

    def test_stay_behind_min_rule(self):
        r = role(anchor=(0.3, 0.0), weight=(0.0, 0.0),
                 stay_behind_ball=True, behind_margin=0.2)
        h = home_position(r, Vec2(-1.0, 0.0), FIELD)
        assert h.x == pytest.approx(-1.2)

    def test_goalkeeper_delegates_to_keeper_line(self):
        line = GoalkeeperLine.for_field(FIELD)
        r = role(anchor=(0.0, 0.0), is_goalkeeper=True)
        h = home_position(r, Vec2(0.0, 0.2), FIELD, keeper_line=line)
        assert h.x == pytest.approx(line.x_line)
        assert h.y == pytest.approx(0.2)

    @given(st.floats(-6, 6), st.floats(-4, 4), st.floats(-3, 3), st.floats(-2, 2),
           st.floats(0, 1), st.floats(0, 1), st.booleans())
    def test_always_in_field(self, bx, by, ax, ay, wx, wy, behind):
        r = role(anchor=(ax, ay), weight=(wx, wy), stay_behind_ball=behind)
        h = home_position(r, Vec2(bx, by), FIELD)
        assert FIELD.contains(h)

    @given(st.floats(-3, 3), st.floats(-2, 2))
    def test_behind_bound_holds_in_field(self, bx, by):
        r = role(anchor=(2.0, 0.0), weight=(0.5, 0.5),
                 stay_behind_ball=True, behind_margin=0.2)
        h = home_position(r, Vec2(bx, by), FIELD)
        bound = bx - 0.2
        if -FIELD.half_length + 0.09 <= bound <= FIELD.half_length - 0.09:
            assert h.x <= bound + 1e-12

    @given(st.floats(-4, 4), st.floats(-2, 2), st.floats(-4, 4), st.floats(-2, 2))
    def test_lipschitz_in_ball(self, b1x, b1y, b2x, b2y):
        r = role(anchor=(0.5, -0.5), weight=(0.7, 0.3))
        h1 = home_position(r, Vec2(b1x, b1y), FIELD)
        h2 = home_position(r, Vec2(b2x, b2y), FIELD)
        bound = max(0.7, 0.3) * max(abs(b1x - b2x), abs(b1y - b2y))
        assert max(abs(h1.x - h2.x), abs(h1.y - h2.y)) <= bound + 1e-12


class TestAssignRoles:
    ROLES = (role("gk", is_goalkeeper=True), role("d1"), role("d2"),
             role("at"), role("as"))

    def test_positional_mapping(self):
        f = Formation("f", self.ROLES)
        got = assign_roles(f, [0, 1, 2, 3, 4])
        assert [got[i].name for i in range(5)] == ["gk", "d1", "d2", "at", "as"]

    def test_deficit_goalkeeper_first(self):
        f = Formation("f", (role("d1"), role("d2"), role("gk", is_goalkeeper=True)))
        got = assign_roles(f, [0, 1])
        assert got[0].name == "gk"
        assert got[1].name == "d1"

    def test_surplus_takes_last_role(self):
        f = Formation("f", (role("a"), role("b")))
        got = assign_roles(f, [0, 1, 2])
        assert [got[i].name for i in range(3)] == ["a", "b", "b"]

    def test_needs_robots(self):
        f = Formation("f", (role("a"),))
        with pytest.raises(ValueError):
            assign_roles(f, [])
