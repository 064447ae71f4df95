import json
import socket

import pytest

from omnisoccer.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from omnisoccer.config import ConfigError, StackConfig, load_config, parse_config_file
from omnisoccer.geometry import Disc, Vec2
from oracles import dense_path_clearance


def free_port(kind=socket.SOCK_DGRAM) -> int:
    with socket.socket(socket.AF_INET, kind) as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestConfig:
    def test_defaults(self):
        cfg = load_config()
        assert cfg == StackConfig()
        assert cfg.field().length == 9.0
        assert cfg.planner_params().n_samples == 10

    def test_file_values_override_defaults(self, tmp_path):
        path = tmp_path / "stack.conf"
        path.write_text("# comment\nplanner.samples = 20\nfield = practice\n")
        cfg = load_config(file_path=str(path))
        assert cfg.planner_samples == 20
        assert cfg.field().length == 5.0

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "stack.conf"
        path.write_text("planner.samples = 20\nbogus.key = 1\n")
        with pytest.raises(ConfigError, match=":2:"):
            parse_config_file(str(path))

    def test_missing_equals_reports_line(self, tmp_path):
        path = tmp_path / "stack.conf"
        path.write_text("planner.samples 20\n")
        with pytest.raises(ConfigError, match=":1:"):
            parse_config_file(str(path))

    def test_bad_value_coercion(self, tmp_path):
        path = tmp_path / "stack.conf"
        path.write_text("planner.samples = many\n")
        with pytest.raises(ConfigError, match="expected integer"):
            load_config(file_path=str(path))

    def test_precedence_matrix(self, tmp_path):
        path = tmp_path / "stack.conf"
        path.write_text("planner.samples = 20\n")
        env = {"OMNISOCCER_PLANNER_SAMPLES": "30"}
        flags = {"planner_samples": 40}
        assert load_config().planner_samples == 10
        assert load_config(file_path=str(path)).planner_samples == 20
        assert load_config(file_path=str(path), environ=env).planner_samples == 30
        assert load_config(file_path=str(path), environ=env,
                           flag_overrides=flags).planner_samples == 40
        # flags set to None never override
        assert load_config(file_path=str(path), environ={},
                           flag_overrides={"planner_samples": None}).planner_samples == 20

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            StackConfig(field_preset="gymnasium").field()

    def test_custom_preset_needs_dimensions(self):
        with pytest.raises(ConfigError):
            StackConfig(field_preset="custom").field()
        f = StackConfig(field_preset="custom", field_length=4.0, field_width=3.0,
                        field_goal_width=0.7).field()
        assert (f.length, f.width, f.goal_width) == (4.0, 3.0, 0.7)


class TestHelpAndUsage:
    def test_help_exits_zero(self):
        assert main(["--help"]) == EXIT_OK
        for sub in ("sim", "serve", "plan", "demo"):
            assert main([sub, "--help"]) == EXIT_OK

    def test_missing_command_is_usage_error(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_command_is_usage_error(self):
        assert main(["fly"]) == EXIT_USAGE

    def test_unknown_scenario_is_usage_error(self):
        assert main(["demo", "handstand"]) == EXIT_USAGE


def write_world(tmp_path, start, target, obstacles=()):
    world = {
        "start": {"x": start[0], "y": start[1]},
        "target": {"x": target[0], "y": target[1]},
        "obstacles": [{"x": o[0], "y": o[1], "r": o[2]} for o in obstacles],
    }
    path = tmp_path / "world.json"
    path.write_text(json.dumps(world))
    return str(path)


class TestPlanCommand:
    def run_plan(self, tmp_path, world, *extra):
        out = tmp_path / "plan.json"
        svg = tmp_path / "plan.svg"
        code = main(["plan", world, "--out", str(out), "--svg", str(svg), *extra])
        return code, out, svg

    def test_empty_world_direct_path(self, tmp_path):
        world = write_world(tmp_path, (-0.5, 0.0), (0.5, 0.0))
        code, out, svg = self.run_plan(tmp_path, world, "--seed", "1")
        assert code == EXIT_OK
        result = json.loads(out.read_text())
        assert result["v"] == 1 and result["reachable"]
        assert result["waypoints"] == [[0.5, 0.0]]
        text = svg.read_text()
        assert text.startswith("<svg") and "stroke-width" in text

    def test_obstructed_world_path_passes_clearance_oracle(self, tmp_path):
        obstacles = [(0.0, y, 0.09) for y in (-0.6, -0.3, 0.0, 0.3, 0.6)]
        world = write_world(tmp_path, (-2.0, 0.0), (2.0, 0.0), obstacles)
        code, out, _ = self.run_plan(tmp_path, world, "--seed", "3",
                                     "--samples", "20")
        assert code == EXIT_OK
        result = json.loads(out.read_text())
        assert result["reachable"]
        waypoints = [Vec2(-2.0, 0.0)] + [Vec2(x, y) for x, y in result["waypoints"]]
        inflated = [Disc(Vec2(x, y), r + 0.2) for x, y, r in obstacles]
        assert dense_path_clearance(waypoints, inflated, n=50_000) > 0.0

    def test_unreachable_world_is_not_an_error(self, tmp_path):
        import math
        ring = [(1.0 + 0.8 * math.cos(a), 0.8 * math.sin(a), 0.3)
                for a in [i * math.pi / 9 for i in range(18)]]
        world = write_world(tmp_path, (-2.0, 0.0), (1.0, 0.0), ring)
        code, out, svg = self.run_plan(tmp_path, world, "--seed", "1")
        assert code == EXIT_OK
        result = json.loads(out.read_text())
        assert not result["reachable"]
        assert result["status"] == "unreachable"
        assert result["path"] is None
        assert svg.exists()

    def test_missing_world_file_is_runtime_error(self, tmp_path):
        code = main(["plan", str(tmp_path / "nope.json")])
        assert code == EXIT_RUNTIME

    def test_blocked_start_is_runtime_error(self, tmp_path):
        world = write_world(tmp_path, (0.0, 0.0), (2.0, 0.0), [(0.0, 0.0, 0.5)])
        code, _, _ = self.run_plan(tmp_path, world)
        assert code == EXIT_RUNTIME


class TestDemoCommand:
    def test_follow_metrics(self, tmp_path, capsys):
        metrics_path = tmp_path / "metrics.json"
        code = main(["demo", "follow", "--seed", "0", "--json",
                     "--metrics", str(metrics_path)])
        assert code == EXIT_OK
        printed = json.loads(capsys.readouterr().out)
        saved = json.loads(metrics_path.read_text())
        assert printed == saved
        assert saved["time_to_ball"] is not None and saved["time_to_ball"] < 5.0
        assert saved["min_clearance"] > 0.0

    def test_goalkeeper_saves_seeded_shot(self, capsys):
        code = main(["demo", "goalkeeper", "--seed", "1", "--json"])
        assert code == EXIT_OK
        metrics = json.loads(capsys.readouterr().out)
        assert metrics["save"] is True


class TestSimCommand:
    def run_sim_cli(self, capsys, seed: int):
        args = ["sim", "--headless", "--duration", "0.5", "--seed", str(seed),
                "--json", "--vision-port", str(free_port()),
                "--command-port", str(free_port())]
        assert main(args) == EXIT_OK
        return json.loads(capsys.readouterr().out)

    def test_headless_run_and_determinism(self, capsys):
        a = self.run_sim_cli(capsys, 42)
        b = self.run_sim_cli(capsys, 42)
        assert a == b
        assert a["time"] == pytest.approx(0.5, abs=1e-9)

    def test_occupied_port_is_runtime_error(self):
        with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as taken:
            taken.bind(("127.0.0.1", 0))
            port = taken.getsockname()[1]
            code = main(["sim", "--headless", "--duration", "0.1",
                         "--command-port", str(port)])
        assert code == EXIT_RUNTIME
