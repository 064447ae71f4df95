"""Command-line entry point.

Subcommands: `sim` (field simulator), `serve` (team server), `plan`
(one-shot planner visualization), `demo` (scripted sim+server scenarios).
Exit codes: 0 ok, 1 usage error, 2 runtime error. With --json, machine
readable output goes to stdout and logs stay on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import planner as prm
from .config import ConfigError, StackConfig, load_config
from .demos import SCENARIOS, run_demo
from .geometry import Disc, Vec2
from .svg import render_plan_svg

log = logging.getLogger("omnisoccer")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to a key = value config file")
    p.add_argument("--preset", choices=["divB", "practice"], dest="field_preset",
                   help="field preset (default divB)")
    p.add_argument("--json", action="store_true", help="JSON output on stdout")
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omnisoccer",
                                     description="Robot soccer control stack")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("sim", help="run the field simulator")
    _common_flags(p_sim)
    p_sim.add_argument("--seed", type=int, dest="sim_seed")
    p_sim.add_argument("--robots", type=int, dest="sim_robots")
    p_sim.add_argument("--noise", type=float, dest="sim_noise")
    p_sim.add_argument("--vision-port", type=int, dest="vision_port")
    p_sim.add_argument("--command-port", type=int, dest="command_port")
    p_sim.add_argument("--duration", type=float, help="simulated seconds to run")
    p_sim.add_argument("--headless", action="store_true",
                       help="run as fast as possible (CI mode)")

    p_serve = sub.add_parser("serve", help="run the team server")
    _common_flags(p_serve)
    p_serve.add_argument("--vision-port", type=int, dest="vision_port")
    p_serve.add_argument("--command-port", type=int, dest="command_port")
    p_serve.add_argument("--ws-port", type=int, dest="ws_port")
    p_serve.add_argument("--formation", dest="formation_file",
                         help="formation file path")
    p_serve.add_argument("--behaviour", action="append", default=[],
                         metavar="ID=NAME", help="startup behaviour per robot")
    p_serve.add_argument("--seed", type=int, dest="planner_seed")

    p_plan = sub.add_parser("plan", help="plan once and write SVG + JSON")
    _common_flags(p_plan)
    p_plan.add_argument("world", help="world description JSON file")
    p_plan.add_argument("--samples", type=int, dest="planner_samples")
    p_plan.add_argument("--k", type=int, dest="planner_k")
    p_plan.add_argument("--seed", type=int, dest="planner_seed")
    p_plan.add_argument("--svg", default="plan.svg", help="SVG output path")
    p_plan.add_argument("--out", default="plan.json", help="JSON output path")

    p_demo = sub.add_parser("demo", help="run a scripted scenario")
    _common_flags(p_demo)
    p_demo.add_argument("scenario", help=f"one of {', '.join(SCENARIOS)}")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--metrics", help="write metrics JSON to this path")

    return parser


def _config_from_args(args: argparse.Namespace) -> StackConfig:
    overrides = {
        name: getattr(args, name)
        for name in StackConfig.__dataclass_fields__
        if hasattr(args, name)
    }
    return load_config(file_path=getattr(args, "config", None),
                       flag_overrides=overrides)


def cmd_sim(args: argparse.Namespace) -> int:
    from .server import BindFailure, run_sim

    cfg = _config_from_args(args)
    try:
        sim = run_sim(cfg, duration=args.duration, realtime=not args.headless)
    except BindFailure as exc:
        log.error("cannot bind simulator sockets: %s", exc)
        return EXIT_RUNTIME
    summary = sim.summary()
    print(json.dumps(summary) if args.json else json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import BindFailure, TeamServer
    from .world import BEHAVIOUR_KINDS, Behaviour

    import asyncio

    cfg = _config_from_args(args)
    try:
        server = TeamServer(cfg)
    except (OSError, ValueError) as exc:
        log.error("cannot start server: %s", exc)
        return EXIT_RUNTIME
    for spec in args.behaviour:
        rid, _, name = spec.partition("=")
        if not rid.isdigit() or name not in BEHAVIOUR_KINDS:
            log.error("bad --behaviour %r (expected ID=NAME)", spec)
            return EXIT_USAGE
        server.controller.set_behaviour(int(rid), Behaviour(name))
    try:
        asyncio.run(server.run())
    except BindFailure as exc:
        log.error("cannot bind server sockets: %s", exc)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        log.info("shutting down")
    return EXIT_OK


def _load_world(path: str) -> tuple[Vec2, Vec2, list[Disc]]:
    with open(path, encoding="utf-8") as fh:
        world = json.load(fh)
    start = Vec2(world["start"]["x"], world["start"]["y"])
    target = Vec2(world["target"]["x"], world["target"]["y"])
    obstacles = [Disc(Vec2(o["x"], o["y"]), o.get("r", 0.09))
                 for o in world.get("obstacles", [])]
    return start, target, obstacles


def cmd_plan(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    try:
        start, target, obstacles = _load_world(args.world)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        log.error("cannot read world file: %s", exc)
        return EXIT_RUNTIME
    params = cfg.planner_params()
    try:
        milestones = prm.sample_milestones(params, cfg.field(), obstacles)
        roadmap = prm.build_roadmap(start, target, milestones, obstacles, params)
    except (prm.FreeSpaceExhausted, prm.StartOrGoalBlocked) as exc:
        log.error("planning failed: %s", exc)
        return EXIT_RUNTIME
    path = prm.dijkstra(roadmap, 0, 1)

    result = {
        "v": 1,
        "seed": params.rng_seed,
        "nodes": [[n.x, n.y] for n in roadmap.nodes],
        "edges": sorted({(min(i, j), max(i, j))
                         for i, adj in roadmap.edges.items() for j, _ in adj}),
        "path": path,
        "waypoints": [[roadmap.nodes[i].x, roadmap.nodes[i].y] for i in path[1:]]
        if path else [],
        "reachable": path is not None,
    }
    if path is None:
        result["status"] = "unreachable"
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2)
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(render_plan_svg(cfg.field(), obstacles, roadmap, path))
    if args.json:
        print(json.dumps(result))
    else:
        print(f"wrote {args.out} and {args.svg} "
              f"({'reachable' if path else 'unreachable'})")
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    if args.scenario not in SCENARIOS:
        log.error("unknown scenario %r (choose from %s)", args.scenario,
                  ", ".join(SCENARIOS))
        return EXIT_USAGE
    metrics = run_demo(args.scenario, seed=args.seed)
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8") as fh:
            json.dump(metrics, fh, indent=2)
    print(json.dumps(metrics) if args.json else json.dumps(metrics, indent=2))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {"sim": cmd_sim, "serve": cmd_serve, "plan": cmd_plan, "demo": cmd_demo}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
