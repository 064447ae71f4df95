"""Async network frontends: team server and simulator service.

The team server runs three loops: UDP vision ingest, a control timer locked
to the vision rate, and a WebSocket telemetry/teleop bridge. The simulator
service binds the same sockets a real field would: it listens for robot
commands and streams vision frames.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time

from websockets.asyncio.server import serve as ws_serve

from . import wire
from .config import StackConfig
from .demos import _load_default_formations
from .formation import parse_formation_file
from .kinematics import BodyVelocity
from .sim import BLUE, SimConfig, Simulator
from .world import (
    BEHAVIOUR_KINDS,
    Behaviour,
    HOLD_FORMATION,
    TELEOP,
    TeamController,
)

log = logging.getLogger(__name__)

TELEMETRY_DECIMATION = 2  # 60 Hz ticks -> 30 Hz telemetry


class BindFailure(OSError):
    pass


class _VisionProtocol(asyncio.DatagramProtocol):
    def __init__(self, server: "TeamServer"):
        self.server = server

    def datagram_received(self, data: bytes, addr) -> None:
        try:
            frame = wire.decode_vision_frame(data)
        except (wire.WireError, json.JSONDecodeError):
            self.server.metrics["bad_frames"] += 1
            return
        self.server.metrics["frames"] += 1
        if not self.server.controller.ingest_frame(frame):
            self.server.metrics["dropped_frames"] += 1
        else:
            self.server.have_fresh_frame = True


class TeamServer:
    """Central controller bound to UDP vision/command ports and a WebSocket."""

    def __init__(self, cfg: StackConfig):
        self.cfg = cfg
        field = cfg.field()
        self.controller = TeamController(
            field,
            planner_params=cfg.planner_params(),
            controller_params=cfg.controller_params(),
        )
        if cfg.formation_file:
            with open(cfg.formation_file, encoding="utf-8") as fh:
                self.formations = parse_formation_file(fh.read())
        else:
            self.formations = _load_default_formations()
        self.metrics = {"frames": 0, "dropped_frames": 0, "bad_frames": 0,
                        "ticks": 0, "tick_seconds_total": 0.0}
        self.have_fresh_frame = False
        self._stale_ticks = 0
        self._clients: set = set()
        self._cmd_transport: asyncio.DatagramTransport | None = None

    # -- console messages ---------------------------------------------------

    def handle_console_message(self, raw: str | bytes) -> None:
        msg = wire.decode_console_message(raw)
        if msg["type"] == "teleop":
            self.controller.set_teleop(
                int(msg["id"]),
                BodyVelocity(float(msg["vx"]), float(msg["vy"]), float(msg["omega"])),
            )
        elif msg["type"] == "behaviour":
            name = msg["name"]
            if name not in BEHAVIOUR_KINDS:
                raise wire.WireError(f"unknown behaviour {name!r}")
            self.controller.set_behaviour(int(msg["id"]), Behaviour(name))
        elif msg["type"] == "formation":
            name = msg["name"]
            if name not in self.formations.formations:
                raise wire.WireError(f"unknown formation {name!r}")
            self.formations.active = name
            ids = sorted(self.controller.wm.our_robots) or list(range(self.cfg.sim_robots))
            self.controller.assign_formation(self.formations.formations[name], ids)

    # -- loops --------------------------------------------------------------

    async def _control_loop(self) -> None:
        period = 1.0 / 60.0
        loop = asyncio.get_running_loop()
        next_tick = loop.time()
        while True:
            next_tick += period
            await asyncio.sleep(max(0.0, next_tick - loop.time()))
            started = time.perf_counter()
            # one tick may reuse the last world model; after that, fail safe
            if self.have_fresh_frame:
                self._stale_ticks = 0
            else:
                self._stale_ticks += 1
            self.have_fresh_frame = False
            if self.controller.wm.latest_frame is None or self._stale_ticks > 1:
                commands = []
            else:
                commands = self.controller.control_tick()
            for cmd in commands:
                if self._cmd_transport is not None:
                    self._cmd_transport.sendto(
                        wire.encode_robot_command(cmd.robot_id, cmd.v, cmd.sequence, cmd.stamp)
                    )
            self.metrics["ticks"] += 1
            self.metrics["tick_seconds_total"] += time.perf_counter() - started
            if self.metrics["ticks"] % TELEMETRY_DECIMATION == 0:
                await self._broadcast_snapshot()

    async def _broadcast_snapshot(self) -> None:
        if not self._clients:
            return
        payload = json.dumps(self.controller.telemetry_snapshot())
        for client in list(self._clients):
            try:
                await client.send(payload)
            except Exception:
                self._clients.discard(client)

    async def _ws_handler(self, websocket) -> None:
        self._clients.add(websocket)
        try:
            async for raw in websocket:
                try:
                    self.handle_console_message(raw)
                except (wire.WireError, json.JSONDecodeError) as exc:
                    await websocket.send(json.dumps({"v": 1, "type": "error",
                                                     "message": str(exc)}))
        finally:
            self._clients.discard(websocket)

    async def run(self, stop: asyncio.Event | None = None) -> None:
        cfg = self.cfg
        loop = asyncio.get_running_loop()
        try:
            vision_transport, _ = await loop.create_datagram_endpoint(
                lambda: _VisionProtocol(self),
                local_addr=(cfg.host, cfg.vision_port),
            )
            self._cmd_transport, _ = await loop.create_datagram_endpoint(
                asyncio.DatagramProtocol,
                remote_addr=(cfg.host, cfg.command_port),
            )
            ws_server = await ws_serve(self._ws_handler, cfg.host, cfg.ws_port)
        except OSError as exc:
            raise BindFailure(str(exc)) from exc
        control = asyncio.create_task(self._control_loop())
        try:
            if stop is None:
                await asyncio.Future()
            else:
                await stop.wait()
        finally:
            control.cancel()
            vision_transport.close()
            self._cmd_transport.close()
            ws_server.close()
            await ws_server.wait_closed()


class _CommandProtocol(asyncio.DatagramProtocol):
    def __init__(self, service: "SimService"):
        self.service = service

    def datagram_received(self, data: bytes, addr) -> None:
        try:
            robot_id, v, _seq, _t = wire.decode_robot_command(data)
        except (wire.WireError, json.JSONDecodeError):
            return
        try:
            self.service.sim.apply_command((BLUE, robot_id), v)
        except KeyError:
            pass


class SimService:
    """Simulator bound to the field-side sockets."""

    def __init__(self, cfg: StackConfig, realtime: bool = True):
        self.cfg = cfg
        self.realtime = realtime
        self.sim = Simulator(SimConfig(
            field=cfg.field(),
            n_robots_per_team=cfg.sim_robots,
            rng_seed=cfg.sim_seed,
            vision_noise_sigma=cfg.sim_noise,
            v_max=cfg.v_max,
            omega_max=cfg.omega_max,
        ))
        self._vision_transport: asyncio.DatagramTransport | None = None

    async def run(self, duration: float | None = None) -> None:
        cfg = self.cfg
        loop = asyncio.get_running_loop()
        try:
            cmd_transport, _ = await loop.create_datagram_endpoint(
                lambda: _CommandProtocol(self),
                local_addr=(cfg.host, cfg.command_port),
            )
            self._vision_transport, _ = await loop.create_datagram_endpoint(
                asyncio.DatagramProtocol,
                remote_addr=(cfg.host, cfg.vision_port),
            )
        except OSError as exc:
            raise BindFailure(str(exc)) from exc
        period = 1.0 / self.sim.cfg.vision_rate
        next_frame = loop.time()
        try:
            while duration is None or self.sim.time < duration - 1e-9:
                if self.realtime:
                    next_frame += period
                    await asyncio.sleep(max(0.0, next_frame - loop.time()))
                else:
                    await asyncio.sleep(0)
                self.sim.step_frame()
                frame = self.sim.emit_vision()
                self._vision_transport.sendto(wire.encode_vision_frame(frame))
        finally:
            cmd_transport.close()
            self._vision_transport.close()


def run_server(cfg: StackConfig, stop: asyncio.Event | None = None) -> None:
    asyncio.run(TeamServer(cfg).run(stop=stop))


def run_sim(cfg: StackConfig, duration: float | None = None,
            realtime: bool = True) -> Simulator:
    service = SimService(cfg, realtime=realtime)
    asyncio.run(service.run(duration=duration))
    return service.sim
