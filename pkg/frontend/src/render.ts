/** Canvas rendering of one snapshot. Pure: never mutates its inputs.
 *
 * Only the small slice of CanvasRenderingContext2D that we use is required,
 * so tests can pass a recording stub.
 */

import { Snapshot } from "./messages.js";
import { ConsoleState } from "./state.js";

export interface Ctx {
  canvas: { width: number; height: number };
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

const ROBOT_RADIUS_M = 0.09;
const BALL_RADIUS_M = 0.0215;
const PAD_PX = 20;

interface Camera {
  scale: number;
  halfLength: number;
  halfWidth: number;
}

function camera(ctx: Ctx, snapshot: Snapshot): Camera {
  const sx = (ctx.canvas.width - 2 * PAD_PX) / snapshot.field.length;
  const sy = (ctx.canvas.height - 2 * PAD_PX) / snapshot.field.width;
  return {
    scale: Math.min(sx, sy),
    halfLength: snapshot.field.length / 2,
    halfWidth: snapshot.field.width / 2,
  };
}

function toPx(cam: Camera, x: number, y: number): [number, number] {
  return [PAD_PX + (x + cam.halfLength) * cam.scale, PAD_PX + (cam.halfWidth - y) * cam.scale];
}

function drawField(ctx: Ctx, cam: Camera, snapshot: Snapshot): void {
  const [x0, y0] = toPx(cam, -cam.halfLength, cam.halfWidth);
  ctx.fillStyle = "#14691f";
  ctx.fillRect(x0, y0, snapshot.field.length * cam.scale, snapshot.field.width * cam.scale);
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 2;
  ctx.strokeRect(x0, y0, snapshot.field.length * cam.scale, snapshot.field.width * cam.scale);
  // halfway line and goal mouths
  ctx.beginPath();
  ctx.moveTo(...toPx(cam, 0, cam.halfWidth));
  ctx.lineTo(...toPx(cam, 0, -cam.halfWidth));
  ctx.stroke();
  const halfGoal = snapshot.field.goal_width / 2;
  ctx.strokeStyle = "#ffd84d";
  ctx.lineWidth = 4;
  for (const side of [-1, 1]) {
    ctx.beginPath();
    ctx.moveTo(...toPx(cam, side * cam.halfLength, halfGoal));
    ctx.lineTo(...toPx(cam, side * cam.halfLength, -halfGoal));
    ctx.stroke();
  }
}

function drawRobot(ctx: Ctx, cam: Camera, r: { id: number; x: number; y: number; theta: number },
                   fill: string, selected: boolean): void {
  const [px, py] = toPx(cam, r.x, r.y);
  const radius = ROBOT_RADIUS_M * cam.scale;
  ctx.beginPath();
  ctx.arc(px, py, radius, 0, 2 * Math.PI);
  ctx.fillStyle = fill;
  ctx.fill();
  ctx.strokeStyle = selected ? "#ffffff" : "#111111";
  ctx.lineWidth = selected ? 3 : 1;
  ctx.stroke();
  // heading tick
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(px + radius * Math.cos(r.theta), py - radius * Math.sin(r.theta));
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 2;
  ctx.stroke();
  ctx.fillStyle = "#ffffff";
  ctx.font = "10px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(String(r.id), px, py - radius - 3);
}

function drawPlans(ctx: Ctx, cam: Camera, snapshot: Snapshot): void {
  for (const [rid, waypoints] of Object.entries(snapshot.plans)) {
    const robot = snapshot.robots.find((r) => r.id === Number(rid));
    if (!robot || waypoints.length === 0) continue;
    ctx.beginPath();
    ctx.moveTo(...toPx(cam, robot.x, robot.y));
    for (const wp of waypoints) ctx.lineTo(...toPx(cam, wp.x, wp.y));
    ctx.strokeStyle = "#3b82f6";
    ctx.lineWidth = 4; // thick active path; roadmap links stay thin
    ctx.stroke();
  }
}

function drawPrediction(ctx: Ctx, cam: Camera, snapshot: Snapshot): void {
  const m = snapshot.ball_motion;
  if (!m || m.speed < 1e-6) return;
  const horizonS = 3.0;
  ctx.beginPath();
  ctx.moveTo(...toPx(cam, m.x, m.y));
  ctx.lineTo(...toPx(cam, m.x + m.vx * horizonS, m.y + m.vy * horizonS));
  ctx.strokeStyle = snapshot.goal_bound ? "#ff3b3b" : "#cccccc";
  ctx.lineWidth = snapshot.goal_bound ? 4 : 2;
  ctx.stroke();
}

function drawHomes(ctx: Ctx, cam: Camera, snapshot: Snapshot): void {
  for (const home of snapshot.homes ?? []) {
    const [px, py] = toPx(cam, home.x, home.y);
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.strokeStyle = "#ffd84d";
    ctx.lineWidth = 1;
    ctx.stroke();
  }
}

function drawBanner(ctx: Ctx, text: string): void {
  ctx.fillStyle = "rgba(0, 0, 0, 0.7)";
  ctx.fillRect(0, ctx.canvas.height / 2 - 18, ctx.canvas.width, 36);
  ctx.fillStyle = "#ffffff";
  ctx.font = "16px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(text, ctx.canvas.width / 2, ctx.canvas.height / 2 + 5);
}

export function renderFrame(ctx: Ctx, state: ConsoleState): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  const snapshot = state.snapshot;
  if (snapshot) {
    const cam = camera(ctx, snapshot);
    drawField(ctx, cam, snapshot);
    if (state.overlays.plans) drawPlans(ctx, cam, snapshot);
    if (state.overlays.prediction) drawPrediction(ctx, cam, snapshot);
    if (state.overlays.homes) drawHomes(ctx, cam, snapshot);
    for (const r of snapshot.opponents) drawRobot(ctx, cam, r, "#caa53d", false);
    for (const r of snapshot.robots) {
      drawRobot(ctx, cam, r, "#2563eb", r.id === state.selectedRobot);
    }
    if (snapshot.ball) {
      const [px, py] = toPx(cam, snapshot.ball.x, snapshot.ball.y);
      ctx.beginPath();
      ctx.arc(px, py, Math.max(3, BALL_RADIUS_M * cam.scale), 0, 2 * Math.PI);
      ctx.fillStyle = "#ff8c00";
      ctx.fill();
    }
  }
  if (state.banner) drawBanner(ctx, state.banner);
}
