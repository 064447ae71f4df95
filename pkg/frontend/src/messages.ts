/** Wire types for the team-server WebSocket protocol (schema v1). */

export const SCHEMA_VERSION = 1;

export interface RobotView {
  id: number;
  x: number;
  y: number;
  theta: number;
  behaviour?: string;
}

export interface BallMotionView {
  x: number;
  y: number;
  vx: number;
  vy: number;
  t0: number;
  speed: number;
}

export interface FieldView {
  length: number;
  width: number;
  goal_width: number;
}

export interface Snapshot {
  v: number;
  type: "snapshot";
  t: number;
  frame: number;
  ball: { x: number; y: number } | null;
  ball_motion: BallMotionView | null;
  goal_bound: boolean;
  field: FieldView;
  robots: RobotView[];
  opponents: RobotView[];
  plans: Record<string, { x: number; y: number }[]>;
  /** Optional role home markers; servers may omit this field. */
  homes?: { x: number; y: number }[];
}

export interface ErrorMessage {
  v: number;
  type: "error";
  error: string;
}

export type ServerMessage = Snapshot | ErrorMessage;

export interface TeleopMessage {
  v: 1;
  type: "teleop";
  id: number;
  vx: number;
  vy: number;
  omega: number;
}

export interface BehaviourMessage {
  v: 1;
  type: "behaviour";
  id: number;
  name: string;
}

export interface FormationMessage {
  v: 1;
  type: "formation";
  name: string;
}

export type ClientMessage = TeleopMessage | BehaviourMessage | FormationMessage;

export const BEHAVIOUR_NAMES = [
  "idle",
  "follow",
  "intercept",
  "goalkeeper",
  "formation",
  "teleop",
] as const;

/** Parse a raw WebSocket payload; null when it is not a known server message. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const msg = obj as Record<string, unknown>;
  if (typeof msg.v !== "number" || typeof msg.type !== "string") return null;
  if (msg.type === "snapshot" || msg.type === "error") {
    return msg as unknown as ServerMessage;
  }
  return null;
}

export function teleopMessage(
  id: number,
  vx: number,
  vy: number,
  omega: number,
): TeleopMessage {
  return { v: 1, type: "teleop", id, vx, vy, omega };
}
