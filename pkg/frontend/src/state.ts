/** Console state and its pure reducer.
 *
 * Every transition is a pure function (state, event) -> state so the UI can
 * be driven identically by live sockets and by tests.
 */

import { SCHEMA_VERSION, ServerMessage, Snapshot } from "./messages.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface Overlays {
  plans: boolean;
  roadmap: boolean;
  prediction: boolean;
  homes: boolean;
}

export interface ConsoleState {
  status: ConnectionStatus;
  snapshot: Snapshot | null;
  snapshotsReceived: number;
  selectedRobot: number | null;
  teleopEnabled: boolean;
  /** teleop magnitudes, from the speed sliders */
  linearSpeed: number;
  angularSpeed: number;
  overlays: Overlays;
  /** banner text shown across the canvas; null when healthy */
  banner: string | null;
  /** last inline server error, e.g. a rejected behaviour switch */
  serverError: string | null;
}

export function initialState(): ConsoleState {
  return {
    status: "connecting",
    snapshot: null,
    snapshotsReceived: 0,
    selectedRobot: null,
    teleopEnabled: false,
    linearSpeed: 1.0,
    angularSpeed: 3.0,
    overlays: { plans: true, roadmap: false, prediction: true, homes: true },
    banner: null,
    serverError: null,
  };
}

export function applyServerMessage(
  state: ConsoleState,
  msg: ServerMessage,
): ConsoleState {
  if (msg.v !== SCHEMA_VERSION) {
    return { ...state, banner: `schema v${msg.v} not supported (want v${SCHEMA_VERSION})` };
  }
  if (msg.type === "error") {
    return { ...state, serverError: msg.error };
  }
  return {
    ...state,
    snapshot: msg,
    snapshotsReceived: state.snapshotsReceived + 1,
    banner: null,
  };
}

export function applyConnection(
  state: ConsoleState,
  status: ConnectionStatus,
): ConsoleState {
  const banner = status === "disconnected" ? "connection lost" : null;
  return { ...state, status, banner };
}

export function selectRobot(state: ConsoleState, id: number | null): ConsoleState {
  return { ...state, selectedRobot: id };
}

export function setTeleopEnabled(state: ConsoleState, enabled: boolean): ConsoleState {
  return { ...state, teleopEnabled: enabled };
}

export function setSpeeds(
  state: ConsoleState,
  linear: number,
  angular: number,
): ConsoleState {
  return { ...state, linearSpeed: linear, angularSpeed: angular };
}

export function toggleOverlay(state: ConsoleState, key: keyof Overlays): ConsoleState {
  return { ...state, overlays: { ...state.overlays, [key]: !state.overlays[key] } };
}
