/** Keyboard teleop: WASD for translation, Q/E for rotation.
 *
 * tick() is called at 30 Hz. While any drive key is held (and teleop is
 * enabled with a robot selected) it yields one velocity message per tick;
 * on release it yields exactly one zero-velocity message, then nothing.
 * With teleop disabled or no robot selected it never yields anything.
 */

import { TeleopMessage, teleopMessage } from "./messages.js";
import { ConsoleState } from "./state.js";

export const TELEOP_RATE_HZ = 30;

const DRIVE_KEYS = ["w", "a", "s", "d", "q", "e"] as const;
export type DriveKey = (typeof DRIVE_KEYS)[number];

export function isDriveKey(key: string): key is DriveKey {
  return (DRIVE_KEYS as readonly string[]).includes(key);
}

export class TeleopController {
  private held = new Set<DriveKey>();
  private wasDriving = false;

  keyDown(key: string): void {
    if (isDriveKey(key)) this.held.add(key);
  }

  keyUp(key: string): void {
    if (isDriveKey(key)) this.held.delete(key);
  }

  releaseAll(): void {
    this.held.clear();
  }

  /** One 30 Hz tick; null means nothing should be sent. */
  tick(state: ConsoleState): TeleopMessage | null {
    if (!state.teleopEnabled || state.selectedRobot === null) {
      // gating also swallows the pending release-zero so a disabled
      // console can never emit a teleop message
      this.wasDriving = false;
      return null;
    }
    const id = state.selectedRobot;
    const s = state.linearSpeed;
    const r = state.angularSpeed;
    let vx = 0;
    let vy = 0;
    let omega = 0;
    if (this.held.has("w")) vx += s;
    if (this.held.has("s")) vx -= s;
    if (this.held.has("a")) vy += s;
    if (this.held.has("d")) vy -= s;
    if (this.held.has("q")) omega += r;
    if (this.held.has("e")) omega -= r;
    const driving = this.held.size > 0;
    if (driving) {
      this.wasDriving = true;
      return teleopMessage(id, vx, vy, omega);
    }
    if (this.wasDriving) {
      this.wasDriving = false;
      return teleopMessage(id, 0, 0, 0);
    }
    return null;
  }
}
