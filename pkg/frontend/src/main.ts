/** Browser entry point: wires the socket, reducer, teleop loop, and canvas. */

import { BEHAVIOUR_NAMES } from "./messages.js";
import { connect } from "./net.js";
import { Ctx, renderFrame } from "./render.js";
import {
  ConsoleState,
  applyConnection,
  applyServerMessage,
  initialState,
  selectRobot,
  setSpeeds,
  setTeleopEnabled,
  toggleOverlay,
} from "./state.js";
import { TELEOP_RATE_HZ, TeleopController, isDriveKey } from "./teleop.js";

const WS_URL = `ws://${location.hostname}:8080`;

let state: ConsoleState = initialState();
const teleop = new TeleopController();

const canvas = document.getElementById("field") as HTMLCanvasElement;
const ctx = canvas.getContext("2d") as unknown as Ctx;
const statusEl = document.getElementById("status")!;
const errorEl = document.getElementById("server-error")!;
const robotSelect = document.getElementById("robot") as HTMLSelectElement;
const behaviourSelect = document.getElementById("behaviour") as HTMLSelectElement;
const formationInput = document.getElementById("formation") as HTMLInputElement;
const teleopToggle = document.getElementById("teleop-enabled") as HTMLInputElement;
const speedSlider = document.getElementById("speed") as HTMLInputElement;
const turnSlider = document.getElementById("turn") as HTMLInputElement;

const link = connect(WS_URL, {
  onOpen: () => {
    state = applyConnection(state, "connected");
  },
  onClose: () => {
    state = applyConnection(state, "disconnected");
    teleop.releaseAll();
  },
  onMessage: (msg) => {
    state = applyServerMessage(state, msg);
  },
});

for (const name of BEHAVIOUR_NAMES) {
  const opt = document.createElement("option");
  opt.value = name;
  opt.textContent = name;
  behaviourSelect.appendChild(opt);
}

function syncPanel(): void {
  statusEl.textContent = state.status;
  errorEl.textContent = state.serverError ?? "";
  const connected = state.status === "connected";
  behaviourSelect.disabled = !connected || state.selectedRobot === null;
  formationInput.disabled = !connected;
  const seen = state.snapshot?.robots.map((r) => r.id) ?? [];
  if (robotSelect.options.length !== seen.length + 1) {
    robotSelect.innerHTML = "<option value=''>none</option>";
    for (const id of seen) {
      const opt = document.createElement("option");
      opt.value = String(id);
      opt.textContent = `robot ${id}`;
      robotSelect.appendChild(opt);
    }
  }
}

robotSelect.addEventListener("change", () => {
  state = selectRobot(state, robotSelect.value === "" ? null : Number(robotSelect.value));
});
teleopToggle.addEventListener("change", () => {
  state = setTeleopEnabled(state, teleopToggle.checked);
});
const readSpeeds = () => {
  state = setSpeeds(state, Number(speedSlider.value), Number(turnSlider.value));
};
speedSlider.addEventListener("input", readSpeeds);
turnSlider.addEventListener("input", readSpeeds);

behaviourSelect.addEventListener("change", () => {
  if (state.selectedRobot === null || !behaviourSelect.value) return;
  link.send({ v: 1, type: "behaviour", id: state.selectedRobot, name: behaviourSelect.value });
});
formationInput.addEventListener("change", () => {
  if (formationInput.value) {
    link.send({ v: 1, type: "formation", name: formationInput.value });
  }
});

for (const key of ["plans", "roadmap", "prediction", "homes"] as const) {
  document.getElementById(`overlay-${key}`)?.addEventListener("change", () => {
    state = toggleOverlay(state, key);
  });
}

window.addEventListener("keydown", (ev) => {
  if (isDriveKey(ev.key) && state.teleopEnabled) {
    teleop.keyDown(ev.key);
    ev.preventDefault();
  }
});
window.addEventListener("keyup", (ev) => {
  teleop.keyUp(ev.key);
});
window.addEventListener("blur", () => teleop.releaseAll());

setInterval(() => {
  const msg = teleop.tick(state);
  if (msg) link.send(msg);
}, 1000 / TELEOP_RATE_HZ);

function frame(): void {
  renderFrame(ctx, state);
  syncPanel();
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
