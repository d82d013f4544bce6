/**
 * DOM wiring for the operator console.
 *
 * All physics numbers on screen come from service frames; the console
 * performs no simulation of its own.  User input, network callbacks and
 * stream messages all funnel through the reducer in state.ts.
 */

import { FIELD_SPECS, draftError } from "./control.js";
import { DEFAULT_VIEW, cylinderOutline, projectPolyline } from "./projection.js";
import { stepAt } from "./scenario.js";
import { ConsoleEvent, reduce, scenarioProgress } from "./state.js";
import { ConsoleState, initialConsoleState } from "./types.js";

const BOTTLE = { base: [-40, 15, 160] as [number, number, number], radius: 32.5, height: 205 };

let state: ConsoleState = initialConsoleState();
let view = { ...DEFAULT_VIEW };

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function dispatch(event: ConsoleEvent): void {
  state = reduce(state, event);
  render();
}

// ---- control submission ------------------------------------------------------

async function submitDraft(): Promise<void> {
  const before = state;
  dispatch({ kind: "submit" });
  if (state.submitError || before.submitting) return; // blocked client-side
  try {
    const resp = await fetch("/control", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(state.draft),
    });
    if (resp.status === 202) {
      dispatch({ kind: "submit-accepted" });
    } else {
      const doc = await resp.json().catch(() => ({ error: `HTTP ${resp.status}` }));
      dispatch({ kind: "submit-rejected", error: doc.error ?? `HTTP ${resp.status}` });
    }
  } catch (err) {
    dispatch({ kind: "submit-transport-failure", error: `network failure: ${err}` });
  }
}

// ---- websocket stream ----------------------------------------------------------

function connectStream(): void {
  dispatch({ kind: "connection", status: "connecting" });
  const proto = location.protocol === "https:" ? "wss" : "ws";
  const ws = new WebSocket(`${proto}://${location.host}/stream`);
  ws.onopen = () => dispatch({ kind: "connection", status: "open" });
  ws.onmessage = (msg) => dispatch({ kind: "message", raw: msg.data });
  ws.onclose = () => {
    dispatch({ kind: "connection", status: "closed" });
    setTimeout(connectStream, 1000);
  };
  ws.onerror = () => ws.close();
}

// ---- rendering -------------------------------------------------------------------

function drawScene(): void {
  const canvas = $<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const w = canvas.width;
  const h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  ctx.save();
  ctx.translate(w / 2, h / 2);

  const polyline = (pts: [number, number][], stroke: string, width = 2) => {
    if (pts.length < 2) return;
    ctx.beginPath();
    ctx.moveTo(pts[0][0], pts[0][1]);
    for (const [u, v] of pts.slice(1)) ctx.lineTo(u, v);
    ctx.strokeStyle = stroke;
    ctx.lineWidth = width;
    ctx.stroke();
  };

  // world axes at the frame origin
  const origin: [number, number, number] = [0, 0, 0];
  const axes: [string, [number, number, number]][] = [
    ["#c33", [60, 0, 0]],
    ["#3a3", [0, 60, 0]],
    ["#36c", [0, 0, 60]],
  ];
  for (const [color, end] of axes) {
    polyline(projectPolyline([origin, end], view), color, 1);
  }

  // bottle ghost
  for (const ring of cylinderOutline(BOTTLE.base, BOTTLE.radius, BOTTLE.height)) {
    polyline(projectPolyline(ring, view), "#9b8", 1);
  }

  if (state.frame) {
    const [left, right] = state.frame.centerlines_mm;
    polyline(projectPolyline(left, view), "#d84", 3);
    polyline(projectPolyline(right, view), "#48d", 3);
    if (state.tipTrace.length > 1) {
      polyline(projectPolyline(state.tipTrace, view), "#888", 1);
    }
    const [tu, tv] = projectPolyline([state.frame.tip_mm], view)[0];
    ctx.beginPath();
    ctx.arc(tu, tv, 4, 0, 2 * Math.PI);
    ctx.fillStyle = "#222";
    ctx.fill();
  }
  ctx.restore();
}

function render(): void {
  const frame = state.frame;
  $("pattern").textContent = frame ? frame.pattern : "(no frame yet)";
  $("status").textContent =
    `${state.connection}` + (frame ? ` | solver ${frame.status}` + (frame.converged ? ", converged" : "") : "");
  $("tip").textContent = frame
    ? frame.tip_mm.map((c) => c.toFixed(1)).join(", ") + " mm"
    : "-";
  $("winding").textContent = frame ? `${frame.winding_angle_deg.toFixed(1)} deg` : "-";

  const warning = $("warning");
  warning.textContent = state.warning ?? "";
  warning.style.display = state.warning ? "block" : "none";

  const error = $("submit-error");
  error.textContent = state.submitError ?? "";
  error.style.display = state.submitError ? "inline" : "none";

  const submit = $<HTMLButtonElement>("submit");
  submit.disabled = state.submitting || draftError(state.draft) !== null;
  submit.textContent = state.submitting ? "waiting for ack..." : "submit control";
  $<HTMLButtonElement>("retry").style.display = state.canRetry ? "inline-block" : "none";

  $("scenario-progress").textContent = scenarioProgress(state);
  const next = stepAt(state.scenarioCursor);
  $<HTMLButtonElement>("scenario-next").textContent = next
    ? `next step: ${next.label}`
    : "scenario done";
  $<HTMLButtonElement>("scenario-next").disabled = next === null || state.submitting;

  for (const spec of FIELD_SPECS) {
    const slider = $<HTMLInputElement>(`slider-${spec.key}`);
    const box = $<HTMLInputElement>(`box-${spec.key}`);
    const value = state.draft[spec.key];
    if (document.activeElement !== slider) slider.value = String(value);
    if (document.activeElement !== box) box.value = String(value);
  }
  drawScene();
}

function buildControls(): void {
  const host = $("controls");
  for (const spec of FIELD_SPECS) {
    const row = document.createElement("div");
    row.className = "control-row";
    const label = document.createElement("label");
    label.textContent = `${spec.label} [${spec.unit}]`;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.id = `slider-${spec.key}`;
    const box = document.createElement("input");
    box.type = "number";
    box.id = `box-${spec.key}`;
    for (const input of [slider, box]) {
      input.min = String(spec.min);
      input.max = String(spec.max);
      input.step = String(spec.step);
      input.addEventListener("input", () => {
        dispatch({ kind: "edit-draft", patch: { [spec.key]: Number(input.value) } });
      });
    }
    row.append(label, slider, box);
    host.appendChild(row);
  }
}

function init(): void {
  buildControls();
  $("submit").addEventListener("click", () => void submitDraft());
  $("retry").addEventListener("click", () => void submitDraft());
  $("warning").addEventListener("click", () => dispatch({ kind: "dismiss-warning" }));
  $("scenario-next").addEventListener("click", () => {
    // one operator action per step: load the scripted step, then submit it
    dispatch({ kind: "scenario-next" });
    void submitDraft();
  });
  $("scenario-reset").addEventListener("click", () => dispatch({ kind: "scenario-reset" }));
  $<HTMLInputElement>("view-yaw").addEventListener("input", (e) => {
    view = { ...view, yawDeg: Number((e.target as HTMLInputElement).value) };
    render();
  });
  $<HTMLInputElement>("view-pitch").addEventListener("input", (e) => {
    view = { ...view, pitchDeg: Number((e.target as HTMLInputElement).value) };
    render();
  });

  // initial pose via plain GET so the view fills even before the stream opens
  fetch("/state")
    .then((r) => r.json())
    .then((doc) => dispatch({ kind: "message", raw: doc }))
    .catch(() => undefined);
  connectStream();
  render();
}

document.addEventListener("DOMContentLoaded", init);
