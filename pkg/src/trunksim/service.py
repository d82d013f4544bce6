"""HTTP/WebSocket teleoperation service around one live rig simulation.

A single background thread owns the simulator state (single-writer):
control submissions replace a pending target slot (last writer wins,
mirroring manual teleoperation where the newest command is the intent)
and the solver picks up the latest target when it finishes the current
solve.  Readers get consistent snapshots under a lock; every frame
handed out is stamped with a strictly increasing sequence number at
emission time.

Endpoints (units on the wire are operator units: deg, MPa, mm):

* ``GET /state``          -> current snapshot
* ``POST /control``       -> validate + enqueue a control target (202),
                             structured 422 on validation failure
* ``POST /scenario/run``  -> run the scripted grab-and-pour synchronously
* ``WS /stream``          -> snapshot frames; one on connect, one per
                             state change, and at least one every 100 ms
                             while a solve is in progress
"""

from __future__ import annotations

import asyncio
import contextlib
import itertools
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from . import __version__
from .params import MM, ActuatorParams, ControlInput, load_params
from .patterns import classify_pattern
from .rod import (
    MaterialParams,
    SolverOptions,
    build_rig,
    load_solver_options,
    shape_metrics,
    solve_equilibrium,
)
from .runlog import RunLog
from .scenario import default_scenario_config, grab_pour_script, load_scenario_config, run_scenario

__all__ = ["ServiceConfig", "SimulatorService", "create_app"]

STREAM_POLL_S = 0.025
SOLVING_HEARTBEAT_S = 0.1


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8800
    params_path: str | None = None
    solver_options_path: str | None = None
    scenario_config_path: str | None = None
    storage_root: str = "runs"
    segment_count: int = 30
    pressure_ramp_steps: int = 8

    def build_service(self) -> "SimulatorService":
        params = load_params(self.params_path) if self.params_path else ActuatorParams()
        if self.solver_options_path:
            opts = load_solver_options(self.solver_options_path)
        else:
            opts = SolverOptions(
                segment_count=self.segment_count,
                pressure_ramp_steps=self.pressure_ramp_steps,
            )
        scenario_config = (
            load_scenario_config(self.scenario_config_path)
            if self.scenario_config_path
            else default_scenario_config()
        )
        return SimulatorService(
            params=params,
            opts=opts,
            storage_root=self.storage_root,
            scenario_config=scenario_config,
        )


class SimulatorService:
    """Owns the live rig state; one solver thread, many readers."""

    def __init__(
        self,
        params: ActuatorParams | None = None,
        material: MaterialParams | None = None,
        opts: SolverOptions | None = None,
        storage_root: str | Path = "runs",
        scenario_config=None,
    ):
        self.params = params or ActuatorParams()
        self.material = material or MaterialParams()
        self.opts = opts or SolverOptions(pressure_ramp_steps=8)
        self.scenario_config = scenario_config or default_scenario_config()
        self.runlog = RunLog(Path(storage_root))

        self._lock = threading.Lock()
        self._wakeup = threading.Condition(self._lock)
        self._pending: ControlInput | None = None
        self._stop = False
        self._version = itertools.count(1)
        self._emission = itertools.count(1)
        self._status = "idle"
        self._state = build_rig(self.params, ControlInput.at_rest(self.params), self.opts)
        self._snapshot = self._describe(self._state, "idle")
        self._thread: threading.Thread | None = None

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        if self._thread is None:
            self._thread = threading.Thread(target=self._solver_loop, name="rig-solver", daemon=True)
            self._thread.start()

    def stop(self) -> None:
        with self._wakeup:
            self._stop = True
            self._wakeup.notify_all()
        if self._thread is not None:
            self._thread.join(timeout=60.0)
            self._thread = None

    # -- snapshots --------------------------------------------------------------

    def _describe(self, state, status: str) -> dict:
        m = shape_metrics(state)
        control = state.control or ControlInput.at_rest(self.params)
        return {
            "version": next(self._version),
            "status": status,
            "converged": bool(state.converged),
            "pattern": classify_pattern(control, self.params).label,
            "control": control.to_external(),
            "tip_mm": [c / MM for c in m.tip.as_tuple()],
            "winding_angle_deg": m.winding_angle_deg,
            "centerlines_mm": (state.positions / MM).tolist(),
            "energy": state.diagnostics.get("total_energy"),
            "gradient_inf_norm": state.diagnostics.get("gradient_inf_norm"),
        }

    def snapshot(self) -> dict:
        """Current state stamped with a fresh emission sequence number."""
        with self._lock:
            snap = dict(self._snapshot)
            snap["status"] = self._status
        snap["seq"] = next(self._emission)
        return snap

    # -- control -------------------------------------------------------------

    def submit(self, control: ControlInput) -> dict:
        """Validate and enqueue a target; the newest submission wins."""
        control.validate(self.params)
        with self._wakeup:
            self._pending = control
            self._status = "solving"
            self._wakeup.notify_all()
        return {"accepted": True}

    def run_scenario_now(self) -> dict:
        """Run the scripted scenario on a private rig (live state untouched)."""
        script = grab_pour_script(self.params, self.scenario_config.pour_twist_deg)
        report = run_scenario(
            script,
            self.scenario_config.bottle,
            params=self.params,
            material=self.material,
            opts=self.opts,
        )
        return report.to_dict()

    # -- solver thread -----------------------------------------------------------

    def _solver_loop(self) -> None:
        while True:
            with self._wakeup:
                while self._pending is None and not self._stop:
                    self._wakeup.wait(timeout=0.2)
                if self._stop:
                    return
                target = self._pending
                self._pending = None
                state = self._state
                self._status = "solving"

            def on_step(_idx, partial):
                described = self._describe(partial, "solving")
                with self._lock:
                    self._snapshot = described

            result = solve_equilibrium(
                state, target, material=self.material, opts=self.opts, on_step=on_step
            )
            described = self._describe(result, "idle")
            with self._lock:
                self._state = result
                self._snapshot = described
                if self._pending is None:
                    self._status = "idle"
            self.runlog.append(
                {
                    "t": time.time(),
                    "control": target.to_external(),
                    "tip_mm": described["tip_mm"],
                    "converged": described["converged"],
                    "pattern": described["pattern"],
                }
            )


def create_app(service: SimulatorService, console_dir: str | Path | None = None) -> FastAPI:
    @contextlib.asynccontextmanager
    async def lifespan(_app: FastAPI):
        service.start()
        yield
        service.stop()

    app = FastAPI(title="trunk teleoperation service", version=__version__, lifespan=lifespan)
    app.state.service = service

    @app.get("/state")
    def get_state():
        return service.snapshot()

    @app.post("/control")
    def post_control(body: dict):
        try:
            control = ControlInput.from_external(body)
            ack = service.submit(control)
        except (ValueError, TypeError) as exc:
            return JSONResponse(status_code=422, content={"accepted": False, "error": str(exc)})
        return JSONResponse(status_code=202, content=ack)

    @app.post("/scenario/run")
    def post_scenario():
        return service.run_scenario_now()

    @app.websocket("/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        try:
            last_version = -1
            last_sent = 0.0
            while True:
                snap = service.snapshot()
                now = time.monotonic()
                heartbeat_due = snap["status"] == "solving" and (now - last_sent) >= SOLVING_HEARTBEAT_S
                if snap["version"] != last_version or heartbeat_due or last_sent == 0.0:
                    await ws.send_text(json.dumps(snap))
                    last_version = snap["version"]
                    last_sent = now
                await asyncio.sleep(STREAM_POLL_S)
        except WebSocketDisconnect:
            return

    if console_dir is not None and Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")

    return app
