import json
import time

import pytest
from fastapi.testclient import TestClient

from trunksim.params import ActuatorParams
from trunksim.rod import SolverOptions
from trunksim.service import SimulatorService, create_app


@pytest.fixture()
def client(tmp_path):
    service = SimulatorService(
        params=ActuatorParams(),
        opts=SolverOptions(segment_count=12, pressure_ramp_steps=3),
        storage_root=tmp_path,
    )
    with TestClient(create_app(service)) as c:
        c.service = service
        yield c


def _wait_idle(client, timeout=120.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        snap = client.get("/state").json()
        if snap["status"] == "idle":
            return snap
        time.sleep(0.05)
    raise TimeoutError("service did not become idle")


def test_initial_state(client):
    snap = client.get("/state").json()
    assert snap["status"] == "idle"
    assert snap["pattern"] == "C-shaped"
    assert len(snap["centerlines_mm"]) == 2
    assert snap["control"]["pressure_left_mpa"] == 0.0


def test_invalid_control_rejected_without_state_change(client):
    before = client.get("/state").json()
    resp = client.post("/control", json={"pressure_left_mpa": -0.1})
    assert resp.status_code == 422
    assert resp.json()["accepted"] is False
    after = _wait_idle(client)
    assert after["control"] == before["control"]


def test_control_solve_and_pattern(client):
    resp = client.post(
        "/control",
        json={
            "theta_left_deg": -90.0,
            "theta_right_deg": -90.0,
            "pressure_left_mpa": 0.05,
            "pressure_right_mpa": 0.05,
            "thread_length_left_mm": 300.0,
            "thread_length_right_mm": 300.0,
        },
    )
    assert resp.status_code == 202
    snap = _wait_idle(client)
    assert snap["converged"] is True
    assert snap["pattern"] == "Helical (CCW)"
    assert snap["winding_angle_deg"] < 0.0
    records = client.service.runlog.records()
    assert records and records[-1]["pattern"] == "Helical (CCW)"


def test_last_writer_wins(client):
    first = {"pressure_left_mpa": 0.05, "pressure_right_mpa": 0.05,
             "thread_length_left_mm": 300.0, "thread_length_right_mm": 300.0}
    second = {"pressure_left_mpa": 0.1, "pressure_right_mpa": 0.1,
              "thread_length_left_mm": 300.0, "thread_length_right_mm": 300.0}
    assert client.post("/control", json=first).status_code == 202
    assert client.post("/control", json=second).status_code == 202
    snap = _wait_idle(client)
    assert snap["control"]["pressure_left_mpa"] == pytest.approx(0.1)


def test_stream_frames_monotone_and_live(client):
    with client.websocket_connect("/stream") as ws:
        first = json.loads(ws.receive_text())
        assert first["status"] in ("idle", "solving")
        client.post(
            "/control",
            json={"pressure_left_mpa": 0.08, "pressure_right_mpa": 0.08,
                  "thread_length_left_mm": 300.0, "thread_length_right_mm": 300.0},
        )
        seqs = [first["seq"]]
        frames = []
        deadline = time.time() + 120.0
        while time.time() < deadline:
            frame = json.loads(ws.receive_text())
            frames.append(frame)
            seqs.append(frame["seq"])
            if frame["status"] == "idle" and frame["control"]["pressure_left_mpa"] == pytest.approx(0.08):
                break
        assert frames, "no frames received"
        assert all(b > a for a, b in zip(seqs, seqs[1:]))
        assert frames[-1]["converged"] is True


def test_scenario_endpoint_runs_script(client):
    resp = client.post("/scenario/run")
    assert resp.status_code == 200
    report = resp.json()
    assert len(report["steps"]) == 6
    assert [s["label"] for s in report["steps"]] == [
        "approach", "align", "embrace", "grab", "lift", "pour",
    ]
    assert report["completed"] is True
    assert all(s["converged"] for s in report["steps"])
    # the live state is untouched by the private scenario rig
    snap = client.get("/state").json()
    assert snap["control"]["pressure_left_mpa"] == 0.0


def test_tip_matches_arc_model_after_c_solve(client):
    # C configuration at 0.05 MPa: the streamed tip must match the
    # constant-curvature family fitted to the simulator's own response
    import numpy as np

    from trunksim.arc import c_bend_tip
    from trunksim.fitting import Observation, fit_spring_constant
    from trunksim.arc import TipPosition

    client.post(
        "/control",
        json={"pressure_left_mpa": 0.05, "pressure_right_mpa": 0.05,
              "thread_length_left_mm": 300.0, "thread_length_right_mm": 300.0},
    )
    snap = _wait_idle(client)
    assert snap["converged"]
    tip = TipPosition(*(c * 1e-3 for c in snap["tip_mm"]))
    params = client.service.params
    fit = fit_spring_constant([Observation(pressure=0.05e6, tip=tip)], params,
                              bounds=(10.0, 500.0), tol=0.01)
    pred = c_bend_tip(0.05e6, fit.k, params)
    err = np.linalg.norm(np.array(pred.as_tuple()) - np.array(tip.as_tuple()))
    assert err <= 0.10 * params.rest_length
