"""Shared fixtures; the expensive rig solves are session-scoped and reused."""

from __future__ import annotations

import time

import pytest

from trunksim.params import ActuatorParams, ControlInput
from trunksim.rod import (
    MaterialParams,
    SolverOptions,
    build_rig,
    simulate_ramp,
    solve_equilibrium,
)

C_PRESSURES = (0.05e6, 0.10e6, 0.15e6, 0.20e6)


@pytest.fixture(scope="session")
def params_nograv():
    return ActuatorParams(gravity=0.0)


@pytest.fixture(scope="session")
def material():
    return MaterialParams()


@pytest.fixture(scope="session")
def opts30():
    return SolverOptions()


def _solve_fresh(params, control, material, opts):
    rig = build_rig(params, control, opts)
    return solve_equilibrium(rig, control, material=material, opts=opts)


@pytest.fixture(scope="session")
def c_ramp30(params_nograv, material, opts30):
    """C-configuration states at the four bench pressures, N = 30."""
    base = ControlInput.at_rest(params_nograv)
    rig = build_rig(params_nograv, base, opts30)
    t0 = time.perf_counter()
    result = simulate_ramp([(p, p) for p in C_PRESSURES], base, rig, material, opts30)
    return {"result": result, "seconds": time.perf_counter() - t0}


@pytest.fixture(scope="session")
def c_ramp60(params_nograv, material):
    opts = SolverOptions(segment_count=60)
    base = ControlInput.at_rest(params_nograv)
    rig = build_rig(params_nograv, base, opts)
    t0 = time.perf_counter()
    result = simulate_ramp([(p, p) for p in C_PRESSURES], base, rig, material, opts)
    return {"result": result, "seconds": time.perf_counter() - t0}


@pytest.fixture(scope="session")
def morphology_states(params_nograv, material, opts30):
    """Converged J / S / helical(+/-) / C equilibria used by the shape tests."""
    p = params_nograv
    controls = {
        "J": ControlInput.at_rest(p, theta_left_deg=-90, theta_right_deg=90,
                                  pressure_left=0.1e6, pressure_right=0.1e6),
        "S": ControlInput.at_rest(p, theta_left_deg=-180, theta_right_deg=180,
                                  pressure_left=0.1e6, pressure_right=0.1e6),
        "helix_neg": ControlInput.at_rest(p, theta_left_deg=-90, theta_right_deg=-90,
                                          pressure_left=0.2e6, pressure_right=0.2e6),
        "helix_pos": ControlInput.at_rest(p, theta_left_deg=90, theta_right_deg=90,
                                          pressure_left=0.2e6, pressure_right=0.2e6),
        "C": ControlInput.at_rest(p, pressure_left=0.1e6, pressure_right=0.1e6),
    }
    t0 = time.perf_counter()
    states = {name: _solve_fresh(p, c, material, opts30) for name, c in controls.items()}
    return {"states": states, "seconds": time.perf_counter() - t0}
