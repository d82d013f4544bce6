"""Scripted grab-and-pour task executed against the rig simulator.

The script encodes the six-step bottle routine: raise the trunk as a
low-pressure helix, swing the tip toward the bottle, inflate into a
spiral that embraces it, tighten the left tube to grab, vent the right
tube so the screwing motion lifts the bottle's lower end, and finally
rotate both twists together while topping up the left tube to pour.

The bottle is a geometric ghost: no contact forces act on the trunk.
Task success is judged by geometric predicates (closest approach to the
bottle axis, wrap angle around it, winding growth), evaluated on the
mean centerline after each step.  The default bottle pose and the pour
twist offset were calibrated once against the simulator and are frozen
in ``params/scenario.toml``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .params import MM, MPA, ActuatorParams, ControlInput
from .rod import (
    MaterialParams,
    RigState,
    SolverOptions,
    build_rig,
    shape_metrics,
    solve_equilibrium,
)

__all__ = [
    "ControlStep",
    "BottleSpec",
    "StepRecord",
    "ScenarioReport",
    "ScenarioConfig",
    "grab_pour_script",
    "wrap_angle",
    "run_scenario",
    "load_scenario_config",
    "default_scenario_config",
]

SCENARIO_MAX_PRESSURE = 0.3 * MPA

# thresholds of the named predicates (angles in deg, distances relative)
WRAP_MIN_DEG = 180.0


@dataclass(frozen=True)
class ControlStep:
    """One scripted step: a target control plus an optional named predicate."""

    label: str
    target: ControlInput
    predicate: str | None = None

    def __post_init__(self):
        pressures = (self.target.pressure_left, self.target.pressure_right)
        if not all(0.0 <= p <= SCENARIO_MAX_PRESSURE for p in pressures):
            raise ValueError(
                f"step {self.label!r}: pressures must lie in [0, {SCENARIO_MAX_PRESSURE / MPA} MPa]"
            )


@dataclass(frozen=True)
class BottleSpec:
    """Upright cylinder standing in for the bottle (masses informational)."""

    base_point: tuple[float, float, float] = (-40.0 * MM, 15.0 * MM, 160.0 * MM)
    axis: tuple[float, float, float] = (0.0, 0.0, -1.0)
    height: float = 205.0 * MM
    diameter: float = 65.0 * MM
    bottle_mass: float = 18.0e-3
    contents_mass: float = 42.0e-3

    def __post_init__(self):
        n = math.sqrt(sum(a * a for a in self.axis))
        if not math.isclose(n, 1.0, rel_tol=1e-9):
            raise ValueError("bottle axis must be a unit vector")
        if self.height <= 0.0 or self.diameter <= 0.0:
            raise ValueError("bottle dimensions must be positive")

    @property
    def radius(self) -> float:
        return self.diameter / 2.0


@dataclass(frozen=True)
class StepRecord:
    label: str
    converged: bool
    tip: tuple[float, float, float]
    winding_angle_deg: float
    wrap_angle_deg: float
    min_axis_distance: float
    predicate: str | None
    predicate_passed: bool | None


@dataclass
class ScenarioReport:
    steps: list[StepRecord] = field(default_factory=list)
    completed: bool = False
    failed_step: int | None = None

    @property
    def all_predicates_passed(self) -> bool:
        return self.completed and all(
            r.predicate_passed is not False for r in self.steps
        )

    def to_dict(self) -> dict:
        return {
            "completed": self.completed,
            "failed_step": self.failed_step,
            "all_predicates_passed": self.all_predicates_passed,
            "steps": [
                {
                    "label": r.label,
                    "converged": r.converged,
                    "tip_mm": [c / MM for c in r.tip],
                    "winding_angle_deg": r.winding_angle_deg,
                    "wrap_angle_deg": r.wrap_angle_deg,
                    "min_axis_distance_mm": r.min_axis_distance / MM,
                    "predicate": r.predicate,
                    "predicate_passed": r.predicate_passed,
                }
                for r in self.steps
            ],
        }


@dataclass(frozen=True)
class ScenarioConfig:
    bottle: BottleSpec = BottleSpec()
    pour_twist_deg: float = -30.0
    cup_point: tuple[float, float, float] = (-120.0 * MM, 60.0 * MM, 330.0 * MM)


def grab_pour_script(
    params: ActuatorParams, pour_twist_deg: float = -30.0
) -> list[ControlStep]:
    """The six-step bottle routine.

    Steps: (1) helix at 0.1 MPa to lift the trunk, (2) swing the right
    twist to +10 deg, (3) inflate both tubes to 0.2 MPa into the spiral
    embrace, (4) left tube to 0.25 MPa to grab, (5) right tube down to
    0.1 MPa so the screwing lifts the bottle bottom, (6) rotate both
    twists by the pour offset and push the left tube to 0.3 MPa.
    """
    at = lambda **kw: ControlInput.at_rest(params, **kw)
    d = pour_twist_deg
    return [
        ControlStep(
            "approach",
            at(theta_left_deg=-90.0, theta_right_deg=-90.0, pressure_left=0.1 * MPA, pressure_right=0.1 * MPA),
        ),
        ControlStep(
            "align",
            at(theta_left_deg=-90.0, theta_right_deg=10.0, pressure_left=0.1 * MPA, pressure_right=0.1 * MPA),
        ),
        ControlStep(
            "embrace",
            at(theta_left_deg=-90.0, theta_right_deg=10.0, pressure_left=0.2 * MPA, pressure_right=0.2 * MPA),
            predicate="embrace",
        ),
        ControlStep(
            "grab",
            at(theta_left_deg=-90.0, theta_right_deg=10.0, pressure_left=0.25 * MPA, pressure_right=0.2 * MPA),
            predicate="wrap",
        ),
        ControlStep(
            "lift",
            at(theta_left_deg=-90.0, theta_right_deg=10.0, pressure_left=0.25 * MPA, pressure_right=0.1 * MPA),
            predicate="screw",
        ),
        ControlStep(
            "pour",
            at(
                theta_left_deg=-90.0 + d,
                theta_right_deg=10.0 + d,
                pressure_left=0.3 * MPA,
                pressure_right=0.1 * MPA,
            ),
        ),
    ]


def _axis_frame(bottle: BottleSpec):
    axis = np.asarray(bottle.axis, dtype=float)
    ref = np.array([1.0, 0.0, 0.0])
    if abs(axis @ ref) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    u = ref - (ref @ axis) * axis
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    return np.asarray(bottle.base_point, dtype=float), axis, u, v


def wrap_angle(centerline: np.ndarray, bottle: BottleSpec) -> float:
    """Azimuth sweep of the centerline about the bottle axis [deg].

    Only points within 1.5 bottle radii of the axis count (a far-away
    trunk does not wrap anything); the sweep is the magnitude of the
    summed wrapped azimuth increments between consecutive counted points.
    """
    pts = np.asarray(centerline, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
        raise ValueError("centerline must be an (n, 3) polyline")
    base, axis, u, v = _axis_frame(bottle)
    rel = pts - base
    radial = rel - np.outer(rel @ axis, axis)
    dist = np.linalg.norm(radial, axis=1)
    keep = radial[dist <= 1.5 * bottle.radius]
    if keep.shape[0] < 2:
        return 0.0
    az = np.arctan2(keep @ v, keep @ u)
    delta = np.diff(az)
    delta = (delta + np.pi) % (2.0 * np.pi) - np.pi
    return float(abs(np.degrees(delta.sum())))


def _min_axis_distance(centerline: np.ndarray, bottle: BottleSpec) -> float:
    """Closest approach of the centerline to the bottle axis segment."""
    base, axis, _, _ = _axis_frame(bottle)
    rel = np.asarray(centerline) - base
    t = np.clip(rel @ axis, 0.0, bottle.height)
    closest = base + t[:, None] * axis
    return float(np.linalg.norm(np.asarray(centerline) - closest, axis=1).min())


def run_scenario(
    script: list[ControlStep],
    bottle: BottleSpec,
    params: ActuatorParams | None = None,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
    initial: RigState | None = None,
) -> ScenarioReport:
    """Execute the script step by step with warm starts and score it.

    Every step target is validated against the scenario pressure cap
    before anything is simulated.  A non-converged solve marks the report
    failed at that step and stops; records for the executed steps
    (including the failed one) are retained.
    """
    params = params or ActuatorParams()
    material = material or MaterialParams()
    opts = opts or SolverOptions()
    report = ScenarioReport()
    if not script:
        report.completed = True
        return report
    for step in script:
        step.target.validate(params)
        pressures = (step.target.pressure_left, step.target.pressure_right)
        if not all(0.0 <= p <= SCENARIO_MAX_PRESSURE for p in pressures):
            raise ValueError(f"step {step.label!r} exceeds the scenario pressure cap")

    state = initial if initial is not None else build_rig(params, script[0].target, opts)
    prev_winding: float | None = None
    for index, step in enumerate(script):
        state = solve_equilibrium(state, step.target, material=material, opts=opts)
        m = shape_metrics(state)
        center = state.mean_centerline()
        wrap = wrap_angle(center, bottle)
        axis_dist = _min_axis_distance(center, bottle)

        outcome: bool | None = None
        if step.predicate == "embrace":
            outcome = axis_dist <= bottle.radius + params.outer_diameter
        elif step.predicate == "wrap":
            outcome = wrap >= WRAP_MIN_DEG
        elif step.predicate == "screw":
            outcome = prev_winding is not None and abs(m.winding_angle_deg) > abs(prev_winding)
        elif step.predicate is not None:
            raise ValueError(f"unknown predicate {step.predicate!r}")

        report.steps.append(
            StepRecord(
                label=step.label,
                converged=state.converged,
                tip=m.tip.as_tuple(),
                winding_angle_deg=m.winding_angle_deg,
                wrap_angle_deg=wrap,
                min_axis_distance=axis_dist,
                predicate=step.predicate,
                predicate_passed=outcome,
            )
        )
        if not state.converged:
            report.failed_step = index
            return report
        prev_winding = m.winding_angle_deg
    report.completed = True
    return report


def default_scenario_config() -> ScenarioConfig:
    return ScenarioConfig()


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    """Read bottle pose, cup pose and pour twist from a TOML document (mm units)."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    bottle_doc = doc.get("bottle", {})
    bottle = BottleSpec(
        base_point=tuple(float(c) * MM for c in bottle_doc.get("base_point_mm", (-40.0, 15.0, 160.0))),
        axis=tuple(float(c) for c in bottle_doc.get("axis", (0.0, 0.0, -1.0))),
        height=float(bottle_doc.get("height_mm", 205.0)) * MM,
        diameter=float(bottle_doc.get("diameter_mm", 65.0)) * MM,
        bottle_mass=float(bottle_doc.get("bottle_mass_g", 18.0)) * 1e-3,
        contents_mass=float(bottle_doc.get("contents_mass_g", 42.0)) * 1e-3,
    )
    scenario_doc = doc.get("scenario", {})
    cup = tuple(float(c) * MM for c in scenario_doc.get("cup_point_mm", (-120.0, 60.0, 330.0)))
    return ScenarioConfig(
        bottle=bottle,
        pour_twist_deg=float(scenario_doc.get("pour_twist_deg", -30.0)),
        cup_point=cup,
    )
