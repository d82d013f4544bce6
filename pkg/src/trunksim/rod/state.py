"""Discretized two-rod rig: solver options, material constants, and state.

Each tube is a polyline of N+1 nodes hanging from a fixed attachment at
the motor frame (node 0) down to the bottom connector (node N).  The node
at the frame is clamped in position and the first tangent direction is
prescribed, matching the shaft mount; everything else is free.  Frames,
curvatures and thread paths are derived from node positions, so the node
coordinates are the only degrees of freedom.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..arc import thread_azimuth
from ..params import ActuatorParams, ControlInput

__all__ = [
    "MaterialParams",
    "SolverOptions",
    "ConnectorPose",
    "RigState",
    "build_rig",
    "rig_geometry",
    "load_solver_options",
]

LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class MaterialParams:
    """Tube material constants.

    The default energy uses the linearized modulus; the incompressible
    Neo-Hookean constants are carried for the optional hyperelastic axial
    mode (``SolverOptions.axial_model = "neo-hookean"``).
    """

    youngs_modulus: float = 1.15e6
    neo_hookean_c10: float = 0.46e6
    neo_hookean_d1: float = 0.0

    def __post_init__(self):
        if self.youngs_modulus <= 0.0 or self.neo_hookean_c10 <= 0.0:
            raise ValueError("moduli must be positive")
        if self.neo_hookean_d1 < 0.0:
            raise ValueError("neo_hookean_d1 must be non-negative")

    def bending_stiffness(self, params: ActuatorParams) -> float:
        """EI of the annular wall [N*m^2]."""
        return self.youngs_modulus * params.second_moment

    def axial_stiffness(self, params: ActuatorParams) -> float:
        """EA of the annular wall [N]."""
        return self.youngs_modulus * params.cross_section_area


@dataclass(frozen=True)
class SolverOptions:
    """Discretization and penalty settings for the equilibrium solver.

    Penalty weights: the thread bound and connector spacing are single
    quadratic penalties [N/m]; the sleeve coupling is a distributed
    penalty per unit length [N/m^2] so refinement does not change the
    effective sleeve stiffness.
    """

    segment_count: int = 30
    gradient_tolerance: float = 1e-5
    max_iterations: int = 4000
    pressure_ramp_steps: int = 20
    thread_weight: float = 1.0e4
    sleeve_weight: float = 1.0e5
    connector_weight: float = 1.0e4
    axial_model: str = "linear"

    def __post_init__(self):
        if self.segment_count < 8:
            raise ValueError("segment_count must be at least 8")
        if self.gradient_tolerance <= 0.0:
            raise ValueError("gradient_tolerance must be positive")
        if self.max_iterations <= 0 or self.pressure_ramp_steps <= 0:
            raise ValueError("iteration counts must be positive")
        if min(self.thread_weight, self.sleeve_weight, self.connector_weight) <= 0.0:
            raise ValueError("penalty weights must be positive")
        if self.axial_model not in ("linear", "neo-hookean"):
            raise ValueError("axial_model must be 'linear' or 'neo-hookean'")


def load_solver_options(path: str | Path) -> SolverOptions:
    """Read solver options from a TOML document (flat or under ``[solver]``)."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    doc = doc.get("solver", doc)
    known = {f.name: f.type for f in fields(SolverOptions)}
    unknown = set(doc) - set(known)
    if unknown:
        raise ValueError(f"unknown solver option keys: {sorted(unknown)}")
    kwargs = {}
    for key, value in doc.items():
        if key in ("segment_count", "max_iterations", "pressure_ramp_steps"):
            kwargs[key] = int(value)
        elif key == "axial_model":
            kwargs[key] = str(value)
        else:
            kwargs[key] = float(value)
    return SolverOptions(**kwargs)


@dataclass(frozen=True)
class ConnectorPose:
    """Rigid pose of the bottom connector (derived from the tip nodes)."""

    origin: np.ndarray
    rotation: np.ndarray  # columns: x (left->right), y, z (distal)


@dataclass
class RigState:
    """Configuration of both rods plus derived frames and diagnostics.

    ``positions`` has shape (2, N+1, 3), tube index 0 = left (negative x).
    ``segment_frames`` has shape (2, N, 3, 3) with rows (d1, d2, t): d1/d2
    span the cross-section with the material twist applied, t is the
    segment tangent.  ``control`` records the command the state reflects
    (pressures zero for a freshly built rig).
    """

    params: ActuatorParams
    control: ControlInput | None
    positions: np.ndarray
    segment_frames: np.ndarray
    connector: ConnectorPose
    converged: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def segment_count(self) -> int:
        return self.positions.shape[1] - 1

    def copy(self) -> "RigState":
        return RigState(
            params=self.params,
            control=self.control,
            positions=self.positions.copy(),
            segment_frames=self.segment_frames.copy(),
            connector=ConnectorPose(
                origin=self.connector.origin.copy(), rotation=self.connector.rotation.copy()
            ),
            converged=self.converged,
            diagnostics=dict(self.diagnostics),
        )

    def mean_centerline(self) -> np.ndarray:
        """Average of the two tube centerlines, shape (N+1, 3)."""
        return self.positions.mean(axis=0)


def rig_geometry(params: ActuatorParams):
    """Base/tip attachment points and base frames implied by the spacings.

    Returns (base_pos, tip_pos, t_base, d1_base), each shaped (2, 3) with
    tube 0 on the negative-x side.  The rods are straight lines of the
    rest length running from the top shafts to the connector shafts.
    """
    half_top = params.top_shaft_spacing / 2.0
    half_bot = params.bottom_shaft_spacing / 2.0
    run = half_top - half_bot
    if params.rest_length <= abs(run):
        raise ValueError("inconsistent geometry: rest length shorter than the shaft offset")
    depth = math.sqrt(params.rest_length**2 - run**2)
    base = np.array([[-half_top, 0.0, 0.0], [half_top, 0.0, 0.0]])
    tip = np.array([[-half_bot, 0.0, depth], [half_bot, 0.0, depth]])
    t_base = (tip - base) / params.rest_length
    y = np.array([0.0, 1.0, 0.0])
    d1 = y - (y @ t_base.T)[:, None] * t_base
    d1_base = d1 / np.linalg.norm(d1, axis=1, keepdims=True)
    return base, tip, t_base, d1_base


def node_azimuths_rad(control: ControlInput, params: ActuatorParams, n_segments: int) -> np.ndarray:
    """Thread-guide azimuth at every node, shape (2, N+1), radians.

    Node 0 is at the motor frame (full twist applied), node N at the
    connector (guides start at the front edge).
    """
    thetas = (control.theta_left_deg, control.theta_right_deg)
    l0 = params.rest_length
    alphas = np.empty((2, n_segments + 1))
    for j, theta in enumerate(thetas):
        for i in range(n_segments + 1):
            s = l0 * (1.0 - i / n_segments)
            alphas[j, i] = math.radians(thread_azimuth(s, theta, params))
    return alphas


def _transport(d1: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotate ``d1`` by the minimal rotation taking unit vector a to b."""
    c = np.cross(a, b)
    denom = 1.0 + float(a @ b)
    v = d1 + np.cross(c, d1) + np.cross(c, np.cross(c, d1)) / denom
    v = v - (v @ b) * b
    return v / np.linalg.norm(v)


def node_tangents(positions_j: np.ndarray, t_base_j: np.ndarray) -> np.ndarray:
    """Per-node tangents of one tube: clamped at node 0, averaged inside."""
    e = np.diff(positions_j, axis=0)
    t = e / np.linalg.norm(e, axis=1, keepdims=True)
    nodes = np.empty((positions_j.shape[0], 3))
    nodes[0] = t_base_j
    mid = t[:-1] + t[1:]
    nodes[1:-1] = mid / np.linalg.norm(mid, axis=1, keepdims=True)
    nodes[-1] = t[-1]
    return nodes


def node_directors(positions_j: np.ndarray, t_base_j: np.ndarray, d1_base_j: np.ndarray):
    """Twist-free reference directors at every node (parallel transport)."""
    tangents = node_tangents(positions_j, t_base_j)
    d1 = np.empty_like(tangents)
    d1[0] = d1_base_j
    for i in range(1, len(tangents)):
        d1[i] = _transport(d1[i - 1], tangents[i - 1], tangents[i])
    return tangents, d1


def _segment_material_frames(positions_j, t_base_j, d1_base_j, alphas_j):
    """Orthonormal (d1, d2, t) triads per segment with the twist applied."""
    e = np.diff(positions_j, axis=0)
    t = e / np.linalg.norm(e, axis=1, keepdims=True)
    n_seg = t.shape[0]
    frames = np.empty((n_seg, 3, 3))
    d1 = _transport(d1_base_j, t_base_j, t[0])
    for i in range(n_seg):
        if i > 0:
            d1 = _transport(d1, t[i - 1], t[i])
        alpha = 0.5 * (alphas_j[i] + alphas_j[i + 1])
        d2 = np.cross(d1, t[i])
        mat_d1 = math.cos(alpha) * d1 + math.sin(alpha) * d2
        mat_d2 = np.cross(mat_d1, t[i])
        frames[i, 0] = mat_d1
        frames[i, 1] = mat_d2
        frames[i, 2] = t[i]
    return frames


def connector_pose_from_positions(positions: np.ndarray) -> ConnectorPose:
    """Connector pose: origin at the tip midpoint, x left->right, z distal."""
    tip_l, tip_r = positions[LEFT, -1], positions[RIGHT, -1]
    origin = (tip_l + tip_r) / 2.0
    x_axis = tip_r - tip_l
    x_axis = x_axis / np.linalg.norm(x_axis)
    end_tangent = (positions[LEFT, -1] - positions[LEFT, -2]) + (
        positions[RIGHT, -1] - positions[RIGHT, -2]
    )
    z_axis = end_tangent - (end_tangent @ x_axis) * x_axis
    z_axis = z_axis / np.linalg.norm(z_axis)
    y_axis = np.cross(z_axis, x_axis)
    return ConnectorPose(origin=origin, rotation=np.column_stack([x_axis, y_axis, z_axis]))


def refresh_derived(state: RigState) -> None:
    """Recompute frames and connector pose from the current positions."""
    control = state.control if state.control is not None else ControlInput(
        thread_length_left=state.params.rest_length,
        thread_length_right=state.params.rest_length,
    )
    n = state.segment_count
    alphas = node_azimuths_rad(control, state.params, n)
    _, _, t_base, d1_base = rig_geometry(state.params)
    frames = np.stack(
        [
            _segment_material_frames(state.positions[j], t_base[j], d1_base[j], alphas[j])
            for j in (LEFT, RIGHT)
        ]
    )
    state.segment_frames = frames
    state.connector = connector_pose_from_positions(state.positions)


def build_rig(
    params: ActuatorParams,
    control: ControlInput | None = None,
    opts: SolverOptions | None = None,
) -> RigState:
    """Straight undeformed configuration at zero pressure.

    Both rods run from the top shafts (38 mm apart by default) to the
    connector shafts (15 mm apart), each with exactly the rest length.
    The returned state records the control with pressures zeroed: the
    twist angles are already reflected in the guide azimuths, but no
    pressure has been applied yet.
    """
    opts = opts or SolverOptions()
    if control is None:
        control = ControlInput.at_rest(params)
    control.validate(params)
    base, tip, _, _ = rig_geometry(params)
    n = opts.segment_count
    fractions = np.linspace(0.0, 1.0, n + 1)[None, :, None]
    positions = base[:, None, :] * (1.0 - fractions) + tip[:, None, :] * fractions
    zeroed = replace(control, pressure_left=0.0, pressure_right=0.0)
    state = RigState(
        params=params,
        control=zeroed,
        positions=positions,
        segment_frames=np.empty((2, n, 3, 3)),
        connector=ConnectorPose(origin=np.zeros(3), rotation=np.eye(3)),
        converged=False,
        diagnostics={},
    )
    refresh_derived(state)
    return state
