"""Toolkit for a two-tube thread-constrained pneumatic trunk actuator.

Closed-form statics (linear extension and the planar C bend), spring
constant identification from measured tips, a discretized two-rod
equilibrium solver for the full motion-pattern family, measured
trajectory processing, a scripted grab-and-pour scenario, and a CLI plus
HTTP/WebSocket teleoperation service.
"""

from .arc import (
    ArcGeometry,
    TipPosition,
    c_bend_geometry,
    c_bend_tip,
    extension_within_slack,
    linear_extension_length,
    thread_azimuth,
)
from .fitting import (
    FitResult,
    Observation,
    fit_spring_constant,
    grid_search_k,
    load_observations,
    residual,
)
from .measurement import (
    CameraExtrinsics,
    TrajectoryMetrics,
    TrajectorySeries,
    camera_to_world,
    compare_trajectories,
    gaussian_smooth,
    load_trajectory,
)
from .params import ActuatorParams, ControlInput, load_params, save_params
from .patterns import MotionPattern, classify_pattern

__all__ = [
    "ActuatorParams",
    "ArcGeometry",
    "CameraExtrinsics",
    "ControlInput",
    "FitResult",
    "MotionPattern",
    "Observation",
    "TipPosition",
    "TrajectoryMetrics",
    "TrajectorySeries",
    "c_bend_geometry",
    "c_bend_tip",
    "camera_to_world",
    "classify_pattern",
    "compare_trajectories",
    "extension_within_slack",
    "fit_spring_constant",
    "gaussian_smooth",
    "grid_search_k",
    "linear_extension_length",
    "load_observations",
    "load_params",
    "load_trajectory",
    "residual",
    "save_params",
    "thread_azimuth",
]

__version__ = "0.1.0"
