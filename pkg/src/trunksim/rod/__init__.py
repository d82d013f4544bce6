"""Reduced-order quasi-static equilibrium solver for the two-rod rig."""

from .energy import energy_gradient, energy_terms, get_model, total_energy
from .metrics import ShapeMetrics, marker_tip, shape_metrics, winding_angle_deg
from .solve import RampResult, simulate_ramp, solve_equilibrium
from .state import (
    ConnectorPose,
    MaterialParams,
    RigState,
    SolverOptions,
    build_rig,
    load_solver_options,
    rig_geometry,
)

__all__ = [
    "ConnectorPose",
    "MaterialParams",
    "RampResult",
    "RigState",
    "ShapeMetrics",
    "SolverOptions",
    "build_rig",
    "energy_gradient",
    "energy_terms",
    "get_model",
    "load_solver_options",
    "marker_tip",
    "rig_geometry",
    "shape_metrics",
    "simulate_ramp",
    "solve_equilibrium",
    "total_energy",
    "winding_angle_deg",
]
