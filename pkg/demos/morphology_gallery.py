"""Solve the rig into each motion pattern and print its shape signature.

For every canonical control (straight extension, C, J, S, helix of both
hands, spiral) this solves the discretized two-rod equilibrium and
reports the classifier label next to the measured shape descriptors:
tip, winding angle, planarity, and where the bending lives.

Run:  python demos/morphology_gallery.py        (about a minute)
"""

import numpy as np

from trunksim import ActuatorParams, ControlInput, classify_pattern
from trunksim.rod import (
    MaterialParams,
    SolverOptions,
    build_rig,
    shape_metrics,
    solve_equilibrium,
)

params = ActuatorParams(gravity=0.0)  # gravity off: the idealized pattern family
material = MaterialParams()
opts = SolverOptions()

MPA = 1e6
at = lambda **kw: ControlInput.at_rest(params, **kw)
gallery = {
    "linear": at(thread_length_left=0.36, thread_length_right=0.36,
                 pressure_left=0.1 * MPA, pressure_right=0.1 * MPA),
    "C": at(pressure_left=0.05 * MPA, pressure_right=0.05 * MPA),
    "J": at(theta_left_deg=-90, theta_right_deg=90,
            pressure_left=0.1 * MPA, pressure_right=0.1 * MPA),
    "S": at(theta_left_deg=-180, theta_right_deg=180,
            pressure_left=0.1 * MPA, pressure_right=0.1 * MPA),
    "helix ccw": at(theta_left_deg=-90, theta_right_deg=-90,
                    pressure_left=0.2 * MPA, pressure_right=0.2 * MPA),
    "helix cw": at(theta_left_deg=90, theta_right_deg=90,
                   pressure_left=0.2 * MPA, pressure_right=0.2 * MPA),
    "spiral": at(theta_left_deg=-90, theta_right_deg=10,
                 pressure_left=0.2 * MPA, pressure_right=0.2 * MPA),
}

print(f"{'case':>10} {'classified as':>18} {'tip [mm]':>26} {'winding':>9} {'planar dev':>11}")
for name, control in gallery.items():
    label = classify_pattern(control, params).label
    state = solve_equilibrium(build_rig(params, control, opts), control, material, opts)
    m = shape_metrics(state)
    tip = ", ".join(f"{c * 1e3:6.1f}" for c in m.tip.as_tuple())
    flag = "" if state.converged else "  (not converged!)"
    print(
        f"{name:>10} {label:>18} ({tip}) {m.winding_angle_deg:8.1f} "
        f"{m.bend_plane_deviation * 1e3:9.1f} mm{flag}"
    )

print("\nJ-bend forward curvature from base to tip [1/m]:")
control = gallery["J"]
state = solve_equilibrium(build_rig(params, control, opts), control, material, opts)
profile = shape_metrics(state).curvature_profile
print(np.array2string(np.round(profile, 1), max_line_width=100))
print("(largest at the tip, fading toward the frame: the J signature)")
