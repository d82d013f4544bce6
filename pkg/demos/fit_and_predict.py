"""Identify the arc-model spring constant and reproduce the bench tips.

Walks the closed-form side of the toolkit: load the measured C-bend tip
table, fit the one free coefficient k by least squares (validated against
the brute-force grid), and compare the resulting tip predictions with the
measurements.

Run:  python demos/fit_and_predict.py
"""

import numpy as np

from trunksim import (
    ActuatorParams,
    c_bend_tip,
    compare_trajectories,
    fit_spring_constant,
    grid_search_k,
    linear_extension_length,
    load_observations,
)
from trunksim.measurement import TrajectorySeries

params = ActuatorParams()
obs = load_observations("data/table1.csv")
print(f"loaded {len(obs)} (pressure, tip) pairs")

fit = fit_spring_constant(obs, params, bounds=(50.0, 500.0), tol=0.05)
oracle = grid_search_k(obs, params, bounds=(50.0, 500.0), step=0.05)
print(f"fitted k = {fit.k:.2f} N/m  (grid oracle: {oracle.k:.2f} N/m)")
print(f"objective = {fit.residual * 1e6:.1f} mm^2-equivalent")

times = np.arange(1.0, len(obs) + 1.0)
predicted = TrajectorySeries(
    times=times,
    points=np.array([c_bend_tip(o.pressure, fit.k, params).as_tuple() for o in obs]),
    frame="world",
)
measured = TrajectorySeries(
    times=times, points=np.array([o.tip.as_tuple() for o in obs]), frame="world"
)
metrics = compare_trajectories(predicted, measured)
print(f"tip agreement: rms {metrics.rms * 1e3:.1f} mm, max {metrics.max_abs * 1e3:.1f} mm")

print("\npressure sweep of the two closed-form models:")
print(f"{'p [MPa]':>8} {'straight length [mm]':>22} {'C-bend tip y,z [mm]':>24}")
for p_mpa in (0.05, 0.10, 0.15, 0.20):
    length = linear_extension_length(p_mpa * 1e6, params)
    tip = c_bend_tip(p_mpa * 1e6, fit.k, params)
    print(f"{p_mpa:8.2f} {length * 1e3:22.1f} {tip.y * 1e3:12.1f}, {tip.z * 1e3:6.1f}")
