"""Play the scripted grab-and-pour routine and print the step-by-step report.

The six-step script raises the trunk as a helix, aligns it with the
bottle, inflates into the spiral embrace, tightens, screws upward to lift
the bottle bottom, and finally rotates to pour.  The bottle is a
geometric ghost; the printed predicates are closest approach, wrap angle
about the bottle axis, and winding growth.

Run:  python demos/grab_and_pour.py        (about half a minute)
"""

import json

from trunksim import ActuatorParams
from trunksim.scenario import default_scenario_config, grab_pour_script, run_scenario

params = ActuatorParams()
config = default_scenario_config()
script = grab_pour_script(params, config.pour_twist_deg)

print("script:")
for i, step in enumerate(script, start=1):
    t = step.target
    print(
        f"  ({i}) {step.label:>9}: theta = ({t.theta_left_deg:6.1f}, {t.theta_right_deg:6.1f}) deg, "
        f"p = ({t.pressure_left / 1e6:.2f}, {t.pressure_right / 1e6:.2f}) MPa"
    )

print("\nsimulating...")
report = run_scenario(script, config.bottle, params=params)

print(f"{'step':>10} {'converged':>10} {'wrap':>8} {'winding':>9} {'axis dist':>10} {'check':>16}")
for r in report.steps:
    check = "-" if r.predicate is None else f"{r.predicate}: {'ok' if r.predicate_passed else 'FAILED'}"
    print(
        f"{r.label:>10} {str(r.converged):>10} {r.wrap_angle_deg:7.1f} {r.winding_angle_deg:9.1f} "
        f"{r.min_axis_distance * 1e3:8.1f} mm {check:>16}"
    )

print(f"\ncompleted: {report.completed}, all predicates passed: {report.all_predicates_passed}")
print("full report as shipped to the teleoperation console:")
print(json.dumps(report.to_dict(), indent=2)[:400] + " ...")
