"""Command-line entry points: fit-k, predict, simulate, compare, scenario, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .arc import c_bend_tip, linear_extension_length
from .fitting import fit_spring_constant, grid_search_k, load_observations
from .measurement import compare_trajectories, load_trajectory
from .params import MM, MPA, ActuatorParams, ControlInput, load_params

__all__ = ["main", "build_parser"]


def _load_actuator(args) -> ActuatorParams:
    if getattr(args, "params", None):
        return load_params(args.params)
    return ActuatorParams()


def _emit_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is None or path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def _cmd_fit_k(args) -> int:
    params = _load_actuator(args)
    try:
        obs = load_observations(args.data)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    arc_length = args.l0_mm * MM
    fit = fit_spring_constant(obs, params, bounds=(args.kmin, args.kmax), tol=args.tol, arc_length=arc_length)
    oracle = grid_search_k(obs, params, bounds=(args.kmin, args.kmax), step=args.tol, arc_length=arc_length)

    print(f"fitted spring constant k = {fit.k:.3f} N/m (grid oracle {oracle.k:.3f} N/m)")
    print(f"residual = {fit.residual:.6e} m^2")
    print(f"{'p [MPa]':>8} {'dy [mm]':>9} {'dz [mm]':>9}")
    for o, (dy, dz) in zip(obs, fit.per_observation_errors):
        print(f"{o.pressure / MPA:8.3f} {dy / MM:9.2f} {dz / MM:9.2f}")
    _emit_json(
        {
            "k_n_per_m": fit.k,
            "grid_oracle_k_n_per_m": oracle.k,
            "residual_m2": fit.residual,
            "per_observation_errors_mm": [[dy / MM, dz / MM] for dy, dz in fit.per_observation_errors],
            "l0_mm": args.l0_mm,
            "bounds_n_per_m": [args.kmin, args.kmax],
        },
        args.json,
    )
    return 0


def _cmd_predict(args) -> int:
    params = _load_actuator(args)
    p = args.p_mpa * MPA
    if args.pattern == "linear":
        length = linear_extension_length(p, params)
        print(f"extended length = {length / MM:.2f} mm")
        _emit_json({"pattern": "linear", "p_mpa": args.p_mpa, "length_mm": length / MM}, args.json)
        return 0
    if args.k is None:
        print("error: --k is required for the c pattern", file=sys.stderr)
        return 1
    tip = c_bend_tip(p, args.k, params, arc_length=args.l0_mm * MM)
    print(f"tip = ({tip.x / MM:.2f}, {tip.y / MM:.2f}, {tip.z / MM:.2f}) mm")
    _emit_json(
        {
            "pattern": "c",
            "p_mpa": args.p_mpa,
            "k_n_per_m": args.k,
            "l0_mm": args.l0_mm,
            "tip_mm": [tip.x / MM, tip.y / MM, tip.z / MM],
        },
        args.json,
    )
    return 0


def _load_toml(path: str) -> dict:
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _cmd_simulate(args) -> int:
    from .rod import MaterialParams, SolverOptions, build_rig, marker_tip, simulate_ramp
    from .rod import load_solver_options

    try:
        doc = _load_toml(args.config)
    except OSError as exc:
        print(f"error: cannot read config {args.config!r}: {exc}", file=sys.stderr)
        return 1

    params = (
        ActuatorParams.from_external(doc["actuator"]) if "actuator" in doc else ActuatorParams()
    )
    opts = load_solver_options(args.config) if "solver" in doc else SolverOptions()
    control = ControlInput.from_external(doc.get("control", {"thread_length_left_mm": params.rest_length / MM, "thread_length_right_mm": params.rest_length / MM}))

    ramp_doc = doc.get("ramp", {})
    steps = int(ramp_doc.get("steps", 10))
    p_end = [float(v) * MPA for v in ramp_doc.get("to_mpa", [0.1, 0.1])]
    schedule = [(p_end[0] * i / steps, p_end[1] * i / steps) for i in range(1, steps + 1)]

    rig = build_rig(params, control, opts)
    result = simulate_ramp(schedule, control, rig, MaterialParams(), opts)

    out = Path(args.out) if args.out else Path("centerlines.jsonl")
    with open(out, "w", encoding="utf-8") as fh:
        for idx, state in enumerate(result.states):
            tip = marker_tip(state)
            record = {
                "step": idx,
                "p_left_mpa": state.control.pressure_left / MPA,
                "p_right_mpa": state.control.pressure_right / MPA,
                "nodes_mm": np.round(state.positions / MM, 4).reshape(-1).tolist(),
                "tip_mm": [tip.x / MM, tip.y / MM, tip.z / MM],
                "converged": bool(state.converged),
            }
            fh.write(json.dumps(record) + "\n")
    print(f"simulated {len(result.states)} states -> {out} (completed={result.completed})")
    return 0 if result.completed else 1


def _cmd_compare(args) -> int:
    try:
        model = load_trajectory(args.model)
        measured = load_trajectory(args.measured)
        metrics = compare_trajectories(model, measured)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"rms = {metrics.rms / MM:.2f} mm, max = {metrics.max_abs / MM:.2f} mm")
    print(
        "per-axis rms = ({:.2f}, {:.2f}, {:.2f}) mm".format(
            *(v / MM for v in metrics.per_axis_rms)
        )
    )
    _emit_json(
        {
            "rms_mm": metrics.rms / MM,
            "max_abs_mm": metrics.max_abs / MM,
            "per_axis_rms_mm": [v / MM for v in metrics.per_axis_rms],
        },
        args.json,
    )
    if args.max_rms_mm is not None and metrics.rms / MM > args.max_rms_mm:
        print(f"rms exceeds threshold {args.max_rms_mm} mm", file=sys.stderr)
        return 1
    if args.max_abs_mm is not None and metrics.max_abs / MM > args.max_abs_mm:
        print(f"max error exceeds threshold {args.max_abs_mm} mm", file=sys.stderr)
        return 1
    return 0


def _cmd_scenario(args) -> int:
    from .rod import MaterialParams, SolverOptions
    from .scenario import default_scenario_config, grab_pour_script, load_scenario_config, run_scenario

    params = _load_actuator(args)
    config = load_scenario_config(args.config) if args.config else default_scenario_config()
    opts = SolverOptions(segment_count=args.segments)
    script = grab_pour_script(params, config.pour_twist_deg)
    report = run_scenario(script, config.bottle, params=params, material=MaterialParams(), opts=opts)

    print(f"{'step':>10} {'conv':>5} {'wrap[deg]':>10} {'winding[deg]':>13} {'predicate':>10} {'ok':>5}")
    for r in report.steps:
        ok = "-" if r.predicate_passed is None else str(r.predicate_passed)
        print(
            f"{r.label:>10} {str(r.converged):>5} {r.wrap_angle_deg:10.1f} "
            f"{r.winding_angle_deg:13.1f} {str(r.predicate or '-'):>10} {ok:>5}"
        )
    _emit_json(report.to_dict(), args.json)
    return 0 if report.completed and report.all_predicates_passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        host=args.host,
        port=args.port,
        params_path=args.params,
        solver_options_path=args.solver_opts,
        scenario_config_path=args.scenario_config,
        storage_root=args.storage_root,
        segment_count=args.segments,
    )
    service = config.build_service()
    app = create_app(service, console_dir=args.console)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trunksim",
        description="Two-tube pneumatic trunk actuator: fitting, prediction, simulation, teleoperation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-k", help="fit the arc-model spring constant to measured tips")
    p.add_argument("--data", required=True, help="CSV file with header p_MPa,x_mm,y_mm,z_mm")
    p.add_argument("--l0-mm", type=float, default=290.0, help="effective arc length [mm]")
    p.add_argument("--kmin", type=float, default=50.0)
    p.add_argument("--kmax", type=float, default=500.0)
    p.add_argument("--tol", type=float, default=0.05, help="fit tolerance / oracle grid step [N/m]")
    p.add_argument("--params", help="actuator parameter TOML file")
    p.add_argument("--json", help="write the machine-readable result here ('-' for stdout)")
    p.set_defaults(func=_cmd_fit_k)

    p = sub.add_parser("predict", help="closed-form tip or length prediction")
    p.add_argument("--pattern", choices=["c", "linear"], required=True)
    p.add_argument("--p-mpa", type=float, required=True)
    p.add_argument("--k", type=float, help="spring constant [N/m] (c pattern)")
    p.add_argument("--l0-mm", type=float, default=290.0)
    p.add_argument("--params", help="actuator parameter TOML file")
    p.add_argument("--json", help="write the machine-readable result here ('-' for stdout)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("simulate", help="run a pressure ramp on the rig simulator")
    p.add_argument("--config", required=True, help="TOML config (actuator/solver/control/ramp)")
    p.add_argument("--out", help="centerline JSONL output path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="score a model trajectory against a measured one")
    p.add_argument("--model", required=True, help="trajectory CSV (t_s,x,y,z,frame)")
    p.add_argument("--measured", required=True, help="trajectory CSV (t_s,x,y,z,frame)")
    p.add_argument("--max-rms-mm", type=float, help="fail when the rms exceeds this")
    p.add_argument("--max-abs-mm", type=float, help="fail when the max error exceeds this")
    p.add_argument("--json", help="write the machine-readable result here ('-' for stdout)")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("scenario", help="run the scripted grab-and-pour task")
    p.add_argument("--config", help="scenario TOML (bottle pose, pour twist)")
    p.add_argument("--params", help="actuator parameter TOML file")
    p.add_argument("--segments", type=int, default=30)
    p.add_argument("--json", help="write the report here ('-' for stdout)")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("serve", help="start the HTTP/WebSocket teleoperation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8800)
    p.add_argument("--params", help="actuator parameter TOML file")
    p.add_argument("--solver-opts", help="solver options TOML file")
    p.add_argument("--scenario-config", help="scenario TOML file")
    p.add_argument("--storage-root", default=None, help="run-log directory (default $TRUNKSIM_RUNS or ./runs)")
    p.add_argument("--segments", type=int, default=30)
    p.add_argument("--console", help="directory of console static files to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    import os

    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "storage_root", None) is None and args.command == "serve":
        args.storage_root = os.environ.get("TRUNKSIM_RUNS", "runs")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
