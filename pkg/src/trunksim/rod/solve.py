"""Quasi-static equilibrium solves with control continuation.

A solve walks the control linearly from the state's current command to
the target in ``pressure_ramp_steps`` increments, minimizing the total
energy at each increment with warm starts.  Continuation keeps the
solver on the physical equilibrium branch; jumping straight to a high
pressure can fall into crumpled local minima.

Each increment is minimized by a damped Newton iteration (dense Hessian
by automatic differentiation, Levenberg regularization, monotone energy
acceptance) with an L-BFGS fallback when the Newton step stalls far from
a minimum.  The problem is small (a few hundred coordinates) but poorly
conditioned - stiff penalties next to soft bending modes - which Newton
handles and first-order methods crawl on.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize

from ..measurement import TrajectorySeries
from ..params import ControlInput
from .energy import RodModel, get_model
from .state import MaterialParams, RigState, SolverOptions, connector_pose_from_positions, refresh_derived
from . import metrics as _metrics

__all__ = ["solve_equilibrium", "simulate_ramp", "RampResult"]


def _lerp_control(a: ControlInput, b: ControlInput, f: float) -> ControlInput:
    if f >= 1.0:
        return b
    mix = lambda u, v: u + (v - u) * f
    return ControlInput(
        theta_left_deg=mix(a.theta_left_deg, b.theta_left_deg),
        theta_right_deg=mix(a.theta_right_deg, b.theta_right_deg),
        pressure_left=mix(a.pressure_left, b.pressure_left),
        pressure_right=mix(a.pressure_right, b.pressure_right),
        thread_length_left=mix(a.thread_length_left, b.thread_length_left),
        thread_length_right=mix(a.thread_length_right, b.thread_length_right),
    )


def _lbfgs(model: RodModel, x, args, gtol, maxiter, history=None):
    def fun(xk):
        v, g = model.value_and_grad(xk, args)
        return v, g

    callback = None
    if history is not None:
        callback = lambda xk: history.append(model.energy(xk, args))
    res = minimize(
        fun,
        x,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={
            "maxiter": maxiter,
            "maxfun": 10 * maxiter,
            "ftol": 1e-15,
            "gtol": gtol,
            "maxcor": 20,
            "maxls": 40,
        },
    )
    return res.x, int(res.nit)


def _damped_newton(model: RodModel, x, args, gtol, maxiter, history=None):
    """Levenberg-damped Newton with monotone energy acceptance."""
    f, g = model.value_and_grad(x, args)
    lam = 0.0
    iterations = 0
    max_step = model.params.rest_length  # catapult guard
    while iterations < maxiter:
        if not np.isfinite(f):
            break
        if np.max(np.abs(g)) <= gtol:
            break
        H = model.hessian(x, args)
        eye = np.eye(H.shape[0])
        accepted = False
        for _ in range(60):
            try:
                chol = sla.cho_factor(H + lam * eye, check_finite=False)
                dx = sla.cho_solve(chol, -g, check_finite=False)
            except np.linalg.LinAlgError:
                lam = max(lam * 10.0, 1e-6)
                continue
            if np.linalg.norm(dx) > max_step:
                lam = max(lam * 10.0, 1e-6)
                continue
            f_new, g_new = model.value_and_grad(x + dx, args)
            if np.isfinite(f_new) and f_new <= f:
                x, f, g = x + dx, f_new, g_new
                lam = lam / 10.0 if lam > 1e-12 else 0.0
                accepted = True
                if history is not None:
                    history.append(f)
                break
            lam = max(lam * 10.0, 1e-8)
        iterations += 1
        if not accepted:
            break
    return x, f, g, iterations


def _minimize_increment(model, x, args, gtol, maxiter, history=None):
    """One fixed-control minimization: Newton first, L-BFGS rescue if it stalls."""
    x, f, g, iterations = _damped_newton(model, x, args, gtol, min(maxiter, 50), history=history)
    while np.max(np.abs(g)) > gtol and iterations < maxiter:
        # Newton stalled (indefinite region or the thread-activation kink);
        # let L-BFGS walk downhill, then resume Newton.
        x, nit = _lbfgs(model, x, args, gtol=gtol, maxiter=min(maxiter - iterations, 400), history=history)
        iterations += max(nit, 1)
        if iterations >= maxiter:
            break
        x, f, g, nit = _damped_newton(model, x, args, gtol, maxiter - iterations, history=history)
        iterations += max(nit, 1)
    return x, iterations


def solve_equilibrium(
    initial: RigState,
    control: ControlInput,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
    on_step: Callable[[int, RigState], None] | None = None,
    record_history: bool = False,
) -> RigState:
    """Minimize the total energy at ``control``, continuing from ``initial``.

    Returns a new state; ``initial`` is untouched.  The convergence flag is
    set only if the final gradient infinity-norm is within
    ``opts.gradient_tolerance``; a non-converged result is returned as-is
    (flag unset) so callers can inspect the partial state.

    Intermediate ramp increments only need to track the equilibrium
    branch, so they are solved to a relaxed tolerance; the final increment
    is polished to the full tolerance.  With ``record_history=True`` the
    accepted energy values of every increment end up in
    ``diagnostics["energy_history"]`` (one non-increasing array each).
    """
    params = initial.params
    control.validate(params)
    material = material or MaterialParams()
    opts = opts or SolverOptions(segment_count=initial.segment_count)
    if opts.segment_count != initial.segment_count:
        raise ValueError("solver options segment_count does not match the state")
    model = get_model(params, material, opts)

    start = initial.control
    if start is None:
        start = replace(control, pressure_left=0.0, pressure_right=0.0)

    x = model.pack(initial.positions)
    n_steps = opts.pressure_ramp_steps
    histories: list[np.ndarray] = []
    total_iterations = 0
    loose_gtol = max(opts.gradient_tolerance, 1e-3)
    x_prev = None

    for step_index in range(1, n_steps + 1):
        final = step_index == n_steps
        current = _lerp_control(start, control, step_index / n_steps)
        args = model.control_args(current)
        history = None
        # secant predictor along the continuation branch
        x_start = x if x_prev is None else x + (x - x_prev)
        if not np.isfinite(model.energy(x_start, args)):
            x_start = x
        if record_history:
            history = [model.energy(x_start, args)]
        x_new, nit = _minimize_increment(
            model,
            x_start,
            args,
            gtol=opts.gradient_tolerance if final else loose_gtol,
            maxiter=opts.max_iterations,
            history=history,
        )
        x_prev, x = x, x_new
        total_iterations += nit
        if record_history:
            histories.append(np.asarray(history))
        if on_step is not None:
            on_step(step_index, _state_from(model, x, current, material, opts, False, {}))

    args = model.control_args(control)
    grad = model.gradient(x, args)
    grad_norm = float(np.max(np.abs(grad)))
    energy = model.energy(x, args)
    converged = bool(np.isfinite(energy)) and grad_norm <= opts.gradient_tolerance

    terms, extras = model.term_values(x, args)
    diagnostics = {
        "total_energy": energy,
        "energy_terms": terms,
        "thread_path_lengths": extras["thread_path_lengths"],
        "thread_tensions": 2.0 * opts.thread_weight * extras["thread_violations"],
        "curvature": np.sqrt(extras["curvature_sq"]) / np.asarray(model._voronoi)[None, :],
        "gradient_inf_norm": grad_norm,
        "iterations": total_iterations,
        "energy_history": histories,
    }
    return _state_from(model, x, control, material, opts, converged, diagnostics)


def _state_from(model, x, control, material, opts, converged, diagnostics) -> RigState:
    positions = model.unpack(x)
    state = RigState(
        params=model.params,
        control=control,
        positions=positions,
        segment_frames=np.empty((2, model.n_segments, 3, 3)),
        connector=connector_pose_from_positions(positions),
        converged=converged,
        diagnostics=diagnostics,
    )
    refresh_derived(state)
    return state


@dataclass
class RampResult:
    """States and marker-tip trajectory of a pressure schedule.

    ``completed`` is False when a step failed to converge; ``states`` then
    holds everything up to and including the failed step and
    ``failed_step`` is its zero-based index.
    """

    states: list
    trajectory: TrajectorySeries
    completed: bool
    failed_step: int | None


def simulate_ramp(
    schedule: Sequence[tuple[float, float]],
    base_control: ControlInput,
    initial: RigState,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
    allow_non_monotone: bool = False,
) -> RampResult:
    """Solve a sequence of (pressure_left, pressure_right) targets in order.

    Twists and thread lengths come from ``base_control``.  Each entry is
    solved directly (single continuation increment) warm-started from the
    previous state: the schedule itself is the pressure continuation.
    Non-monotone schedules are rejected unless explicitly allowed.
    """
    if len(schedule) == 0:
        raise ValueError("schedule is empty")
    arr = np.asarray(schedule, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("schedule must be a sequence of (p_left, p_right) pairs")
    if not allow_non_monotone:
        for j, name in ((0, "left"), (1, "right")):
            d = np.diff(arr[:, j])
            if d.size and not (np.all(d >= 0.0) or np.all(d <= 0.0)):
                raise ValueError(
                    f"{name} pressure schedule is not monotone; pass allow_non_monotone=True"
                )

    opts = opts or SolverOptions(segment_count=initial.segment_count)
    step_opts = replace(opts, pressure_ramp_steps=1)
    states = []
    tips = []
    state = initial
    failed_step = None
    for idx, (p_left, p_right) in enumerate(arr):
        target = replace(base_control, pressure_left=float(p_left), pressure_right=float(p_right))
        state = solve_equilibrium(state, target, material=material, opts=step_opts)
        states.append(state)
        tips.append(_metrics.marker_tip(state).as_tuple())
        if not state.converged:
            failed_step = idx
            break
    trajectory = TrajectorySeries(
        times=np.arange(len(states), dtype=float),
        points=np.asarray(tips),
        frame="world",
    )
    return RampResult(
        states=states,
        trajectory=trajectory,
        completed=failed_step is None,
        failed_step=failed_step,
    )
