"""Least-squares identification of the arc-model spring constant.

The C-bend tip coordinates depend on one unknown, the lumped spring
constant ``k``.  Given measured (pressure, tip) pairs, the best k
minimizes the summed squared y/z tip errors.  ``fit_spring_constant`` is
the production fitter (coarse scan plus bounded 1-D refinement);
``grid_search_k`` is a deliberately brute-force oracle that every fit is
validated against.  Measured x is carried along but never enters the
objective: the planar model pins x = 0 by symmetry.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .arc import TipPosition
from .params import MM, MPA, ActuatorParams

__all__ = [
    "Observation",
    "FitResult",
    "residual",
    "fit_spring_constant",
    "grid_search_k",
    "load_observations",
]

OBSERVATION_HEADER = ["p_MPa", "x_mm", "y_mm", "z_mm"]


@dataclass(frozen=True)
class Observation:
    """One measured tip at a given pressure (world frame, SI units)."""

    pressure: float
    tip: TipPosition

    def __post_init__(self):
        if not self.pressure > 0.0:
            raise ValueError("observation pressure must be positive")
        if not all(np.isfinite(self.tip.as_tuple())):
            raise ValueError("observation tip must be finite")


@dataclass(frozen=True)
class FitResult:
    """Fitted spring constant [N/m], objective value [m^2], per-point (dy, dz) [m]."""

    k: float
    residual: float
    per_observation_errors: tuple[tuple[float, float], ...]


def _predicted_yz(k, pressures, params: ActuatorParams, arc_length: float):
    """Arc-model tip y/z for an array of k values (vectorized over k and p)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))[:, None]
    p = np.asarray(pressures, dtype=float)
    d_i, d_o = params.inner_diameter, params.outer_diameter
    beta = p * np.pi * d_i**2 / (8.0 * k * d_o)
    radius = arc_length / beta + d_o / 2.0
    return radius * (1.0 - np.cos(beta)), radius * np.sin(beta)


def _errors(k, obs, params, arc_length):
    pressures = [o.pressure for o in obs]
    fy, fz = _predicted_yz(k, pressures, params, arc_length)
    dy = fy[0] - np.array([o.tip.y for o in obs])
    dz = fz[0] - np.array([o.tip.z for o in obs])
    return dy, dz


def residual(
    k: float,
    obs: list[Observation],
    params: ActuatorParams,
    arc_length: float | None = None,
) -> float:
    """Sum of squared y/z tip errors of the arc model at spring constant ``k`` [m^2]."""
    if not obs:
        raise ValueError("observation list is empty")
    if not k > 0.0:
        raise ValueError("spring constant must be positive")
    length = params.marker_offset if arc_length is None else arc_length
    dy, dz = _errors(k, obs, params, length)
    return float(np.sum(dy**2) + np.sum(dz**2))


def _result_at(k, obs, params, arc_length) -> FitResult:
    dy, dz = _errors(k, obs, params, arc_length)
    res = float(np.sum(dy**2) + np.sum(dz**2))
    return FitResult(k=float(k), residual=res, per_observation_errors=tuple(zip(dy.tolist(), dz.tolist())))


def grid_search_k(
    obs: list[Observation],
    params: ActuatorParams,
    bounds: tuple[float, float] = (50.0, 500.0),
    step: float = 0.05,
    arc_length: float | None = None,
) -> FitResult:
    """Exhaustive scan of the residual over a uniform k grid.

    Evaluates every grid point from ``k_lo`` upward in ``step`` increments
    (both bounds always included) and returns the argmin.  Slow by design;
    this is the ground truth that ``fit_spring_constant`` must agree with.
    """
    if not obs:
        raise ValueError("observation list is empty")
    k_lo, k_hi = bounds
    if not 0.0 < k_lo < k_hi:
        raise ValueError("need 0 < k_lo < k_hi")
    if not step > 0.0:
        raise ValueError("step must be positive")
    length = params.marker_offset if arc_length is None else arc_length
    grid = np.arange(k_lo, k_hi, step)
    if grid[-1] < k_hi:
        grid = np.append(grid, k_hi)
    pressures = [o.pressure for o in obs]
    fy, fz = _predicted_yz(grid, pressures, params, length)
    y = np.array([o.tip.y for o in obs])
    z = np.array([o.tip.z for o in obs])
    res = np.sum((fy - y) ** 2, axis=1) + np.sum((fz - z) ** 2, axis=1)
    if not np.any(np.isfinite(res)):
        raise ValueError("residual is non-finite over the whole grid")
    return _result_at(grid[int(np.argmin(res))], obs, params, length)


def fit_spring_constant(
    obs: list[Observation],
    params: ActuatorParams,
    bounds: tuple[float, float] = (50.0, 500.0),
    tol: float = 0.05,
    arc_length: float | None = None,
) -> FitResult:
    """Global 1-D minimization of the tip residual over ``bounds``.

    A dense coarse scan locates the best bracket, then a bounded scalar
    minimizer refines it to ``tol``.  The result is required (and tested)
    to agree with :func:`grid_search_k` to within max(tol, grid step).
    """
    if not obs:
        raise ValueError("observation list is empty")
    k_lo, k_hi = bounds
    if not 0.0 < k_lo < k_hi:
        raise ValueError("need 0 < k_lo < k_hi")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    length = params.marker_offset if arc_length is None else arc_length

    coarse = np.linspace(k_lo, k_hi, 1025)
    pressures = [o.pressure for o in obs]
    fy, fz = _predicted_yz(coarse, pressures, params, length)
    y = np.array([o.tip.y for o in obs])
    z = np.array([o.tip.z for o in obs])
    res = np.sum((fy - y) ** 2, axis=1) + np.sum((fz - z) ** 2, axis=1)
    if not np.any(np.isfinite(res)):
        raise ValueError("residual is non-finite over the whole bracket")
    best = int(np.argmin(res))
    lo = coarse[max(best - 1, 0)]
    hi = coarse[min(best + 1, len(coarse) - 1)]
    if lo == hi:  # single-point bracket can only happen with degenerate bounds
        return _result_at(lo, obs, params, length)

    opt = minimize_scalar(
        lambda k: residual(k, obs, params, arc_length=length),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": tol / 4.0},
    )
    candidates = [float(opt.x), float(coarse[best])]
    k_best = min(candidates, key=lambda k: residual(k, obs, params, arc_length=length))
    return _result_at(k_best, obs, params, length)


def load_observations(path: str | Path) -> list[Observation]:
    """Read (pressure, tip) pairs from a ``p_MPa,x_mm,y_mm,z_mm`` CSV file."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: missing header row") from None
        if [h.strip() for h in header] != OBSERVATION_HEADER:
            raise ValueError(f"{path}: expected header {','.join(OBSERVATION_HEADER)}")
        obs = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                p_mpa, x_mm, y_mm, z_mm = (float(cell) for cell in row)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
            obs.append(
                Observation(
                    pressure=p_mpa * MPA,
                    tip=TipPosition(x_mm * MM, y_mm * MM, z_mm * MM),
                )
            )
    if not obs:
        raise ValueError(f"{path}: no samples")
    return obs
