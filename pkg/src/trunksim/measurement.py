"""Measured-trajectory ingestion, smoothing, frame conversion, and scoring.

Tip trajectories are recorded by a depth camera mounted to the right of
the rig.  The camera frame has x' pointing backward, y' downward and z'
leftward; the world frame has x right, y forward, z down with its origin
at the bottom center of the motor frame.  The conversion is the fixed
axis permutation (x, y, z) = (-z', -x', y') plus the camera position.

Raw tracks are noisy (stereo depth error up to ~2 %), so a discrete
Gaussian filter is applied per coordinate before any comparison; the
filter runs on whichever frame the data was recorded in, before the
world-frame conversion.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "CameraExtrinsics",
    "TrajectorySeries",
    "TrajectoryMetrics",
    "camera_to_world",
    "world_to_camera",
    "transform_series_to_world",
    "gaussian_smooth",
    "load_trajectory",
    "save_trajectory",
    "compare_trajectories",
    "perturb_depth",
    "CAMERA_TO_WORLD_ROTATION",
]

TRAJECTORY_HEADER = ["t_s", "x", "y", "z", "frame"]

# Columns act on camera-frame vectors (x' backward, y' downward, z' leftward).
CAMERA_TO_WORLD_ROTATION = np.array(
    [
        [0.0, 0.0, -1.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class CameraExtrinsics:
    """Camera origin expressed in the world frame [m]; the rotation is fixed."""

    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.translation) != 3 or not all(map(math.isfinite, self.translation)):
            raise ValueError("translation must be three finite components")


@dataclass(frozen=True)
class TrajectorySeries:
    """Time-stamped 3-D points sharing one coordinate frame.

    ``times`` are strictly increasing seconds; ``points`` is an (n, 3)
    array in meters; ``frame`` is either "camera" or "world".
    """

    times: np.ndarray
    points: np.ndarray
    frame: str

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        if times.ndim != 1 or points.shape != (times.size, 3):
            raise ValueError("times must be (n,) and points (n, 3)")
        if times.size == 0:
            raise ValueError("no samples")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(points)):
            raise ValueError("samples must be finite")
        if np.any(np.diff(times) <= 0.0):
            bad = int(np.argmax(np.diff(times) <= 0.0)) + 1
            raise ValueError(f"timestamps must be strictly increasing (sample {bad})")
        if self.frame not in ("camera", "world"):
            raise ValueError("frame must be 'camera' or 'world'")

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class TrajectoryMetrics:
    """Pointwise agreement between two world-frame trajectories [m]."""

    rms: float
    max_abs: float
    per_axis_rms: tuple[float, float, float]


def camera_to_world(point, extrinsics: CameraExtrinsics) -> np.ndarray:
    """Map one camera-frame point to the world frame."""
    p = np.asarray(point, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise ValueError("point must be a finite 3-vector")
    return CAMERA_TO_WORLD_ROTATION @ p + np.asarray(extrinsics.translation)


def world_to_camera(point, extrinsics: CameraExtrinsics) -> np.ndarray:
    """Inverse of :func:`camera_to_world`."""
    p = np.asarray(point, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise ValueError("point must be a finite 3-vector")
    return CAMERA_TO_WORLD_ROTATION.T @ (p - np.asarray(extrinsics.translation))


def transform_series_to_world(series: TrajectorySeries, extrinsics: CameraExtrinsics) -> TrajectorySeries:
    """Convert a camera-frame series to the world frame (world input passes through)."""
    if series.frame == "world":
        return series
    pts = series.points @ CAMERA_TO_WORLD_ROTATION.T + np.asarray(extrinsics.translation)
    return TrajectorySeries(times=series.times.copy(), points=pts, frame="world")


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    taps = np.exp(-0.5 * (np.arange(-radius, radius + 1) / sigma) ** 2)
    return taps / taps.sum()


def _reflect_indices(n: int, radius: int) -> np.ndarray:
    """Mirror-style reflection indices for positions -radius .. n-1+radius."""
    idx = np.arange(-radius, n + radius)
    if n == 1:
        return np.zeros_like(idx)
    period = 2 * (n - 1)
    idx = np.abs(idx) % period
    return np.where(idx >= n, period - idx, idx)


def gaussian_smooth(series: TrajectorySeries, sigma: float) -> TrajectorySeries:
    """Per-coordinate convolution with a truncated discrete Gaussian.

    The kernel extends to ceil(3*sigma) taps each side and is normalized
    to unit sum, so constants pass through unchanged; boundaries use
    mirror reflection.  Timestamps are untouched.
    """
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    kernel = _gaussian_kernel(sigma)
    radius = (kernel.size - 1) // 2
    idx = _reflect_indices(len(series), radius)
    padded = series.points[idx]
    smoothed = np.column_stack(
        [np.convolve(padded[:, axis], kernel, mode="valid") for axis in range(3)]
    )
    return TrajectorySeries(times=series.times.copy(), points=smoothed, frame=series.frame)


def load_trajectory(path: str | Path) -> TrajectorySeries:
    """Read a ``t_s,x,y,z,frame`` CSV (coordinates in mm) into an SI series."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: missing header row") from None
        if [h.strip() for h in header] != TRAJECTORY_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TRAJECTORY_HEADER)}")
        times, points, frames = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(row)}")
            try:
                t = float(row[0])
                xyz = [float(cell) * 1e-3 for cell in row[1:4]]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
            frame = row[4].strip()
            if frame not in ("camera", "world"):
                raise ValueError(f"{path}:{lineno}: unknown frame {frame!r}")
            if times and t <= times[-1]:
                raise ValueError(f"{path}:{lineno}: timestamp not increasing")
            times.append(t)
            points.append(xyz)
            frames.append(frame)
    if not times:
        raise ValueError(f"{path}: no samples")
    if len(set(frames)) > 1:
        raise ValueError(f"{path}: mixed coordinate frames")
    return TrajectorySeries(times=np.array(times), points=np.array(points), frame=frames[0])


def save_trajectory(series: TrajectorySeries, path: str | Path) -> None:
    """Write a series in the ``t_s,x,y,z,frame`` mm convention."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_HEADER)
        for t, p in zip(series.times, series.points):
            writer.writerow([repr(float(t))] + [repr(float(c * 1e3)) for c in p] + [series.frame])


def compare_trajectories(model: TrajectorySeries, measured: TrajectorySeries) -> TrajectoryMetrics:
    """Pointwise tip errors of a model series against a measured one.

    Both series must be in the world frame.  Errors are evaluated at the
    measured timestamps; the model is linearly interpolated when the
    timestamps differ.  Measured times outside the model's span are a
    hard error (no extrapolation).
    """
    if model.frame != "world" or measured.frame != "world":
        raise ValueError("both trajectories must be in the world frame")
    if measured.times[0] < model.times[0] - 1e-12 or measured.times[-1] > model.times[-1] + 1e-12:
        raise ValueError("trajectories do not overlap in time")
    if model.times.shape == measured.times.shape and np.array_equal(model.times, measured.times):
        resampled = model.points
    else:
        resampled = np.column_stack(
            [np.interp(measured.times, model.times, model.points[:, axis]) for axis in range(3)]
        )
    diff = resampled - measured.points
    dist = np.linalg.norm(diff, axis=1)
    return TrajectoryMetrics(
        rms=float(np.sqrt(np.mean(dist**2))),
        max_abs=float(np.max(dist)),
        per_axis_rms=tuple(np.sqrt(np.mean(diff**2, axis=0)).tolist()),
    )


def perturb_depth(series: TrajectorySeries, fraction: float = 0.02, seed: int | None = None) -> TrajectorySeries:
    """Scale each camera-frame point radially by a uniform factor in [1-f, 1+f].

    Mimics the stereo depth error of the tracker for robustness tests.
    Only meaningful for camera-frame data (distances are measured from
    the camera origin).
    """
    if series.frame != "camera":
        raise ValueError("depth perturbation applies to camera-frame series")
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must be in [0, 1)")
    rng = np.random.default_rng(seed)
    scale = 1.0 + rng.uniform(-fraction, fraction, size=len(series))
    return TrajectorySeries(
        times=series.times.copy(),
        points=series.points * scale[:, None],
        frame="camera",
    )
