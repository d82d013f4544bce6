"""Morphology descriptors of a solved rig configuration.

All metrics are computed on the mean centerline (average of the two
tubes), which is what the motion-pattern taxonomy describes: the tip
marker point, the signed forward-bending curvature profile, the winding
about the vertical axis through the base, and the distance from the
best-fit bending plane.

Winding sign convention: the sweep is accumulated traversing the
centerline from the base down to the tip and is positive when it turns
counter-clockwise seen from above (from +x toward +y).  Helix names
follow the opposite traversal (tip up to base), so a counter-clockwise
helix - the one produced by equal negative twists - has negative
winding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..arc import TipPosition
from .state import RigState

__all__ = ["ShapeMetrics", "shape_metrics", "marker_tip", "winding_angle_deg"]

# Points closer to the base axis than this fraction of the rest length have
# unstable azimuths and are left out of the winding sum.
AXIS_EXCLUSION_FRACTION = 0.02

# |winding| below this is treated as no chirality (planar shapes).
CHIRALITY_DEADBAND_DEG = 1.0


@dataclass(frozen=True)
class ShapeMetrics:
    tip: TipPosition
    curvature_profile: np.ndarray
    winding_angle_deg: float
    chirality: int
    bend_plane_deviation: float


def marker_tip(state: RigState) -> TipPosition:
    """Marker point: the mean centerline at the marker's material position.

    The tracked marker sits ``marker_offset`` up the actuator from the
    frame (10 mm short of the connector by default), so the tip used for
    comparisons against measured data is interpolated at that material
    fraction rather than taken at the connector midpoint.
    """
    center = state.mean_centerline()
    n = state.segment_count
    position = (state.params.marker_offset / state.params.rest_length) * n
    i0 = min(int(np.floor(position)), n - 1)
    w = position - i0
    point = center[i0] * (1.0 - w) + center[i0 + 1] * w
    return TipPosition(*point.tolist())


def _forward_curvature_profile(center: np.ndarray) -> np.ndarray:
    """Signed per-node curvature about the -x axis (positive = forward bend)."""
    e = np.diff(center, axis=0)
    lengths = np.linalg.norm(e, axis=1)
    t = e / lengths[:, None]
    ta, tb = t[:-1], t[1:]
    kb = 2.0 * np.cross(ta, tb) / (1.0 + np.sum(ta * tb, axis=1))[:, None]
    voronoi = (lengths[:-1] + lengths[1:]) / 2.0
    return -kb[:, 0] / voronoi


def winding_angle_deg(points: np.ndarray, axis_point: np.ndarray, exclusion_radius: float) -> float:
    """Azimuth sweep of a polyline about the vertical axis through ``axis_point``.

    Sums wrapped azimuth increments between consecutive points that lie
    farther than ``exclusion_radius`` from the axis; positive means the
    polyline order sweeps counter-clockwise seen from above.
    """
    rel = points[:, :2] - axis_point[None, :2]
    r = np.linalg.norm(rel, axis=1)
    keep = rel[r > exclusion_radius]
    if keep.shape[0] < 2:
        return 0.0
    az = np.arctan2(keep[:, 1], keep[:, 0])
    delta = np.diff(az)
    delta = (delta + np.pi) % (2.0 * np.pi) - np.pi
    return float(np.degrees(delta.sum()))


def _plane_deviation(points: np.ndarray) -> float:
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    normal = vt[-1]
    return float(np.max(np.abs(centered @ normal)))


def shape_metrics(state: RigState) -> ShapeMetrics:
    """Tip, curvature profile, winding, chirality and planarity of a state."""
    center = state.mean_centerline()
    profile = _forward_curvature_profile(center)
    winding = winding_angle_deg(
        center,
        axis_point=center[0],
        exclusion_radius=AXIS_EXCLUSION_FRACTION * state.params.rest_length,
    )
    if abs(winding) < CHIRALITY_DEADBAND_DEG:
        chirality = 0
    else:
        chirality = 1 if winding > 0.0 else -1
    return ShapeMetrics(
        tip=marker_tip(state),
        curvature_profile=profile,
        winding_angle_deg=winding,
        chirality=chirality,
        bend_plane_deviation=_plane_deviation(center),
    )
