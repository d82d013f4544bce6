"""Closed-form statics of the trunk: linear extension and the planar C bend.

With both twists at zero the two tubes behave identically, so a single
tube is analyzed.  When the threads are slack the trunk extends straight;
the extended length follows from the axial force balance between bore
pressure, weight, and the elastic traction of the tube wall.  When the
threads are taut the front edge cannot extend, and the trunk wraps into a
circular arc in the y-z plane whose inner edge keeps the thread length.
Gravity is ignored in the arc model; it only matters for the discretized
rig solver.

The one free coefficient of the arc model is the lumped spring constant
``k`` of the tube traction, identified from measured tip coordinates (see
:mod:`trunksim.fitting`).  Tip coordinates use the marker position (290 mm
by default) as the effective arc length, because measured tips track the
marker rather than the connector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import ActuatorParams

__all__ = [
    "ArcGeometry",
    "TipPosition",
    "linear_extension_length",
    "extension_within_slack",
    "c_bend_geometry",
    "c_bend_tip",
    "thread_azimuth",
]


@dataclass(frozen=True)
class ArcGeometry:
    """Planar C-bend arc: center angle [rad], inner diameter [m], thread tension [N]."""

    center_angle: float
    inner_diameter: float
    thread_tension: float

    @property
    def is_degenerate(self) -> bool:
        """True for the straight zero-pressure configuration."""
        return self.center_angle == 0.0


@dataclass(frozen=True)
class TipPosition:
    """Tip point in the world frame (x right, y forward, z down) [m]."""

    x: float
    y: float
    z: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def _check_pressure(p: float) -> None:
    if not math.isfinite(p) or p < 0.0:
        raise ValueError("pressure must be finite and non-negative")


def linear_extension_length(p: float, params: ActuatorParams) -> float:
    """Length of the trunk under pressure ``p`` with slack threads [m].

    Balances the weight of the actuation part and the bore pressure of the
    two tubes against the elastic traction of both tube walls:

        L = ((2*m*g + p*pi*d_i^2) / (E*pi*(d_o^2 - d_i^2)) + 1) * L_0

    Strictly increasing in ``p``.
    """
    _check_pressure(p)
    d_i, d_o = params.inner_diameter, params.outer_diameter
    if d_o <= d_i:
        raise ValueError("degenerate geometry: outer diameter must exceed inner")
    num = 2.0 * params.actuation_mass * params.gravity + p * math.pi * d_i**2
    den = params.youngs_modulus * math.pi * (d_o**2 - d_i**2)
    return (num / den + 1.0) * params.rest_length


def extension_within_slack(p: float, slack: float, params: ActuatorParams) -> bool:
    """Whether the pressurized length stays below the thread-limited bound.

    The threads are let out by ``slack`` on both sides; pure linear
    extension requires L < L_0 + slack, otherwise the threads engage and
    the trunk starts to bend.
    """
    if slack < 0.0:
        raise ValueError("slack must be non-negative")
    return linear_extension_length(p, params) < params.rest_length + slack


def c_bend_geometry(
    p: float,
    k: float,
    params: ActuatorParams,
    arc_length: float | None = None,
) -> ArcGeometry:
    """Arc parameters of the C bend at pressure ``p`` and spring constant ``k``.

    The center angle grows linearly with pressure and the inner diameter
    shrinks inversely:

        beta = p*pi*d_i^2 / (8*k*d_o)        D = 2*arc_length / beta

    ``arc_length`` defaults to the marker offset so that downstream tip
    coordinates are directly comparable with measured marker data; pass
    ``params.rest_length`` for whole-actuator arcs.  The diagnostic thread
    tension comes from the tip force balance, T = k*(L - L_0) with the
    outer-edge elongation L - L_0 = p*pi*d_i^2/(8k).

    At p = 0 the configuration is straight; a degenerate arc with zero
    angle and infinite inner diameter is returned instead of an error so
    pressure ramps can start from zero.
    """
    _check_pressure(p)
    if not math.isfinite(k) or k <= 0.0:
        raise ValueError("spring constant must be finite and positive")
    length = params.marker_offset if arc_length is None else arc_length
    if length <= 0.0:
        raise ValueError("arc length must be positive")
    if p == 0.0:
        return ArcGeometry(center_angle=0.0, inner_diameter=math.inf, thread_tension=0.0)
    d_i, d_o = params.inner_diameter, params.outer_diameter
    beta = p * math.pi * d_i**2 / (8.0 * k * d_o)
    diameter = 2.0 * length / beta
    tension = k * (p * math.pi * d_i**2 / (8.0 * k))
    return ArcGeometry(center_angle=beta, inner_diameter=diameter, thread_tension=tension)


def c_bend_tip(
    p: float,
    k: float,
    params: ActuatorParams,
    arc_length: float | None = None,
) -> TipPosition:
    """Tip of the C bend in the world frame.

    The tip traverses the tube-center arc of radius D/2 + d_o/2:

        x = 0    y = (D + d_o)/2 * (1 - cos beta)    z = (D + d_o)/2 * sin beta

    The zero-pressure limit is the straight configuration (0, 0, arc_length).
    """
    length = params.marker_offset if arc_length is None else arc_length
    geom = c_bend_geometry(p, k, params, arc_length=length)
    if geom.is_degenerate:
        return TipPosition(0.0, 0.0, length)
    radius = geom.inner_diameter / 2.0 + params.outer_diameter / 2.0
    beta = geom.center_angle
    return TipPosition(0.0, radius * (1.0 - math.cos(beta)), radius * math.sin(beta))


def thread_azimuth(s: float, theta_deg: float, params: ActuatorParams) -> float:
    """Azimuth of the thread guide at arc position ``s`` on the tube surface [deg].

    Measured from the forward (+y) direction about the local tube axis,
    increasing toward +x.  ``s`` runs from 0 at the bottom (distal) end,
    where the guides start at the front edge, to the rest length at the
    top, where the guide has swept the full twist angle.
    """
    if not 0.0 <= s <= params.rest_length:
        raise ValueError("arc position must lie within [0, rest_length]")
    return (s / params.rest_length) * theta_deg
