"""Classification of an operator command into one of the canonical motion patterns.

The rig settles into a small family of equilibrium shapes depending on the
two top twist angles and the thread slack: straight extension, planar C/J/S
bends, a helix of either handedness, or a spiral.  Anything that matches no
canonical input pattern is reported as unclassified rather than guessed.
"""

from __future__ import annotations

import math
from enum import Enum

from .params import MM, ActuatorParams, ControlInput

__all__ = ["MotionPattern", "classify_pattern"]

# Thread lengths within this band of the rest length count as "taut".
LENGTH_TOL = 1.0 * MM


class MotionPattern(Enum):
    LINEAR_EXTENSION = "linear-extension"
    C_SHAPED = "c-shaped"
    J_SHAPED = "j-shaped"
    S_SHAPED = "s-shaped"
    HELICAL_CW = "helical-cw"
    HELICAL_CCW = "helical-ccw"
    SPIRAL = "spiral"
    UNCLASSIFIED = "unclassified"

    @property
    def chirality(self) -> str | None:
        """'cw' or 'ccw' for the helical variants (top view), else None."""
        if self is MotionPattern.HELICAL_CW:
            return "cw"
        if self is MotionPattern.HELICAL_CCW:
            return "ccw"
        return None

    @property
    def label(self) -> str:
        names = {
            MotionPattern.LINEAR_EXTENSION: "Linear extension",
            MotionPattern.C_SHAPED: "C-shaped",
            MotionPattern.J_SHAPED: "J-shaped",
            MotionPattern.S_SHAPED: "S-shaped",
            MotionPattern.HELICAL_CW: "Helical (CW)",
            MotionPattern.HELICAL_CCW: "Helical (CCW)",
            MotionPattern.SPIRAL: "Spiral",
            MotionPattern.UNCLASSIFIED: "Unclassified",
        }
        return names[self]


def _near(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def classify_pattern(
    control: ControlInput,
    params: ActuatorParams,
    angle_tol_deg: float = 5.0,
    length_tol: float = LENGTH_TOL,
) -> MotionPattern:
    """Map a control input to its canonical motion pattern.

    Rules are checked in a fixed order and the first match wins, so the
    mapping is total and deterministic.  Twist angles are compared as plain
    signed degrees (a -180 deg lay and a +180 deg lay are different windings
    and are not identified with each other).

    * both twists ~0: taut threads -> C bend, both slack -> linear
      extension, anything else unclassified;
    * (-90, +90) -> J bend; (-180, +180) -> S bend;
    * equal same-sign twists -> helix, counter-clockwise for negative twist;
    * one twist ~-90 with the other in the open (0, 90) band (or the
      mirrored arrangement) -> spiral;
    * otherwise unclassified.
    """
    control.validate(params)
    if not math.isfinite(angle_tol_deg) or angle_tol_deg < 0.0:
        raise ValueError("angle tolerance must be finite and non-negative")

    t1 = control.theta_left_deg
    t2 = control.theta_right_deg
    tol = angle_tol_deg
    l0 = params.rest_length

    if _near(t1, 0.0, tol) and _near(t2, 0.0, tol):
        left_taut = _near(control.thread_length_left, l0, length_tol)
        right_taut = _near(control.thread_length_right, l0, length_tol)
        if left_taut and right_taut:
            return MotionPattern.C_SHAPED
        left_slack = control.thread_length_left > l0 + length_tol
        right_slack = control.thread_length_right > l0 + length_tol
        if left_slack and right_slack:
            return MotionPattern.LINEAR_EXTENSION
        return MotionPattern.UNCLASSIFIED

    if _near(t1, -90.0, tol) and _near(t2, 90.0, tol):
        return MotionPattern.J_SHAPED

    if _near(t1, -180.0, tol) and _near(t2, 180.0, tol):
        return MotionPattern.S_SHAPED

    if _near(t1, t2, tol) and abs(t1) > tol and abs(t2) > tol and t1 * t2 > 0.0:
        return MotionPattern.HELICAL_CCW if t1 < 0.0 else MotionPattern.HELICAL_CW

    if _near(t1, -90.0, tol) and 0.0 < t2 < 90.0:
        return MotionPattern.SPIRAL
    if _near(t2, 90.0, tol) and -90.0 < t1 < 0.0:
        return MotionPattern.SPIRAL

    return MotionPattern.UNCLASSIFIED
