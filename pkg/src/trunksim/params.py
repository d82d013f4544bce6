"""Rig constants and operator control inputs.

Everything in this module is stored in SI units (m, Pa, kg, s); twist
angles are the one exception and are kept in degrees because that is how
the bench hardware and every config file expresses them.  On-disk
parameter files use bench units (mm, MPa, g, deg) and are converted on
load/save so the two representations round-trip exactly.

Defaults describe the desk prototype: 7/10 mm rubber tubes of 300 mm
free length wrapped in extension-only hoses, an equivalent modulus of
1.15 MPa, a 78 g actuation part hanging from motor shafts 38 mm apart
and joined at the bottom by a connector with 15 mm shaft spacing.  The
tracked tip marker sits 290 mm down the actuator.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "ActuatorParams",
    "ControlInput",
    "load_params",
    "save_params",
    "MM",
    "MPA",
    "GRAM",
]

MM = 1e-3
MPA = 1e6
GRAM = 1e-3

# external key -> (field name, scale from external to SI)
_EXTERNAL_FIELDS = {
    "inner_diameter_mm": ("inner_diameter", MM),
    "outer_diameter_mm": ("outer_diameter", MM),
    "rest_length_mm": ("rest_length", MM),
    "youngs_modulus_mpa": ("youngs_modulus", MPA),
    "actuation_mass_g": ("actuation_mass", GRAM),
    "gravity_m_per_s2": ("gravity", 1.0),
    "top_shaft_spacing_mm": ("top_shaft_spacing", MM),
    "bottom_shaft_spacing_mm": ("bottom_shaft_spacing", MM),
    "dip_angle_deg": ("dip_angle_deg", 1.0),
    "marker_offset_mm": ("marker_offset", MM),
    "max_pressure_mpa": ("max_pressure", MPA),
}


@dataclass(frozen=True)
class ActuatorParams:
    """Geometry and material constants of the two-tube rig (SI units)."""

    inner_diameter: float = 7.0 * MM
    outer_diameter: float = 10.0 * MM
    rest_length: float = 300.0 * MM
    youngs_modulus: float = 1.15 * MPA
    actuation_mass: float = 78.0 * GRAM
    gravity: float = 9.81
    top_shaft_spacing: float = 38.0 * MM
    bottom_shaft_spacing: float = 15.0 * MM
    dip_angle_deg: float = 87.648
    marker_offset: float = 290.0 * MM
    max_pressure: float = 0.3 * MPA

    def __post_init__(self):
        if not all(map(math.isfinite, self.to_external().values())):
            raise ValueError("actuator parameters must be finite")
        if not 0.0 < self.inner_diameter < self.outer_diameter:
            raise ValueError("need 0 < inner_diameter < outer_diameter")
        if self.rest_length <= 0.0 or self.youngs_modulus <= 0.0:
            raise ValueError("rest_length and youngs_modulus must be positive")
        if self.actuation_mass < 0.0 or self.gravity < 0.0:
            raise ValueError("mass and gravity must be non-negative")
        if self.top_shaft_spacing <= 0.0 or self.bottom_shaft_spacing <= 0.0:
            raise ValueError("shaft spacings must be positive")
        if not 0.0 < self.marker_offset <= self.rest_length:
            raise ValueError("marker_offset must lie within the actuator length")
        if self.max_pressure <= 0.0:
            raise ValueError("max_pressure must be positive")

    @property
    def cross_section_area(self) -> float:
        """Annular tube wall area pi*(d_o^2 - d_i^2)/4 [m^2] (always derived)."""
        return math.pi * (self.outer_diameter**2 - self.inner_diameter**2) / 4.0

    @property
    def bore_area(self) -> float:
        """Pressurized bore area pi*d_i^2/4 [m^2]."""
        return math.pi * self.inner_diameter**2 / 4.0

    @property
    def second_moment(self) -> float:
        """Second moment of the annular wall pi*(d_o^4 - d_i^4)/64 [m^4]."""
        return math.pi * (self.outer_diameter**4 - self.inner_diameter**4) / 64.0

    @property
    def effective_dip_angle_deg(self) -> float:
        """Dip angle implied by the shaft spacings and rest length.

        The stored ``dip_angle_deg`` is the nameplate value; the rig builder
        uses the spacings, which imply this slightly different angle.
        """
        half_run = (self.top_shaft_spacing - self.bottom_shaft_spacing) / 2.0
        return math.degrees(math.acos(half_run / self.rest_length))

    def to_external(self) -> dict[str, float]:
        """Bench-unit (mm / MPa / g / deg) representation for config files."""
        return {key: getattr(self, name) / scale for key, (name, scale) in _EXTERNAL_FIELDS.items()}

    @classmethod
    def from_external(cls, doc: dict) -> "ActuatorParams":
        unknown = set(doc) - set(_EXTERNAL_FIELDS)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in doc.items():
            name, scale = _EXTERNAL_FIELDS[key]
            kwargs[name] = float(value) * scale
        return cls(**kwargs)


@dataclass(frozen=True)
class ControlInput:
    """One operator command.

    Twist angles are in degrees (positive twists the thread lay toward the
    +x side of the rig at the top), pressures in Pa, thread lengths in m.
    """

    theta_left_deg: float = 0.0
    theta_right_deg: float = 0.0
    pressure_left: float = 0.0
    pressure_right: float = 0.0
    thread_length_left: float = 300.0 * MM
    thread_length_right: float = 300.0 * MM

    def validate(self, params: ActuatorParams) -> None:
        vals = (
            self.theta_left_deg,
            self.theta_right_deg,
            self.pressure_left,
            self.pressure_right,
            self.thread_length_left,
            self.thread_length_right,
        )
        if not all(map(math.isfinite, vals)):
            raise ValueError("control input must be finite")
        for p in (self.pressure_left, self.pressure_right):
            if not 0.0 <= p <= params.max_pressure:
                raise ValueError(
                    f"pressure {p / MPA:.4g} MPa outside [0, {params.max_pressure / MPA:.4g}] MPa"
                )
        if self.thread_length_left < 0.0 or self.thread_length_right < 0.0:
            raise ValueError("thread lengths must be non-negative")

    @classmethod
    def at_rest(cls, params: ActuatorParams, **overrides) -> "ControlInput":
        """Control with both threads at the actuator rest length."""
        base = cls(thread_length_left=params.rest_length, thread_length_right=params.rest_length)
        return replace(base, **overrides) if overrides else base

    def mirrored(self) -> "ControlInput":
        """Swap left/right and flip twist signs (reflection through the y-z plane)."""
        return ControlInput(
            theta_left_deg=-self.theta_right_deg,
            theta_right_deg=-self.theta_left_deg,
            pressure_left=self.pressure_right,
            pressure_right=self.pressure_left,
            thread_length_left=self.thread_length_right,
            thread_length_right=self.thread_length_left,
        )

    def to_external(self) -> dict[str, float]:
        return {
            "theta_left_deg": self.theta_left_deg,
            "theta_right_deg": self.theta_right_deg,
            "pressure_left_mpa": self.pressure_left / MPA,
            "pressure_right_mpa": self.pressure_right / MPA,
            "thread_length_left_mm": self.thread_length_left / MM,
            "thread_length_right_mm": self.thread_length_right / MM,
        }

    @classmethod
    def from_external(cls, doc: dict) -> "ControlInput":
        return cls(
            theta_left_deg=float(doc.get("theta_left_deg", 0.0)),
            theta_right_deg=float(doc.get("theta_right_deg", 0.0)),
            pressure_left=float(doc.get("pressure_left_mpa", 0.0)) * MPA,
            pressure_right=float(doc.get("pressure_right_mpa", 0.0)) * MPA,
            thread_length_left=float(doc.get("thread_length_left_mm", 300.0)) * MM,
            thread_length_right=float(doc.get("thread_length_right_mm", 300.0)) * MM,
        )


def load_params(path: str | Path) -> ActuatorParams:
    """Read actuator parameters from a flat TOML document in bench units."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    return ActuatorParams.from_external(doc)


def save_params(params: ActuatorParams, path: str | Path) -> None:
    """Write bench-unit parameters as one ``key = value`` TOML line each."""
    lines = [f"{key} = {value!r}" for key, value in params.to_external().items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
