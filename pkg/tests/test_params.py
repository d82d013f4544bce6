import math
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trunksim.params import MPA, ActuatorParams, ControlInput, load_params, save_params


def test_defaults_are_prototype_values():
    p = ActuatorParams()
    assert p.inner_diameter == pytest.approx(7e-3)
    assert p.outer_diameter == pytest.approx(10e-3)
    assert p.rest_length == pytest.approx(0.300)
    assert p.youngs_modulus == pytest.approx(1.15e6)
    assert p.actuation_mass == pytest.approx(0.078)
    assert p.top_shaft_spacing == pytest.approx(0.038)
    assert p.bottom_shaft_spacing == pytest.approx(0.015)
    assert p.dip_angle_deg == pytest.approx(87.648)
    assert p.marker_offset == pytest.approx(0.290)


def test_cross_section_area_is_derived():
    p = ActuatorParams()
    assert p.cross_section_area == pytest.approx(math.pi * (0.010**2 - 0.007**2) / 4.0, rel=1e-12)
    assert p.bore_area == pytest.approx(math.pi * 0.007**2 / 4.0, rel=1e-12)
    assert p.second_moment == pytest.approx(math.pi * (0.010**4 - 0.007**4) / 64.0, rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"inner_diameter": 0.011},            # inner >= outer
        {"inner_diameter": 0.0},
        {"rest_length": -0.1},
        {"youngs_modulus": 0.0},
        {"actuation_mass": -1.0},
        {"marker_offset": 0.5},               # beyond the actuator
        {"inner_diameter": float("nan")},
    ],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ValueError):
        ActuatorParams(**kwargs)


@given(
    d_i=st.floats(1e-3, 9e-3),
    wall=st.floats(5e-4, 5e-3),
    l0=st.floats(0.05, 1.0),
    e=st.floats(1e5, 1e8),
    m=st.floats(0.0, 1.0),
)
@settings(max_examples=100, deadline=None)
def test_external_units_round_trip(d_i, wall, l0, e, m):
    p = ActuatorParams(
        inner_diameter=d_i,
        outer_diameter=d_i + wall,
        rest_length=l0,
        youngs_modulus=e,
        actuation_mass=m,
        marker_offset=l0 * 0.9,
    )
    q = ActuatorParams.from_external(p.to_external())
    for name in (
        "inner_diameter",
        "outer_diameter",
        "rest_length",
        "youngs_modulus",
        "actuation_mass",
        "marker_offset",
        "max_pressure",
    ):
        assert getattr(q, name) == pytest.approx(getattr(p, name), rel=1e-12)


def test_params_toml_round_trip(tmp_path):
    p = ActuatorParams(rest_length=0.25, marker_offset=0.24)
    path = tmp_path / "params.toml"
    save_params(p, path)
    q = load_params(path)
    assert q == p or all(
        getattr(q, f) == pytest.approx(getattr(p, f), rel=1e-12)
        for f in ("rest_length", "marker_offset")
    )


def test_shipped_prototype_file_matches_defaults():
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "params" / "prototype.toml"
    assert load_params(path) == ActuatorParams()


def test_control_validation():
    p = ActuatorParams()
    ControlInput.at_rest(p).validate(p)
    with pytest.raises(ValueError):
        ControlInput.at_rest(p, pressure_left=-0.1 * MPA).validate(p)
    with pytest.raises(ValueError):
        ControlInput.at_rest(p, pressure_right=0.4 * MPA).validate(p)
    with pytest.raises(ValueError):
        ControlInput.at_rest(p, thread_length_left=-1e-3).validate(p)
    with pytest.raises(ValueError):
        ControlInput.at_rest(p, theta_left_deg=float("nan")).validate(p)


def test_control_mirror_swaps_sides():
    c = ControlInput(
        theta_left_deg=-90.0,
        theta_right_deg=10.0,
        pressure_left=0.25 * MPA,
        pressure_right=0.2 * MPA,
        thread_length_left=0.30,
        thread_length_right=0.31,
    )
    m = c.mirrored()
    assert m.theta_left_deg == -10.0
    assert m.theta_right_deg == 90.0
    assert m.pressure_left == 0.2 * MPA
    assert m.thread_length_left == 0.31
    assert m.mirrored() == c
