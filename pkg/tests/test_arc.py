import math

import numpy as np
import pytest

from trunksim.arc import (
    c_bend_geometry,
    c_bend_tip,
    extension_within_slack,
    linear_extension_length,
    thread_azimuth,
)
from trunksim.params import ActuatorParams

P = ActuatorParams()

# frozen expected values, evaluated by independent hand arithmetic:
#   L(p) = ((2*m*g + p*pi*d_i^2) / (E*pi*(d_o^2-d_i^2)) + 1) * L_0
#   (2*0.078*9.81 + 2e5*pi*0.007^2) / (1.15e6*pi*(0.01^2-0.007^2)) = 0.1754...
LIN_02 = 0.3526195842323285
LIN_01 = 0.32755564561340267
#   beta = p*pi*d_i^2/(8*k*d_o), D = 2*0.29/beta
BETA_01_K2006 = 0.9592350450267939
BETA_005_K2006 = 0.47961752251339695
D_01_K2006 = 0.6046484675544762
TIP_01_K2006 = (0.13087511199790808, 0.25162251904404276)


def test_rest_length_at_zero_pressure_without_mass():
    p0 = ActuatorParams(actuation_mass=0.0)
    assert linear_extension_length(0.0, p0) == pytest.approx(p0.rest_length, abs=0.0)


def test_extension_matches_arithmetic_oracle():
    assert linear_extension_length(0.2e6, P) == pytest.approx(LIN_02, rel=1e-12)
    assert linear_extension_length(0.1e6, P) == pytest.approx(LIN_01, rel=1e-12)


def test_extension_strictly_monotone():
    pressures = np.linspace(0.0, 0.3e6, 100)
    lengths = [linear_extension_length(p, P) for p in pressures]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))


def test_slack_bound():
    # L(0.2 MPa) = 352.62 mm; the threads limit extension at L_0 + slack
    assert extension_within_slack(0.2e6, 0.060, P)
    assert not extension_within_slack(0.2e6, 0.050, P)
    with pytest.raises(ValueError):
        extension_within_slack(0.1e6, -0.01, P)


def test_degenerate_geometry_rejected():
    # params validation already forbids d_o <= d_i; the function re-checks
    # in case a params object was tampered with
    bad = ActuatorParams()
    object.__setattr__(bad, "outer_diameter", bad.inner_diameter)
    with pytest.raises(ValueError):
        linear_extension_length(0.1e6, bad)


def test_c_bend_geometry_oracle_values():
    g = c_bend_geometry(0.1e6, 200.6, P)
    assert g.center_angle == pytest.approx(BETA_01_K2006, rel=1e-12)
    assert g.inner_diameter == pytest.approx(D_01_K2006, rel=1e-12)
    g5 = c_bend_geometry(0.05e6, 200.6, P)
    assert g5.center_angle == pytest.approx(BETA_005_K2006, rel=1e-12)
    # thread tension from the tip force balance: T = p*pi*d_i^2/8
    assert g.thread_tension == pytest.approx(0.1e6 * math.pi * 0.007**2 / 8.0, rel=1e-12)


def test_c_bend_scaling_laws():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p = rng.uniform(1e3, 0.3e6)
        k = rng.uniform(20.0, 600.0)
        g1 = c_bend_geometry(p, k, P)
        g2 = c_bend_geometry(2.0 * p, k, P)
        assert g2.center_angle == pytest.approx(2.0 * g1.center_angle, rel=1e-12)
        assert g2.inner_diameter == pytest.approx(g1.inner_diameter / 2.0, rel=1e-12)


def test_arc_length_identities():
    rng = np.random.default_rng(11)
    l0 = P.marker_offset
    for _ in range(200):
        p = rng.uniform(1e3, 0.3e6)
        k = rng.uniform(20.0, 600.0)
        g = c_bend_geometry(p, k, P)
        beta, D = g.center_angle, g.inner_diameter
        # inner edge keeps the thread length
        assert beta * D / 2.0 == pytest.approx(l0, rel=1e-9)
        # outer edge gains the pressure-driven elongation
        assert beta * (D / 2.0 + P.outer_diameter) == pytest.approx(
            l0 + p * math.pi * P.inner_diameter**2 / (8.0 * k), rel=1e-9
        )


def test_c_bend_monotonicity_in_pressure():
    ps = np.linspace(1e3, 0.3e6, 50)
    betas = [c_bend_geometry(p, 200.6, P).center_angle for p in ps]
    diams = [c_bend_geometry(p, 200.6, P).inner_diameter for p in ps]
    assert all(b2 > b1 for b1, b2 in zip(betas, betas[1:]))
    assert all(d2 < d1 for d1, d2 in zip(diams, diams[1:]))


def test_zero_pressure_degenerate_arc():
    g = c_bend_geometry(0.0, 200.6, P)
    assert g.center_angle == 0.0
    assert math.isinf(g.inner_diameter)
    assert g.is_degenerate
    tip = c_bend_tip(0.0, 200.6, P)
    assert tip.as_tuple() == (0.0, 0.0, P.marker_offset)


def test_tip_small_pressure_limit():
    tip = c_bend_tip(1e-3, 200.6, P)
    assert tip.x == 0.0
    assert abs(tip.y) < 1e-9
    assert tip.z == pytest.approx(P.marker_offset, rel=1e-9)


def test_tip_oracle_value():
    tip = c_bend_tip(0.1e6, 200.6, P)
    assert tip.x == 0.0
    assert tip.y == pytest.approx(TIP_01_K2006[0], rel=1e-12)
    assert tip.z == pytest.approx(TIP_01_K2006[1], rel=1e-12)


def test_tip_x_always_zero():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tip = c_bend_tip(rng.uniform(0, 0.3e6), rng.uniform(20, 600), P)
        assert tip.x == 0.0


def test_tip_uses_marker_length_by_default():
    tip_marker = c_bend_tip(0.1e6, 200.6, P)
    tip_full = c_bend_tip(0.1e6, 200.6, P, arc_length=P.rest_length)
    assert tip_full.z > tip_marker.z


def test_thread_azimuth_boundaries():
    assert thread_azimuth(0.0, -170.0, P) == 0.0
    assert thread_azimuth(P.rest_length, -90.0, P) == pytest.approx(-90.0)
    assert thread_azimuth(P.rest_length / 2.0, 180.0, P) == pytest.approx(90.0)
    with pytest.raises(ValueError):
        thread_azimuth(-1e-3, 0.0, P)
    with pytest.raises(ValueError):
        thread_azimuth(P.rest_length + 1e-3, 0.0, P)


def test_negative_pressure_rejected():
    with pytest.raises(ValueError):
        linear_extension_length(-1.0, P)
    with pytest.raises(ValueError):
        c_bend_geometry(-1.0, 200.6, P)
    with pytest.raises(ValueError):
        c_bend_geometry(0.1e6, 0.0, P)
