import numpy as np
import pytest

from trunksim.measurement import (
    CAMERA_TO_WORLD_ROTATION,
    CameraExtrinsics,
    TrajectorySeries,
    camera_to_world,
    compare_trajectories,
    gaussian_smooth,
    load_trajectory,
    perturb_depth,
    save_trajectory,
    transform_series_to_world,
    world_to_camera,
)


def series(points, frame="world", times=None):
    points = np.asarray(points, dtype=float)
    if times is None:
        times = np.arange(len(points), dtype=float)
    return TrajectorySeries(times=np.asarray(times, dtype=float), points=points, frame=frame)


# -- camera transform --------------------------------------------------------


def test_camera_origin_maps_to_translation():
    ext = CameraExtrinsics(translation=(0.5, -0.2, 0.1))
    assert camera_to_world([0.0, 0.0, 0.0], ext) == pytest.approx([0.5, -0.2, 0.1])


def test_axis_mapping():
    ext = CameraExtrinsics()
    # camera z' points left, so a point 100 mm left of the origin sits at
    # world x = +100 mm... with z' = -0.1 the point is 100 mm camera-right
    assert camera_to_world([0.0, 0.0, -0.1], ext) == pytest.approx([0.1, 0.0, 0.0])
    # camera x' backward -> world -y; camera y' downward -> world +z
    assert camera_to_world([1.0, 0.0, 0.0], ext) == pytest.approx([0.0, -1.0, 0.0])
    assert camera_to_world([0.0, 1.0, 0.0], ext) == pytest.approx([0.0, 0.0, 1.0])


def test_rotation_is_proper():
    R = CAMERA_TO_WORLD_ROTATION
    assert np.allclose(R @ R.T, np.eye(3), atol=1e-15)
    assert np.linalg.det(R) == pytest.approx(1.0, rel=1e-12)


def test_round_trip_identity():
    rng = np.random.default_rng(5)
    ext = CameraExtrinsics(translation=(0.8, 0.02, -0.3))
    for _ in range(100):
        p = rng.normal(size=3)
        q = world_to_camera(camera_to_world(p, ext), ext)
        assert np.max(np.abs(q - p)) < 1e-12 * max(1.0, np.max(np.abs(p)))


def test_transform_preserves_distances():
    rng = np.random.default_rng(6)
    ext = CameraExtrinsics(translation=(0.1, 0.2, 0.3))
    a, b = rng.normal(size=3), rng.normal(size=3)
    da = np.linalg.norm(a - b)
    db = np.linalg.norm(camera_to_world(a, ext) - camera_to_world(b, ext))
    assert db == pytest.approx(da, rel=1e-12)


def test_series_transform():
    ext = CameraExtrinsics(translation=(1.0, 0.0, 0.0))
    s = series([[0.0, 0.0, 0.0], [0.0, 0.0, -0.1]], frame="camera")
    w = transform_series_to_world(s, ext)
    assert w.frame == "world"
    assert w.points[0] == pytest.approx([1.0, 0.0, 0.0])
    assert w.points[1] == pytest.approx([1.1, 0.0, 0.0])


# -- gaussian smoothing ------------------------------------------------------


def test_constant_series_unchanged():
    s = series(np.tile([0.1, -0.2, 0.3], (25, 1)))
    out = gaussian_smooth(s, sigma=3.0)
    assert np.max(np.abs(out.points - s.points)) < 1e-12


def test_impulse_gives_normalized_kernel():
    n = 41
    pts = np.zeros((n, 3))
    pts[n // 2, 0] = 1.0
    out = gaussian_smooth(series(pts), sigma=2.0)
    radius = int(np.ceil(3 * 2.0))
    taps = np.exp(-0.5 * (np.arange(-radius, radius + 1) / 2.0) ** 2)
    taps /= taps.sum()
    segment = out.points[n // 2 - radius : n // 2 + radius + 1, 0]
    assert segment == pytest.approx(taps, abs=1e-12)
    assert out.points[:, 0].sum() == pytest.approx(1.0, abs=1e-12)


def test_linear_ramp_interior_unchanged():
    n = 60
    t = np.arange(n, dtype=float)
    pts = np.column_stack([0.002 * t, -0.001 * t + 0.05, 0.0 * t])
    out = gaussian_smooth(series(pts), sigma=2.5)
    radius = int(np.ceil(3 * 2.5))
    interior = slice(radius, n - radius)
    assert np.max(np.abs(out.points[interior] - pts[interior])) < 1e-9


def test_smoothing_is_linear():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(30, 3))
    b = rng.normal(size=(30, 3))
    s_combined = gaussian_smooth(series(2.5 * a + b), sigma=1.7)
    s_parts = 2.5 * gaussian_smooth(series(a), sigma=1.7).points + gaussian_smooth(series(b), sigma=1.7).points
    assert np.max(np.abs(s_combined.points - s_parts)) < 1e-9


def test_smoothing_preserves_timestamps_and_frame():
    s = series(np.random.default_rng(0).normal(size=(10, 3)), frame="camera")
    out = gaussian_smooth(s, sigma=1.0)
    assert out.frame == "camera"
    assert np.array_equal(out.times, s.times)
    with pytest.raises(ValueError):
        gaussian_smooth(s, sigma=0.0)


def test_smoothing_single_sample():
    s = series([[1.0, 2.0, 3.0]])
    out = gaussian_smooth(s, sigma=2.0)
    assert out.points == pytest.approx(s.points)


# -- trajectory io ------------------------------------------------------------


def test_load_trajectory(tmp_path):
    f = tmp_path / "t.csv"
    f.write_text(
        "t_s,x,y,z,frame\n"
        "1.0,0,80,276,world\n"
        "2.0,0,125,239,world\n"
        "3.0,0,157,185,world\n"
        "4.0,0,171,138,world\n"
    )
    s = load_trajectory(f)
    assert len(s) == 4
    assert s.frame == "world"
    assert s.points[1] == pytest.approx([0.0, 0.125, 0.239])


def test_load_trajectory_errors(tmp_path):
    cases = {
        "empty.csv": ("", "missing header"),
        "no_rows.csv": ("t_s,x,y,z,frame\n", "no samples"),
        "dup.csv": ("t_s,x,y,z,frame\n1,0,0,0,world\n1,0,1,0,world\n", ":3"),
        "mixed.csv": ("t_s,x,y,z,frame\n1,0,0,0,world\n2,0,1,0,camera\n", "frame"),
        "badnum.csv": ("t_s,x,y,z,frame\n1,0,zz,0,world\n", ":2"),
    }
    for name, (content, match) in cases.items():
        f = tmp_path / name
        f.write_text(content)
        with pytest.raises(ValueError, match=match):
            load_trajectory(f)


def test_save_load_round_trip(tmp_path):
    s = series(np.random.default_rng(1).normal(size=(7, 3)) * 0.1, frame="camera")
    f = tmp_path / "rt.csv"
    save_trajectory(s, f)
    back = load_trajectory(f)
    assert back.frame == "camera"
    assert np.max(np.abs(back.points - s.points)) < 1e-15
    assert np.array_equal(back.times, s.times)


# -- comparison ----------------------------------------------------------------


def test_identical_series_zero_error():
    s = series(np.random.default_rng(2).normal(size=(9, 3)))
    m = compare_trajectories(s, s)
    assert m.rms == 0.0
    assert m.max_abs == 0.0


def test_constant_offset_metrics():
    pts = np.random.default_rng(3).normal(size=(12, 3))
    shifted = pts.copy()
    shifted[:, 1] += 0.010
    m = compare_trajectories(series(shifted), series(pts))
    assert m.rms == pytest.approx(0.010, rel=1e-12)
    assert m.max_abs == pytest.approx(0.010, rel=1e-12)
    assert m.per_axis_rms[1] == pytest.approx(0.010, rel=1e-12)
    assert m.per_axis_rms[0] == pytest.approx(0.0, abs=1e-15)


def test_symmetry_on_shared_timestamps():
    rng = np.random.default_rng(4)
    a = series(rng.normal(size=(8, 3)))
    b = series(rng.normal(size=(8, 3)))
    mab = compare_trajectories(a, b)
    mba = compare_trajectories(b, a)
    assert mab.rms == pytest.approx(mba.rms, rel=1e-12)
    assert mab.max_abs == pytest.approx(mba.max_abs, rel=1e-12)


def test_interpolated_comparison():
    model = series([[0, 0, 0], [0, 1, 0], [0, 2, 0]], times=[0.0, 1.0, 2.0])
    measured = series([[0, 0.5, 0]], times=[0.5])
    m = compare_trajectories(model, measured)
    assert m.rms == pytest.approx(0.0, abs=1e-15)


def test_disjoint_time_ranges_rejected():
    a = series([[0, 0, 0], [0, 1, 0]], times=[0.0, 1.0])
    b = series([[0, 0, 0], [0, 1, 0]], times=[2.0, 3.0])
    with pytest.raises(ValueError, match="overlap"):
        compare_trajectories(a, b)


def test_frame_mismatch_rejected():
    a = series([[0, 0, 0], [0, 1, 0]])
    b = series([[0, 0, 0], [0, 1, 0]], frame="camera")
    with pytest.raises(ValueError, match="world"):
        compare_trajectories(a, b)


# -- synthetic noise -----------------------------------------------------------


def test_perturb_depth_bounds_and_determinism():
    pts = np.random.default_rng(9).normal(size=(50, 3))
    s = series(pts, frame="camera")
    out1 = perturb_depth(s, fraction=0.02, seed=123)
    out2 = perturb_depth(s, fraction=0.02, seed=123)
    assert np.array_equal(out1.points, out2.points)
    r0 = np.linalg.norm(pts, axis=1)
    r1 = np.linalg.norm(out1.points, axis=1)
    assert np.all(np.abs(r1 / r0 - 1.0) <= 0.02 + 1e-12)
    with pytest.raises(ValueError):
        perturb_depth(series(pts, frame="world"), fraction=0.02)
