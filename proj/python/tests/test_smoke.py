import numpy as np
import pytest

import panotrack as pt


def test_principal_point_is_forward():
    k = pt.Intrinsics.from_fov(256, 256, 70.528)
    assert np.array_equal(pt.pixel_to_direction(k.cx, k.cy, k), [0.0, 0.0, 1.0])


def test_pixel_round_trip():
    k = pt.Intrinsics(464.0, 464.0, 128.0, 128.0, 256, 256)
    d = pt.pixel_to_direction(100.0, 37.5, k)
    np.testing.assert_allclose(d, [-0.05912514213202927, -0.19110090581959457, 0.9797880696164849], atol=1e-15)
    x, y = pt.direction_to_pixel(d, k)
    assert abs(x - 100.0) < 1e-9 and abs(y - 37.5) < 1e-9
    assert pt.direction_to_pixel([0.0, 0.0, -1.0], k) is None


def test_procrustes_returns_rotation():
    rng = np.random.default_rng(0)
    r = pt.euler_to_rotation(10.0, 20.0, 30.0)
    q = pt.procrustes_so3(r + 0.01 * rng.standard_normal((3, 3)))
    np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(q) - 1.0) < 1e-12


def test_spin_closes():
    rs = pt.generate_trajectory("spin_y", 8, seed=1, spin_noise=0.0)
    assert rs.shape == (8, 3, 3)
    total = np.eye(3)
    for a, b in zip(rs[:-1], rs[1:]):
        total = total @ (a.T @ b)
    step = rs[0].T @ rs[1]
    np.testing.assert_allclose(total @ step, np.eye(3), atol=1e-9)


def test_render_uniform():
    src = np.full((32, 64, 3), 91, dtype=np.uint8)
    out = pt.render_perspective(src, np.eye(3), pt.Intrinsics.from_fov(16, 12, 60.0), threads=2)
    assert out.shape == (12, 16, 3)
    assert (out == 91).all()


def test_errors_are_typed():
    with pytest.raises(pt.PanotrackError):
        pt.procrustes_so3(np.zeros((3, 3)))
    with pytest.raises(pt.PanotrackError):
        pt.generate_trajectory("wobble", 4)


def test_synth_dataset_eval(tmp_path):
    pt.write_synth("great-circle", tmp_path / "s", frames=8, width=512, height=256)
    report = pt.curate_clip(tmp_path / "s" / "frames")
    assert report["checks"][0]["name"] == "seam"
    rc, out, err = pt.run_cli([
        "make-dataset", "--source", str(tmp_path / "s" / "frames"), "--tracks", str(tmp_path / "s" / "tracks.json"),
        "--motion", "spin_y", "--frames", "8", "--width", "64", "--height", "64", "--out", str(tmp_path / "ds"),
    ])
    assert rc == 0, err
    r = pt.evaluate(tmp_path / "ds", tmp_path / "ds")
    assert r["overall"]["all"]["delta_avg"]["mean"] == 1.0
    assert r["overall"]["all"]["mean_angular"]["mean"] == 0.0
