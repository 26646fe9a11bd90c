import itertools
import math

import numpy as np
import pytest

from lcq.bodies import Box, Ellipsoid, EuclideanBall, RadialBody, body_from_config
from lcq.geometry import haar_subspace
from lcq.subspace import Subspace, orthonormalize


def test_subspace_frames_are_orthonormal_with_complement(rng):
    for n, m in [(2, 1), (3, 2), (5, 2)]:
        e = haar_subspace(n, m, rng)
        assert np.abs(e.frame.T @ e.frame - np.eye(m)).max() < 1e-12
        c = e.complement()
        assert c.dim == n - m
        assert np.abs(e.frame.T @ c.frame).max() < 1e-12
        z = rng.normal(size=(3, m))
        assert np.allclose(e.coords(e.embed(z)), z)


def test_subspace_validation():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert Subspace.whole(3).complement().dim == 0
    q = orthonormalize(np.random.default_rng(0).normal(size=(4, 4)))
    assert np.allclose(q.T @ q, np.eye(4))


def test_ball_oracles():
    b = EuclideanBall(3, 2.0)
    assert b.volume == pytest.approx(32 * math.pi / 3)
    assert b.radial(np.eye(3)).tolist() == [2.0, 2.0, 2.0]
    assert b.projection_volume(np.eye(3)[:, :2]) == pytest.approx(4 * math.pi)
    assert b.contains(np.array([[1.9, 0, 0]]))[0] and not b.contains(np.array([[2.1, 0, 0]]))[0]


def test_ellipsoid_projection_and_section():
    a = np.diag([3.0, 2.0, 1.0])
    e = Ellipsoid(a)
    assert e.volume == pytest.approx(4 * math.pi / 3 * 6)
    assert e.projection_volume(np.eye(3)[:, :2]) == pytest.approx(math.pi * 6)
    s = e.section(Subspace.coordinate(3, [1, 2]))
    assert s.volume == pytest.approx(math.pi * 2)
    with pytest.raises(ValueError):
        Ellipsoid(np.zeros((2, 2)))


def test_box_projection_is_zonotope_volume(rng):
    h = np.array([1.0, 0.5, 2.0])
    box = Box(h)
    assert box.volume == pytest.approx(8.0)
    e = haar_subspace(3, 2, rng)
    gens = (e.frame * (2 * h)[:, None])
    expect = sum(abs(np.linalg.det(gens[list(s)])) for s in itertools.combinations(range(3), 2))
    assert box.projection_volume(e.frame) == pytest.approx(expect)
    # projection onto a line: width is sum |2 h_i u_i|
    u = haar_subspace(3, 1, rng)
    assert box.projection_volume(u.frame) == pytest.approx(np.sum(2 * h * np.abs(u.frame[:, 0])))


def test_radial_gauge_consistency(rng):
    box = Box([1.0, 2.0])
    x = rng.normal(size=(50, 2))
    u = x / np.linalg.norm(x, axis=1, keepdims=True)
    pts = box.radial(u)[:, None] * u
    assert np.allclose(box.gauge(pts), 1.0)


def test_radial_body_and_config():
    rb = RadialBody(2, lambda u: np.full(len(u), 1.5), 1.5)
    assert rb.gauge(np.array([[3.0, 0.0]]))[0] == pytest.approx(2.0)
    assert isinstance(body_from_config({"body": "ball", "dim": 3}), EuclideanBall)
    assert body_from_config({"body": "box", "dim": 2, "h": 0.5}).volume == pytest.approx(1.0)
    with pytest.raises(ValueError):
        body_from_config({"body": "simplex", "dim": 2})


def test_box_sections_are_exact_polygons(rng):
    box = Box([1.0, 0.6, 0.4])
    assert box.section(Subspace.coordinate(3, [0, 1])).volume == pytest.approx(2.4)
    assert box.section(Subspace.coordinate(3, [2])).volume == pytest.approx(0.8)
    from lcq.geometry import star_volume
    from lcq.mc import McSpec
    e = haar_subspace(3, 2, rng)
    sec = box.section(e)
    est = star_volume(sec.radial, 2, McSpec(samples=200_000, seed=1))
    assert abs(est.value - sec.volume) <= 4 * est.stderr


def test_parallelotope_from_box_image(rng):
    from lcq.bodies import Parallelotope
    box = Box([1.0, 0.5, 0.25])
    a = np.array([[1.0, 0.7, 0.0], [0.0, 1.0, -0.3], [0.2, 0.0, 1.0]])
    p = box.image(a)
    assert isinstance(p, Parallelotope)
    assert p.volume == pytest.approx(box.volume * abs(np.linalg.det(a)))
    x = rng.uniform(-1.5, 1.5, size=(200, 3))
    assert np.array_equal(p.contains(x @ a.T), box.contains(x))
    e = haar_subspace(3, 2, rng)
    # shadow of A box on E is the zonotope of the projected generators
    gens = e.frame.T @ (a @ box.generators)
    expect = sum(abs(np.linalg.det(gens[:, list(s)])) for s in itertools.combinations(range(3), 2))
    assert p.projection_volume(e.frame) == pytest.approx(expect)
    vert = np.array(list(itertools.product((-1, 1), repeat=3))) * box.h
    assert p.circumradius == pytest.approx(np.max(np.linalg.norm(vert @ a.T, axis=1)))
    with pytest.raises(ValueError):
        Parallelotope(np.zeros((2, 2)))
