import math

import numpy as np
import pytest

from lcq.mc import (McEstimate, McSpec, block_mean, combine_stderr, derive_seed, exact, power, stream,
                    uniform_ball, uniform_sphere)


def _draw(rng, count):
    return rng.standard_normal(count) ** 2


def test_block_mean_is_worker_independent():
    a = block_mean(_draw, 50_000, seed=3, tag="t", workers=1)
    b = block_mean(_draw, 50_000, seed=3, tag="t", workers=4)
    assert a.value == b.value and a.stderr == b.stderr


def test_block_mean_estimates_chi_square_mean():
    est = block_mean(_draw, 200_000, seed=5, tag="chi")
    assert abs(est.value - 1.0) < 4 * est.stderr
    assert est.stderr == pytest.approx(math.sqrt(2 / 200_000), rel=0.05)


def test_streams_are_keyed_by_tag_and_index():
    x = stream(1, "a", 0).random(4)
    assert np.array_equal(x, stream(1, "a", 0).random(4))
    assert not np.array_equal(x, stream(1, "b", 0).random(4))
    assert not np.array_equal(x, stream(1, "a", 1).random(4))
    assert derive_seed(1, "a") != derive_seed(1, "b")


def test_sphere_and_ball_samplers():
    rng = np.random.default_rng(0)
    s = uniform_sphere(rng, 1000, 4)
    assert np.allclose(np.linalg.norm(s, axis=1), 1.0)
    b = uniform_ball(rng, 20_000, 3, 2.0)
    r = np.linalg.norm(b, axis=1)
    assert r.max() <= 2.0
    # P(|X| <= 1) = 1/8 for the uniform ball of radius 2 in R^3
    assert abs(np.mean(r <= 1.0) - 0.125) < 0.01


def test_estimate_arithmetic():
    e = McEstimate(4.0, 0.4)
    assert e.rel_stderr == pytest.approx(0.1)
    p = power(e, 0.5)
    assert p.value == pytest.approx(2.0)
    assert p.stderr == pytest.approx(0.5 * 0.1 * 2.0)
    assert exact(3.0).stderr == 0.0
    assert combine_stderr(McEstimate(1, 3), McEstimate(1, 4)) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        McEstimate(1.0, -1.0)


def test_mcspec_from_dict_ignores_unknown():
    mc = McSpec.from_dict({"samples": 10, "seed": 4, "bogus": 1})
    assert mc.samples == 10 and mc.seed == 4
    assert mc.with_seed(9).seed == 9
