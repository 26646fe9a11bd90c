import math

import numpy as np
import pytest

from lcq.bodies import Box, Ellipsoid, EuclideanBall
from lcq.core import (LOG_CONCAVE, S_CONCAVE, Constant, CustomPotential, ExpNorm, Gaussian, Indicator, PowerLaw,
                      evaluate, fradelizi_check, from_config, gaussian_cov, level_set, linear_image, project,
                      restricted, scaled, section, shifted)
from lcq.geometry import haar_subspace
from lcq.mc import McSpec
from lcq.subspace import Subspace


def _sub(n, m, seed=0):
    return haar_subspace(n, m, np.random.default_rng(seed))


# --- evaluation ----------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(Gaussian(3), np.zeros(3)) == 1.0
    assert evaluate(ExpNorm(2), np.array([3.0, 4.0])) == pytest.approx(math.exp(-5))
    assert evaluate(PowerLaw(2, 4.0), np.array([1.0, 0.0])) == pytest.approx(0.0625)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Gaussian(3)(np.zeros(2))
    with pytest.raises(ValueError):
        section(Gaussian(3), Subspace.coordinate(4, [0]))


@pytest.mark.parametrize("f", [Gaussian(3), ExpNorm(3), PowerLaw(3, 6.0), Indicator(Box([1, 0.5, 2])),
                               shifted(Gaussian(3), [0.3, 0, 0.1]), linear_image(ExpNorm(3), np.diag([1, 2, .5]))])
def test_descriptor_invariants(f, rng):
    x = rng.normal(scale=2.0, size=(500, 3))
    v = f.evaluate(x)
    assert f.evaluate(np.zeros(3)) == pytest.approx(f.value_at_origin)
    assert np.all(v <= f.sup_norm * (1 + 1e-12))
    if f.decay is not None:
        a, b = f.decay
        assert np.all(v <= a * np.exp(-b * np.linalg.norm(x, axis=1)) * (1 + 1e-12))
    if f.concavity_class == LOG_CONCAVE:
        y = rng.normal(scale=2.0, size=(500, 3))
        lam = rng.random(500)[:, None]
        mid = f.evaluate(lam * x + (1 - lam) * y)
        lam = lam[:, 0]
        assert np.all(mid >= v ** lam * f.evaluate(y) ** (1 - lam) - 1e-12)


def test_geometric_families():
    for f in (Gaussian(2), ExpNorm(2), Indicator(EuclideanBall(2))):
        assert f.is_geometric
    assert not shifted(Gaussian(2), [1.0, 0.0]).is_geometric
    assert PowerLaw(2, 5.0).concavity_class == S_CONCAVE
    assert PowerLaw(2, 5.0).s == pytest.approx(-1 / 3)


# --- sections ------------------------------------------------------------

@pytest.mark.parametrize("f,ref", [(Gaussian(4), Gaussian(2)), (ExpNorm(4), ExpNorm(2)),
                                   (Indicator(EuclideanBall(4)), Indicator(EuclideanBall(2)))])
def test_sections_of_rotation_invariant_families(f, ref, rng):
    sub = _sub(4, 2, 3)
    s = section(f, sub)
    z = rng.normal(size=(100, 2))
    assert s.dim == 2
    assert np.allclose(s.evaluate(z), ref.evaluate(z))
    assert np.allclose(s.evaluate(z), f.evaluate(z @ sub.frame.T))


def test_section_of_anisotropic_function_matches_pointwise(rng):
    f = shifted(gaussian_cov(np.array([[2.0, 0.5, 0], [0.5, 1.0, 0.2], [0, 0.2, 0.7]])), [0.2, -0.1, 0.3])
    sub = _sub(3, 2, 5)
    z = rng.normal(size=(50, 2))
    assert np.allclose(section(f, sub).evaluate(z), f.evaluate(z @ sub.frame.T))


# --- projections ---------------------------------------------------------

@pytest.mark.parametrize("f,closed", [(Gaussian(3), lambda r: np.exp(-r ** 2 / 2)),
                                      (ExpNorm(3), lambda r: np.exp(-r))])
def test_numeric_projection_matches_closed_form(f, closed, rng):
    sub = _sub(3, 1, 7)
    p = project(f, sub, method="numeric")
    z = rng.normal(size=(40, 1)) * 1.5
    assert np.allclose(p.evaluate(z), closed(np.abs(z[:, 0])), atol=1e-6)


def test_projection_dominates_section_value(rng):
    f = shifted(gaussian_cov(np.array([[1.5, 0.6], [0.6, 0.8]])), [0.4, -0.2])
    sub = _sub(2, 1, 2)
    p = project(f, sub, method="numeric")
    z = rng.normal(size=(60, 1))
    assert np.all(p.evaluate(z) >= f.evaluate(z @ sub.frame.T) - 1e-12)


def test_closed_and_numeric_projection_agree_for_covariance_gaussian(rng):
    f = gaussian_cov(np.array([[2.0, 0.7, 0.1], [0.7, 1.0, 0.0], [0.1, 0.0, 0.5]]))
    sub = _sub(3, 2, 9)
    z = rng.normal(size=(30, 2))
    a = project(f, sub).evaluate(z)
    b = project(f, sub, method="numeric").evaluate(z)
    assert np.allclose(a, b, atol=1e-6)


def test_indicator_projection_of_ball_and_box(rng):
    sub = _sub(3, 2, 4)
    p = project(Indicator(EuclideanBall(3)), sub)
    z = rng.uniform(-1.2, 1.2, size=(200, 2))
    r = np.linalg.norm(z, axis=1)
    keep = np.abs(r - 1) > 1e-6
    assert np.array_equal(p.evaluate(z)[keep] > 0.5, (r <= 1)[keep])
    box = Box([1.0, 0.5, 0.25])
    pb = project(Indicator(box), sub)
    assert pb.mass == pytest.approx(box.projection_volume(sub.frame))


def test_projected_level_set_equals_projection_of_level_set(rng):
    # R_t(P_E f) against P_E(R_t f): for the gaussian both are balls of radius sqrt(2 ln(1/t)) in E
    f = Gaussian(3)
    sub = _sub(3, 2, 1)
    t = 0.3
    r = math.sqrt(2 * math.log(1 / t))
    lvl = level_set(project(f, sub, method="numeric"), t)
    z = rng.uniform(-1.5 * r, 1.5 * r, size=(200, 2))
    rad = np.linalg.norm(z, axis=1)
    keep = np.abs(rad - r) > 1e-5
    assert np.array_equal(lvl.membership(z)[keep], (rad <= r)[keep])


def test_projection_is_log_concave_along_segments(rng):
    f = shifted(gaussian_cov(np.array([[1.0, 0.3, 0], [0.3, 2.0, 0.4], [0, 0.4, 0.6]])), [0.1, 0.2, 0])
    p = project(f, _sub(3, 2, 6), method="numeric")
    x, y = rng.normal(size=(100, 2)), rng.normal(size=(100, 2))
    lam = rng.random(100)
    mid = p.log_rows(lam[:, None] * x + (1 - lam[:, None]) * y)
    assert np.all(mid >= lam * p.log_rows(x) + (1 - lam) * p.log_rows(y) - 1e-7)


# --- level sets ----------------------------------------------------------

def test_level_set_examples():
    g = level_set(Gaussian(2), math.exp(-0.5))
    assert g.membership(np.array([[0.99, 0]]))[0] and not g.membership(np.array([[1.01, 0]]))[0]
    e = level_set(ExpNorm(3), math.exp(-2))
    assert e.membership(np.array([[1.99, 0, 0]]))[0] and not e.membership(np.array([[2.01, 0, 0]]))[0]
    assert e.enclosing_radius == pytest.approx(2.0)
    b = level_set(Indicator(EuclideanBall(2)), 0.5)
    assert b.membership(np.array([[0.9, 0]]))[0] and not b.membership(np.array([[1.1, 0]]))[0]


def test_level_set_empty_and_enclosing(rng):
    assert level_set(Gaussian(2), 1.5).empty
    lvl = level_set(shifted(ExpNorm(2), [0.5, 0.5]), 0.2)
    x = rng.uniform(-5, 5, size=(2000, 2))
    inside = lvl.membership(x)
    assert np.all(np.linalg.norm(x[inside], axis=1) <= lvl.enclosing_radius)
    with pytest.raises(ValueError):
        level_set(Gaussian(2), 0.0)


# --- fradelizi -----------------------------------------------------------

def test_fradelizi_examples():
    mc = McSpec(mass_samples=50_000)
    r = fradelizi_check(Gaussian(2), mc)
    assert r.verdict == "pass" and r.empirical_constant == pytest.approx(1.0)
    r = fradelizi_check(shifted(Gaussian(2), [0.5, 0.0]), mc)
    assert r.verdict == "pass"
    assert r.empirical_constant == pytest.approx(math.exp(0.125))
    assert r.caveats
    assert fradelizi_check(ExpNorm(3), mc).empirical_constant == pytest.approx(1.0)
    assert fradelizi_check(PowerLaw(2, 5.0), mc).verdict == "not-applicable-pass"


# --- constructors --------------------------------------------------------

def test_from_config_roundtrip():
    f = from_config({"family": "gaussian", "dim": 2, "params": {"sigma": 2.0}, "shift": [0.1, 0.0]})
    assert f(np.array([0.1, 0.0])) == pytest.approx(1.0)
    ind = from_config({"family": "indicator", "dim": 3, "params": {"body": "box", "half_widths": [1, 2, 3]}})
    assert ind.mass == pytest.approx(48.0)
    assert from_config({"family": "exp-norm", "dim": 2, "linear_map": [[2, 0], [0, 1]]}).mass == \
        pytest.approx(2 * 2 * math.pi)
    with pytest.raises(ValueError):
        from_config({"family": "nope", "dim": 2})


def test_scaled_and_restricted():
    f = scaled(ExpNorm(2), 2.0)
    assert f(np.array([2.0, 0.0])) == pytest.approx(math.exp(-1))
    assert isinstance(restricted(Constant(2, 1.0), EuclideanBall(2)), Indicator)
    r = restricted(Gaussian(2), EuclideanBall(2))
    assert r.mass == pytest.approx(2 * math.pi * (1 - math.exp(-0.5)))
    assert r(np.array([1.1, 0.0])) == 0.0


def test_linear_image_of_indicator_is_indicator():
    f = linear_image(Indicator(EuclideanBall(2)), np.diag([2.0, 1.0]))
    assert isinstance(f, Indicator) and f.mass == pytest.approx(2 * math.pi)
    assert isinstance(f.body, Ellipsoid)


def test_custom_potential_carries_caveat():
    f = CustomPotential(2, lambda x: np.sum(np.abs(x), axis=1), decay=(1.0, 1.0), sup_norm=1.0)
    assert f(np.array([1.0, 1.0])) == pytest.approx(math.exp(-2))
    assert f.caveats
    p = project(f, Subspace.coordinate(2, [0]))
    assert any("custom" in c for c in p.caveats)
    assert p(np.array([1.0])) == pytest.approx(math.exp(-1), abs=1e-6)
