import math

import numpy as np
import pytest

from lcq.bodies import Box, EuclideanBall
from lcq.core import ExpNorm, Gaussian, Indicator, PowerLaw, linear_image, scaled
from lcq.mc import McSpec
from lcq.quermass import (aleksandrov_monotonicity_check, level_grid, phi_bounds_check, phi_holder_check,
                          phi_indicator_identity, phi_k, phi_k_body, phi_prime_k, psi_k, psi_lower_report,
                          psi_s_concave_check, psi_upper_check, psi_via_ballbody, w_k, w_k_body)
from lcq.report import PASS, REPORT_ONLY, VACUOUS

MC = McSpec(samples=256, seed=7, inner_samples=2048, volume_samples=40_000, mass_samples=200_000)
BALL3 = Indicator(EuclideanBall(3))


def close(est, expect, sig=4.0, rel=1e-9):
    return abs(est.value - expect) <= max(sig * est.stderr, rel * abs(expect))


@pytest.mark.parametrize("f,k,expect", [
    (BALL3, 1, math.pi),
    (ExpNorm(2), 1, 2.0),
    (Gaussian(3), 1, 2 * math.pi),
])
def test_psi_oracles(f, k, expect):
    res = psi_k(f, k, MC)
    assert res.value.value == pytest.approx(expect, rel=1e-9)
    assert res.decomposition["closed_form_inner"]


@pytest.mark.parametrize("f,k,expect", [
    (BALL3, 1, 2.0),
    (BALL3, 2, math.sqrt(math.pi)),
    (Gaussian(2), 1, 2 * math.sqrt(2)),
])
def test_phi_oracles(f, k, expect):
    assert phi_k(f, k, MC).value.value == pytest.approx(expect, rel=1e-7)


@pytest.mark.parametrize("f,expect", [
    (BALL3, 2.0),
    (Gaussian(2), 2 * math.sqrt(math.pi / 2)),
    (ExpNorm(2), 2.0),
])
def test_phi_prime_oracles(f, expect):
    assert phi_prime_k(f, 1, MC).value.value == pytest.approx(expect, rel=1e-7)


def test_w_oracles():
    assert w_k(ExpNorm(2), 1, MC).value.value == pytest.approx(math.pi, rel=1e-9)
    assert w_k(ExpNorm(2), 1, MC, route="levels").value.value == pytest.approx(math.pi, rel=1e-7)
    for k in (1, 2):
        assert w_k(BALL3, k, MC, route="levels").value.value == pytest.approx(4 * math.pi / 3, rel=1e-9)
        assert w_k_body(EuclideanBall(3), k, MC).value == pytest.approx(4 * math.pi / 3, rel=1e-9)
    assert w_k(Gaussian(2), 0, MC).value.value == pytest.approx(2 * math.pi)


def test_level_grid_integrates_distribution_function():
    # ∫₀^sup |{f >= t}| dt = ‖f‖₁ on the grid
    for f in (Gaussian(2), ExpNorm(3), PowerLaw(2, 6.0)):
        ts, ws = level_grid(f)
        vol = np.array([f.level_volume(t) for t in ts])
        assert float(np.sum(ws * vol)) == pytest.approx(f.mass, rel=1e-6)
    ts, ws = level_grid(BALL3)
    assert ts.tolist() == [1.0] and ws.tolist() == [1.0]


def test_psi_upper_and_lower_constants():
    rep = psi_upper_check(BALL3, 1, MC)
    assert rep.verdict == PASS
    assert rep.rhs.value == pytest.approx(math.sqrt(math.e) * (4 * math.pi / 3) ** (2 / 3), rel=1e-9)
    assert rep.rhs.value == pytest.approx(4.284, abs=1e-3)
    low = psi_lower_report(BALL3, 1, MC)
    assert low.verdict == REPORT_ONLY
    assert low.empirical_constant == pytest.approx(1.209, abs=1e-3)
    assert psi_lower_report(ExpNorm(2), 1, MC).empirical_constant == pytest.approx(0.798, abs=1e-3)


def test_psi_s_concave():
    rep = psi_s_concave_check(PowerLaw(3, 8.0), 1, MC)
    assert rep.verdict == PASS and rep.details["delta"] > 0
    assert psi_s_concave_check(Gaussian(3), 1, MC).verdict == VACUOUS


def test_psi_through_ball_body_matches_direct():
    for f in (ExpNorm(3), Gaussian(3)):
        direct = psi_k(f, 1, MC).value.value
        via = psi_via_ballbody(f, 1, McSpec(samples=24, seed=7, inner_samples=2048))
        assert close(via, direct, sig=5.0, rel=2e-3)


def test_affine_invariance_under_unimodular_shear():
    a = np.array([[1.0, 0.8], [0.0, 1.0]])
    mc = McSpec(samples=64, seed=7, volume_samples=10_000)
    for f in (Gaussian(2), Indicator(Box([1.0, 0.5]))):
        g = linear_image(f, a)
        p0, p1 = phi_k(f, 1, mc).value, phi_k(g, 1, mc).value
        assert abs(p0.value - p1.value) <= 5 * math.hypot(p0.stderr, p1.stderr) + 1e-6 * p0.value


def test_phi_prime_homogeneity():
    f = Gaussian(2)
    a = phi_prime_k(f, 1, MC).value.value
    b = phi_prime_k(scaled(f, 1.7), 1, MC).value.value
    assert b == pytest.approx(1.7 * a, rel=1e-9)


def test_phi_bounds_and_constants():
    rep = phi_bounds_check(BALL3, 1, MC)
    assert rep.verdict == PASS
    assert rep.details["c1"] == pytest.approx(0.716, abs=1e-3)
    for f in (Gaussian(3), ExpNorm(2)):
        r = phi_bounds_check(f, 1, MC)
        assert r.verdict == PASS and r.details["ratio_in_band"]


def test_phi_holder_and_indicator_identity():
    assert phi_holder_check(Gaussian(3), 1, MC).verdict == PASS
    assert phi_holder_check(scaled(Gaussian(2), 2.0), 1, MC).verdict == PASS
    rep = phi_indicator_identity(Box([1.0, 0.6, 0.3]), 2, MC)
    assert rep.verdict == PASS
    assert phi_k_body(EuclideanBall(3), 1, MC).value == pytest.approx(2.0)


def test_kubota_routes_agree_for_box_indicator():
    f = Indicator(Box([1.0, 0.5, 0.25]))
    a = w_k(f, 1, MC).value
    b = w_k(f, 1, MC, route="levels").value
    assert abs(a.value - b.value) <= 5 * math.hypot(a.stderr, b.stderr) + 1e-9


def test_aleksandrov():
    for f in (ExpNorm(3), Gaussian(2), Indicator(Box([1.0, 0.5]))):
        rep = aleksandrov_monotonicity_check(f, MC)
        assert rep.verdict == PASS, rep.details
    # u = e^{-|x|} is the equality case: all normalised values coincide
    rep = aleksandrov_monotonicity_check(ExpNorm(3), MC)
    assert np.allclose(rep.details["normalized"], 1.0, rtol=1e-6)
    assert aleksandrov_monotonicity_check(PowerLaw(2, 5.0), MC).verdict == VACUOUS


def test_k_range_errors():
    with pytest.raises(ValueError):
        psi_k(Gaussian(3), 3, MC)
    with pytest.raises(ValueError):
        phi_k(Gaussian(3), 0, MC)
    with pytest.raises(ValueError):
        w_k(Gaussian(2), 1, MC, route="bogus")
