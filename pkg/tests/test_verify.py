import json
import math

import numpy as np
import pytest

from lcq.bodies import Box, EuclideanBall
from lcq.constants import delta, omega, stirling_ratio
from lcq.core import Constant, ExpNorm, Gaussian, Indicator, PowerLaw
from lcq.mc import McSpec
from lcq.report import FAIL, PASS, REPORT_ONLY, VACUOUS
from lcq.verify import (REGISTRY, RunConfig, constants_check, list_statements, run, sampled_max, suite_dual_grinberg_body,
                        suite_mean_value, suite_mixed, suite_quotient, suite_quotient_s, suite_shephard,
                        suite_slicing, suite_volume_ratio)

MC = McSpec(samples=64, seed=3, inner_samples=2048, volume_samples=20_000, mass_samples=100_000)
B3 = EuclideanBall(3)


def test_mixed_equality_cases():
    for f in (ExpNorm(3), Gaussian(3)):
        for k in (1, 2):
            rep = suite_mixed(f, f, k, MC, subspaces=32)
            assert rep.verdict == PASS and rep.hypothesis_status == "satisfied"
            assert rep.details["hypothesis_equality"]
            assert rep.explicit_constant == pytest.approx(stirling_ratio(3, k))
    rep = suite_mixed(ExpNorm(3), ExpNorm(3), 1, MC, subspaces=8)
    assert rep.lhs.value == pytest.approx(8 * math.pi)
    assert rep.explicit_constant == pytest.approx(6 / 2 ** 1.5)


def test_mixed_containment_and_gating():
    rep = suite_mixed(Indicator(EuclideanBall(2)), Indicator(EuclideanBall(2, 2.0)), 1, MC, subspaces=16)
    assert rep.verdict == PASS and not rep.details["hypothesis_equality"]
    # larger f: hypothesis fails on every subspace and the conclusion is not counted
    rep = suite_mixed(Indicator(EuclideanBall(2, 2.0)), Indicator(EuclideanBall(2)), 1, MC, subspaces=16)
    assert rep.verdict == VACUOUS and rep.hypothesis_status == "violated"
    assert suite_mixed(PowerLaw(2, 5.0), Gaussian(2), 1, MC).verdict == VACUOUS


def test_quotient_gaussian_in_ball():
    rep = suite_quotient(Gaussian(3), Constant(3, 1.0), B3, B3, 1, MC, directions=50, subspaces=16)
    assert rep.verdict == REPORT_ONLY
    checks = rep.details["checks"]
    assert set(checks) == {"mass-identity", "section-identity", "gamma-inclusion", "bounded-inclusion"}
    assert all(c["verdict"] == PASS for c in checks.values())
    assert rep.empirical_constant > 0


def test_quotient_trivial_ratio_and_box():
    rep = suite_quotient(Constant(3, 1.0), Constant(3, 1.0), B3, B3, 1, MC, directions=20, subspaces=8)
    assert rep.lhs.value == pytest.approx(1.0) and rep.rhs.value == pytest.approx(1.0)
    assert rep.verdict != FAIL
    rep = suite_quotient(ExpNorm(2), Constant(2, 1.0), Box([1.0, 1.0]), EuclideanBall(2), 1, MC, directions=20,
                         subspaces=16)
    assert rep.verdict == REPORT_ONLY


def test_slicing_constant_for_ball():
    rep = suite_slicing(Constant(3, 1.0), B3, 1, MC, directions=20, subspaces=8)
    assert rep.empirical_constant == pytest.approx((4 * math.pi / 3) ** (2 / 3) / math.pi, rel=1e-9)
    assert rep.details["chain_factor_at_most_one"]
    assert rep.verdict == REPORT_ONLY
    rep = suite_slicing(ExpNorm(2), EuclideanBall(2, 2.0), 1, MC, directions=20, subspaces=16)
    assert rep.verdict == REPORT_ONLY


def test_volume_ratio_and_mean_value():
    rep = suite_volume_ratio(B3, B3, 1, MC, subspaces=8)
    assert rep.lhs.value == pytest.approx(1.0) and rep.empirical_constant == pytest.approx(1.0)
    for f, K in [(Gaussian(3), B3), (ExpNorm(2), Box([1.0, 1.0])), (PowerLaw(2, 5.0), EuclideanBall(2))]:
        rep = suite_mean_value(f, K, 1, MC, subspaces=16)
        assert rep.verdict == REPORT_ONLY and rep.empirical_constant > 0


def test_quotient_s_concave():
    rep = suite_quotient_s(PowerLaw(2, 6.0), Constant(2, 1.0), EuclideanBall(2), EuclideanBall(2), 1, MC,
                           directions=50, subspaces=16)
    assert rep.verdict == REPORT_ONLY
    assert rep.details["checks"]["delta-inclusion"]["verdict"] == PASS
    assert rep.details["delta"] == pytest.approx(delta(2, 1, -0.25))
    trend = list(rep.details["delta_trend"].values())
    assert trend[0] < trend[1] < trend[2]


def test_shephard_ball_in_cube():
    rep = suite_shephard(Indicator(B3), Indicator(Box([1.0, 1.0, 1.0])), 1, MC, subspaces=64, levels=8)
    assert rep.verdict == PASS and rep.hypothesis_status == "satisfied"
    assert rep.rhs.value == pytest.approx(math.sqrt(3) * 8 ** (2 / 3))
    assert rep.lhs.value == pytest.approx((4 * math.pi / 3) ** (2 / 3))


def test_shephard_gaussians():
    rep = suite_shephard(Gaussian(2), Gaussian(2, 2.0), 1, MC, subspaces=32, levels=16)
    assert rep.verdict == PASS and rep.hypothesis_status == "satisfied"
    rep = suite_shephard(Gaussian(2, 2.0), Gaussian(2), 1, MC, subspaces=32, levels=16)
    assert rep.verdict == VACUOUS


def test_dual_grinberg_body():
    rep = suite_dual_grinberg_body(B3, 2, MC)
    assert rep.verdict == PASS
    assert rep.lhs.value == pytest.approx(rep.rhs.value, rel=1e-9)
    rep = suite_dual_grinberg_body(Box([1.0, 0.5, 0.7]), 2, MC)
    assert rep.verdict == PASS and rep.lhs.value < rep.rhs.value
    # homogeneity: the ratio is invariant under dilation
    a = suite_dual_grinberg_body(EuclideanBall(3, 2.0), 1, MC)
    assert a.empirical_constant == pytest.approx(1.0, rel=1e-9)


def test_constants_check():
    rep = constants_check(50)
    assert rep.verdict == PASS
    assert rep.details["gamma_ratio_floor"] == pytest.approx(0.389665, abs=1e-6)
    assert rep.details["gamma_ratio_argmin"] == (50, 1)


def test_sampled_max_improves_on_draws():
    target = np.array([1.0, 2.0, 3.0]) / math.sqrt(14)
    stat = lambda e, s: float(np.linalg.norm(e.frame.T @ target))
    mx, best, vals = sampled_max(stat, 3, 1, MC, samples=16)
    assert mx >= vals.max()
    assert mx == pytest.approx(1.0, abs=0.02)


def test_registry_listing():
    rows = list_statements()
    assert len(rows) == len(REGISTRY) == 24
    assert {"psi-upper", "constants", "radon-quotient", "shephard"} <= {r["id"] for r in rows}


def test_run_config_errors():
    with pytest.raises(ValueError):
        RunConfig.from_dict({"suites": [], "seed": 1})
    with pytest.raises(ValueError):
        RunConfig.from_dict({"suites": ["thm-3.1-upper"], "seed": 1})
    with pytest.raises(ValueError):
        RunConfig.from_dict({"suites": ["psi-upper"]})


def test_run_psi_upper_on_three_families(tmp_path):
    cfg = {"suites": ["psi-upper"], "seed": 5, "dims": [3], "ks": [1],
           "functions": [{"family": "gaussian"}, {"family": "exp-norm"},
                         {"family": "indicator", "params": {"body": "ball"}}],
           "mc": {"samples": 32}}
    out = tmp_path / "r.json"
    doc = run(cfg, out=out, echo=None)
    assert [s["verdict"] for s in doc["statements"]] == [PASS] * 3
    saved = json.loads(out.read_text())
    assert set(saved) == {"statements", "config_hash", "config", "summary"}
    row = saved["statements"][0]
    assert {"id", "verdict", "lhs", "rhs", "stderr", "constant", "empirical_constant", "seed", "caveats"} <= set(row)
    assert out.with_suffix(".csv").exists()


def test_rerun_is_identical_modulo_runtime(tmp_path):
    cfg = {"suites": ["psi-upper", "phi-bounds", "ballbody-mass-identity"], "seed": 9, "dims": [2],
           "functions": [{"family": "exp-norm"}, {"family": "indicator", "params": {"body": "box", "h": 0.7}}],
           "mc": {"samples": 32, "mass_samples": 20000, "volume_samples": 5000}}

    def strip(doc):
        for s in doc["statements"]:
            s.pop("runtime_ms", None)
        return json.dumps(doc, sort_keys=True)

    a = run(cfg, echo=None)
    b = run(RunConfig.from_dict(cfg, workers=4), echo=None)
    assert strip(a) == strip(b)
