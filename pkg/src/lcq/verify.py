"""Inequality verification suites, the statement registry and the campaign runner."""
from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import ballbodies as bb
from . import quermass as qm
from .bodies import EuclideanBall, StarBodyOracle, body_from_config
from .constants import (delta, gamma_ratio, grinberg_constant, inclusion_gamma_factor, omega, s_tilde,
                        section_ball_ratio, stirling_ratio)
from .core import (LOG_CONCAVE, S_CONCAVE, Constant, FunctionDescriptor, Indicator, fradelizi_check, from_config,
                   level_set, project, restricted)
from .geometry import (grassmann_values, grinberg_functional_check, haar_subspaces, mass, mean_estimate,
                       section_mass)
from .mc import McEstimate, McSpec, derive_seed, exact, power, stream
from .report import FAIL, PASS, REPORT_ONLY, VACUOUS, VerificationReport, agree, within

HYPOTHESIS_SUBSPACES = 256
HYPOTHESIS_LEVELS = 32
CLIMB_STEPS = 24


def _total(f: FunctionDescriptor, mc: McSpec) -> McEstimate:
    return exact(f.mass) if f.mass is not None else mass(f, mc)


def _sub_reports_ok(reps) -> bool:
    return all(r.verdict != FAIL for r in reps)


def _fold(rep: VerificationReport, parts: dict) -> VerificationReport:
    """Attach sub-checks; any failing sub-check fails the statement."""
    rep.details.setdefault("checks", {})
    for name, r in parts.items():
        rep.details["checks"][name] = {"verdict": r.verdict, "lhs": r.lhs.value, "rhs": r.rhs.value,
                                       "stderr": r.stderr, **{k: v for k, v in r.details.items()
                                                              if isinstance(v, (int, float, bool, str))}}
        rep.caveats.extend(c for c in r.caveats if c not in rep.caveats)
    if not _sub_reports_ok(parts.values()):
        rep.verdict = FAIL
    return rep


# ---------------------------------------------------------------------------
# sampled maximum over a Grassmannian
# ---------------------------------------------------------------------------

def sampled_max(stat: Callable, n: int, m: int, mc: McSpec, samples: int | None = None, tag="max",
                steps: int = CLIMB_STEPS, step: float = 0.2):
    """Largest value of ``stat(E, seed)`` over Haar draws, refined by a small-rotation hill climb.

    The climb reuses the inner seed of the best draw so that candidate
    values differ by the change of subspace rather than by fresh noise.
    Returns (value, subspace, all sampled values).
    """
    vals, subs = grassmann_values(stat, n, m, mc, samples, tag)
    i = int(np.argmax(vals))
    best, bv = subs[i], float(vals[i])
    inner = derive_seed(mc.seed, tag, "inner", i)
    rng = stream(derive_seed(mc.seed, tag, "climb"), tag, 0)
    for _ in range(steps):
        a = rng.standard_normal((n, n))
        cand = best.rotated(expm(0.5 * step * (a - a.T)))
        v = float(stat(cand, inner))
        if v > bv:
            best, bv = cand, v
        else:
            step *= 0.8
    return bv, best, vals


MAX_CAVEAT = "max over subspaces approximated by the sampled maximum with hill-climb refinement"


# ---------------------------------------------------------------------------
# sections against projections
# ---------------------------------------------------------------------------

def _projected_mass(f, e, mc, seed):
    pf = project(f, e)
    if pf.mass is not None:
        return exact(pf.mass)
    return mass(pf, mc.with_seed(seed), samples=mc.inner_samples, tag="projected-mass")


def suite_mixed(f: FunctionDescriptor, g: FunctionDescriptor, k: int, mc: McSpec | None = None,
                subspaces: int = HYPOTHESIS_SUBSPACES) -> VerificationReport:
    """If ‖P_E f‖₁ <= ‖g|_E‖₁ for all E in G_{n,n-k}, then ‖f‖₁ <= n!/((n-k)!)^{n/(n-k)} ‖g‖₁."""
    mc = mc or McSpec()
    sid = "sections-vs-projections"
    n = f.dim
    inst = f"{f.describe()}|{g.describe()},k={k}"
    if not (f.is_geometric and f.concavity_class == LOG_CONCAVE):
        return VerificationReport.not_applicable(sid, "f must be geometric log-concave", seed=mc.seed, instance=inst)
    if not (g.sup_exact and abs(g.sup_norm - 1.0) < 1e-12):
        return VerificationReport.not_applicable(sid, "g must have sup-norm exactly 1", seed=mc.seed, instance=inst)
    subs = haar_subspaces(n, n - k, subspaces, mc.seed, "mixed-hypothesis")
    held, equal, worst = True, True, 0.0
    for j, e in enumerate(subs):
        seed = derive_seed(mc.seed, "mixed", j)
        a = _projected_mass(f, e, mc, seed)
        b = section_mass(g, e, mc, seed)
        held &= within(a, b)
        equal &= agree(a, b)
        worst = max(worst, a.value / b.value - 1.0)
    status = "satisfied" if held else "violated"
    c = stirling_ratio(n, k)
    tf, tg = _total(f, mc), _total(g, mc)
    rhs = McEstimate(c * tg.value, c * tg.stderr, tg.samples, tg.seed, tg.scheme)
    rep = VerificationReport.inequality(sid, tf, rhs, explicit_constant=c, seed=mc.seed, hypothesis_status=status,
                                        caveats=[f"hypothesis checked on {len(subs)} sampled subspaces"],
                                        instance=inst)
    rep.empirical_constant = tf.value / tg.value
    rep.details = {"hypothesis_equality": bool(equal), "hypothesis_max_rel_excess": worst, "subspaces": len(subs)}
    return rep


# ---------------------------------------------------------------------------
# Radon-transform quotients
# ---------------------------------------------------------------------------

def _quotient_parts(f, g, K, T, k, mc, directions, subspaces, quad):
    n = f.dim
    fK, gT = restricted(f, K), restricted(g, T)
    f0 = f.value_at_origin
    mf, mg = _total(fK, mc), _total(gT, mc)

    def ratio(e, seed):
        return section_mass(fK, e, mc, seed).value / f0 / section_mass(gT, e, mc, seed).value

    mx, best, vals = sampled_max(ratio, n, n - k, mc, subspaces, tag="quotient-max")
    lhs = (mf.value / f0 / mg.value) ** ((n - k) / n)
    return fK, gT, mf, mg, lhs, mx, best, vals


def _quotient_skeleton(fK, gT, best, k, mc, directions, quad, log_concave=True):
    n = fK.dim
    parts = {
        "mass-identity": VerificationReport.equality("ballbody-mass-identity", bb.mass_via_body(fK, quad, mc),
                                                     _total(fK, mc), seed=mc.seed),
        "section-identity": bb.section_volume_identity(fK, best, quad, mc),
    }
    if log_concave:
        parts["gamma-inclusion"] = bb.inclusion_log_concave(fK, n - k, n, directions, quad, mc.seed)
    if gT.value_at_origin == gT.sup_norm and gT.sup_exact:
        parts["bounded-inclusion"] = bb.inclusion_any_g(gT, n - k, n, directions, quad, mc.seed)
    return parts


def suite_quotient(f: FunctionDescriptor, g: FunctionDescriptor, K: StarBodyOracle, T: StarBodyOracle, k: int,
                   mc: McSpec | None = None, directions: int = 200, subspaces: int | None = None,
                   quad=None) -> VerificationReport:
    """((f(0)^{-1}∫_K f)/∫_T g)^{(n-k)/n} <= C^k max_E (f(0)^{-1}∫_{K∩E} f)/(∫_{T∩E} g).

    C is an unspecified absolute constant, so the empirical C is reported; the
    explicit identities and inclusions the bound is built from are asserted.
    """
    mc = mc or McSpec()
    sid = "radon-quotient"
    n = f.dim
    inst = f"{f.describe()}|{g.describe()}|{K.kind}|{T.kind},k={k}"
    if f.concavity_class != LOG_CONCAVE or not K.convex:
        return VerificationReport.not_applicable(sid, "f log-concave and K convex required", seed=mc.seed,
                                                 instance=inst)
    if not (g.sup_exact and g.value_at_origin == g.sup_norm == 1.0):
        return VerificationReport.not_applicable(sid, "g(0) = ‖g‖∞ = 1 required", seed=mc.seed, instance=inst)
    fK, gT, mf, mg, lhs, mx, best, vals = _quotient_parts(f, g, K, T, k, mc, directions, subspaces, quad)
    c_emp = (lhs / mx) ** (1.0 / k)
    rep = VerificationReport.report_only(sid, lhs, mx, c_emp, seed=mc.seed, caveats=[MAX_CAVEAT], instance=inst)
    rep.details = {"gamma_ratio": gamma_ratio(n, k), "stirling_ratio": stirling_ratio(n, k),
                   "subspaces": len(vals), "mass_K": mf.value, "mass_T": mg.value}
    return _fold(rep, _quotient_skeleton(fK, gT, best, k, mc, directions, quad))


def suite_volume_ratio(K: StarBodyOracle, T: StarBodyOracle, k: int, mc: McSpec | None = None,
                       subspaces: int | None = None) -> VerificationReport:
    """(|K|/|T|)^{(n-k)/n} <= C^k max_E |K∩E|/|T∩E|; empirical C reported."""
    mc = mc or McSpec()
    n = K.dim
    one = Constant(n, 1.0)
    fK, gT = restricted(one, K), restricted(one, T)
    mf, mg = _total(fK, mc), _total(gT, mc)

    def ratio(e, seed):
        return section_mass(fK, e, mc, seed).value / section_mass(gT, e, mc, seed).value

    mx, _, vals = sampled_max(ratio, n, n - k, mc, subspaces, tag="volume-ratio")
    lhs = (mf.value / mg.value) ** ((n - k) / n)
    return VerificationReport.report_only("volume-ratio", lhs, mx, (lhs / mx) ** (1.0 / k), seed=mc.seed,
                                          caveats=[MAX_CAVEAT], instance=f"{K.kind}|{T.kind},n={n},k={k}",
                                          details={"subspaces": len(vals)})


def suite_slicing(f: FunctionDescriptor, K: StarBodyOracle, k: int, mc: McSpec | None = None,
                  directions: int = 200, subspaces: int | None = None, quad=None) -> VerificationReport:
    """∫_K f <= C^k |K|^{k/n} max_E ∫_{K∩E} f for geometric log-concave f.

    Asserted: ω_n^{(n-k)/n}/ω_{n-k} <= 1 and the identities and inclusions for
    f·1_K against the unit ball with g = 1.  Reported: empirical C.
    """
    mc = mc or McSpec()
    sid = "slicing"
    n = f.dim
    inst = f"{f.describe()}|{K.kind},k={k}"
    if not (f.is_geometric and f.concavity_class == LOG_CONCAVE) or not K.convex:
        return VerificationReport.not_applicable(sid, "needs geometric log-concave f and convex K", seed=mc.seed,
                                                 instance=inst)
    fK = restricted(f, K)
    mf = _total(fK, mc)
    vol = K.volume if K.volume is not None else _total(restricted(Constant(n, 1.0), K), mc).value

    def smass(e, seed):
        return section_mass(fK, e, mc, seed).value

    mx, best, vals = sampled_max(smass, n, n - k, mc, subspaces, tag="slicing-max")
    rhs = vol ** (k / n) * mx
    c_emp = (mf.value / rhs) ** (1.0 / k)
    chain = 1.0 / section_ball_ratio(n, k)
    rep = VerificationReport.report_only(sid, mf, rhs, c_emp, seed=mc.seed, caveats=[MAX_CAVEAT], instance=inst)
    rep.details = {"chain_factor": chain, "chain_factor_at_most_one": chain <= 1.0, "subspaces": len(vals),
                   "volume_K": vol, "corollary_constant": c_emp * chain ** (-1.0 / k)}
    if chain > 1.0:
        rep.verdict = FAIL
    gT = Indicator(EuclideanBall(n))
    return _fold(rep, _quotient_skeleton(fK, gT, best, k, mc, directions, quad))


def suite_mean_value(f: FunctionDescriptor, K: StarBodyOracle, k: int, mc: McSpec | None = None,
                     subspaces: int | None = None) -> VerificationReport:
    """(1/|K|)∫_K f <= C^k max_E (1/|K∩E|)∫_{K∩E} f; report-only."""
    mc = mc or McSpec()
    n = f.dim
    fK = restricted(f, K)
    one = restricted(Constant(n, 1.0), K)
    mean_k = _total(fK, mc).value / _total(one, mc).value

    def avg(e, seed):
        return section_mass(fK, e, mc, seed).value / section_mass(one, e, mc, seed).value

    mx, _, vals = sampled_max(avg, n, n - k, mc, subspaces, tag="mean-value-max")
    return VerificationReport.report_only("mean-value", mean_k, mx, (mean_k / mx) ** (1.0 / k), seed=mc.seed,
                                          caveats=[MAX_CAVEAT], instance=f"{f.describe()}|{K.kind},k={k}",
                                          details={"subspaces": len(vals)})


def suite_quotient_s(f: FunctionDescriptor, g: FunctionDescriptor, K: StarBodyOracle, T: StarBodyOracle, k: int,
                     mc: McSpec | None = None, directions: int = 200, subspaces: int | None = None,
                     quad=None) -> VerificationReport:
    """s-concave quotient bound with factor δ_{n,k,s}^{n-k} C^k.

    Asserted: K_n(f_K) ⊆ δ_{n,k,s} K_{n-k}(f_K) ray by ray.  Reported: C after
    dividing the quotient by δ^{n-k}.
    """
    mc = mc or McSpec()
    sid = "radon-quotient-s-concave"
    n = f.dim
    inst = f"{f.describe()}|{g.describe()}|{K.kind}|{T.kind},k={k}"
    if f.concavity_class != S_CONCAVE or f.s is None or not K.convex:
        return VerificationReport.not_applicable(sid, "needs an s-concave density (s < 0) and convex K",
                                                 seed=mc.seed, instance=inst)
    if not (g.sup_exact and g.value_at_origin == g.sup_norm == 1.0):
        return VerificationReport.not_applicable(sid, "g(0) = ‖g‖∞ = 1 required", seed=mc.seed, instance=inst)
    s = f.s
    d = delta(n, k, s)
    fK, gT, mf, mg, lhs, mx, best, vals = _quotient_parts(f, g, K, T, k, mc, directions, subspaces, quad)
    c_emp = (lhs / (d ** (n - k) * mx)) ** (1.0 / k)
    rep = VerificationReport.report_only(sid, lhs, mx, c_emp, seed=mc.seed, caveats=[MAX_CAVEAT], instance=inst)
    trend = {str(t): delta(n, k, t) for t in (-0.1, -0.5, -1.0)}
    rep.details = {"delta": d, "s": s, "delta_trend": trend,
                   "log_concave_limit": 1.0 / inclusion_gamma_factor(n - k, n), "subspaces": len(vals)}
    rep.explicit_constant = d
    parts = _quotient_skeleton(fK, gT, best, k, mc, directions, quad, log_concave=False)
    parts["delta-inclusion"] = bb.inclusion_s_concave(fK, n - k, n, directions, quad, mc.seed)
    return _fold(rep, parts)


# ---------------------------------------------------------------------------
# Shephard-type comparison of projections
# ---------------------------------------------------------------------------

def suite_shephard(f: FunctionDescriptor, g: FunctionDescriptor, k: int, mc: McSpec | None = None,
                   subspaces: int = HYPOTHESIS_SUBSPACES, levels: int = HYPOTHESIS_LEVELS) -> VerificationReport:
    """If |P_E R_t(f)| <= |P_E R_t(g)| for E in G_{n,n-k} and t in (0,1], then
    ‖f‖₁^{(n-k)/n} <= n^{k/2} ‖g‖₁^{(n-k)/n}."""
    mc = mc or McSpec()
    sid = "shephard"
    n = f.dim
    inst = f"{f.describe()}|{g.describe()},k={k}"
    for h in (f, g):
        if not (h.is_geometric and h.concavity_class == LOG_CONCAVE):
            return VerificationReport.not_applicable(sid, "f and g must be geometric log-concave", seed=mc.seed,
                                                     instance=inst)
    subs = haar_subspaces(n, n - k, subspaces, mc.seed, "shephard-hypothesis")
    ts = np.arange(1, levels + 1) / levels
    vf, _ = qm._volumes_matrix([level_set(f, t) for t in ts], subs, mc, "shephard-f")
    vg, _ = qm._volumes_matrix([level_set(g, t) for t in ts], subs, mc, "shephard-g")
    slack = 1e-9 * np.maximum(vg, 1e-300)
    held = bool(np.all(vf <= vg + slack))
    status = "satisfied" if held else "violated"
    e = (n - k) / n
    tf, tg = power(_total(f, mc), e), power(_total(g, mc), e)
    lead = n ** (k / 2)
    rhs = McEstimate(lead * tg.value, lead * tg.stderr, tg.samples, tg.seed, tg.scheme)
    rep = VerificationReport.inequality(sid, tf, rhs, explicit_constant=lead, seed=mc.seed, hypothesis_status=status,
                                        caveats=[f"hypothesis checked on a {len(subs)}x{levels} (E, t) grid"],
                                        instance=inst)
    rep.empirical_constant = tf.value / tg.value
    alt = s_tilde(n, k) ** k
    rep.details = {"grid": [len(subs), levels], "hypothesis_max_ratio": float(np.max(vf / np.maximum(vg, 1e-300))),
                   "s_tilde_power_k": alt, "s_tilde_bound_smaller": alt < lead,
                   "s_tilde_ratio": tf.value / (alt * tg.value)}
    return rep


# ---------------------------------------------------------------------------
# Grinberg inequality for bodies
# ---------------------------------------------------------------------------

def suite_dual_grinberg_body(K: StarBodyOracle, k: int, mc: McSpec | None = None,
                             samples: int | None = None) -> VerificationReport:
    """E_{E in G_{n,k}} |K∩E|ⁿ <= (ω_kⁿ/ω_n^k)|K|^k, and the resulting bound
    (E|K∩E|ⁿ)^{1/((n-k)n)} <= √e |K|^{k/((n-k)n)}."""
    mc = mc or McSpec()
    n = K.dim
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}")

    def stat(e, seed):
        return qm._section_volume(K, e, mc, seed).value ** n

    vals, _ = grassmann_values(stat, n, k, mc, samples, tag="grinberg-body")
    lhs = mean_estimate(vals, mc.seed)
    vol = exact(K.volume) if K.volume is not None else _total(Indicator(K), mc)
    c = grinberg_constant(n, k)
    rhs = McEstimate(c * vol.value ** k, c * k * vol.value ** (k - 1) * vol.stderr)
    rep = VerificationReport.inequality("grinberg-body", lhs, rhs, explicit_constant=c, seed=mc.seed,
                                        instance=f"{K.kind},n={n},k={k}")
    rep.empirical_constant = lhs.value / rhs.value
    e = 1.0 / ((n - k) * n)
    psi = power(lhs, e)
    ball_const = c ** e
    sqrt_e = math.sqrt(math.e)
    vk = vol.value ** (k * e)
    psi_ok = within(psi, McEstimate(ball_const * vk, ball_const * k * e * vk * vol.rel_stderr))
    const_ok = 1.0 < section_ball_ratio(n, n - k) < math.exp((n - k) / 2.0) and ball_const <= sqrt_e
    rep.details = {"psi": psi.value, "psi_ball_bound": ball_const * vk, "psi_sqrt_e_bound": sqrt_e * vk,
                   "ball_constant": ball_const, "constant_chain_ok": const_ok, "equality_gap": rhs.value - lhs.value,
                   "subspaces": len(vals)}
    if not (psi_ok and const_ok):
        rep.verdict = FAIL
    return rep


def constants_check(n_max: int = 50) -> VerificationReport:
    """Arithmetic facts: 1 < ω_{n-k}/ω_n^{(n-k)/n} < e^{k/2}, ω_n^{(n-k)/n}/ω_{n-k} <= 1, and the
    gamma_ratio floor over n <= n_max (reported against 1/2)."""
    bad = []
    floor, at = math.inf, None
    for n in range(2, n_max + 1):
        for k in range(1, n):
            r = section_ball_ratio(n, k)
            if not 1.0 < r < math.exp(k / 2.0):
                bad.append((n, k, r))
            g = gamma_ratio(n, k)
            if g < floor:
                floor, at = g, (n, k)
    rep = VerificationReport.inequality("constants", float(len(bad)), 0.0, seed=0, instance=f"n<={n_max}",
                                        tol=0.0)
    rep.empirical_constant = floor
    rep.details = {"section_ball_violations": bad, "gamma_ratio_floor": floor, "gamma_ratio_argmin": at,
                   "gamma_ratio_floor_at_least_half": floor >= 0.5}
    return rep


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Statement:
    sid: str
    needs: str  # "f", "fk", "pair", "body", "fbody", "none"
    summary: str
    run: Callable


def _inclusion_pairs(f, mc, count=200, lo=0.05):
    rng = stream(mc.seed, "inclusion-pq", 0)
    top = f.dim if f.alpha is None else min(float(f.dim), 0.999 * f.alpha)
    pq = np.sort(rng.uniform(lo, top, size=(count, 2)), axis=1)
    xi = bb._directions(f.dim, count, mc.seed)
    return pq[:, 0], pq[:, 1], xi


def _inclusion(fn):
    def run(f, mc):
        p, q, xi = _inclusion_pairs(f, mc)
        return fn(f, p, q, xi, seed=mc.seed)
    return run


def _section_identity(f, k, mc):
    sub = haar_subspaces(f.dim, f.dim - k, 1, mc.seed, "section-identity")[0]
    return bb.section_volume_identity(f, sub, mc=mc)


def _kubota_routes(f, k, mc):
    a = qm.w_k(f, k, mc, route="projection").value
    b = qm.w_k(f, k, mc, route="levels").value
    return VerificationReport.equality("kubota-routes", a, b, seed=mc.seed, instance=f"{f.describe()},k={k}")


def _unit_ball(n):
    return EuclideanBall(n)


REGISTRY: dict[str, Statement] = {s.sid: s for s in [
    Statement("ballbody-mass-identity", "f", "f(0)|K_n(f)| = ‖f‖₁",
              lambda f, mc: VerificationReport.equality("ballbody-mass-identity", bb.mass_via_body(f, mc=mc),
                                                        _total(f, mc), seed=mc.seed, instance=f.describe())),
    Statement("ballbody-section-identity", "fk", "f(0)|K_{n-k}(f) ∩ E| = ∫_E f", _section_identity),
    Statement("ballbody-inclusion-bounded", "f", "K_p(f) ⊆ (‖f‖∞/f(0))^{1/p-1/q} K_q(f)",
              _inclusion(bb.inclusion_any_g)),
    Statement("ballbody-inclusion-log-concave", "f", "Γ(p+1)^{1/p}/Γ(q+1)^{1/q} K_q(f) ⊆ K_p(f)",
              _inclusion(bb.inclusion_log_concave)),
    Statement("ballbody-inclusion-s-concave", "f", "K_q(f) ⊆ Beta-factor K_p(f) for s-concave densities",
              _inclusion(bb.inclusion_s_concave)),
    Statement("fradelizi", "f", "‖f‖∞ <= eⁿ f(0) for centered log-concave f",
              lambda f, mc: fradelizi_check(f, mc)),
    Statement("grinberg-functional", "fk", "E‖f|_H‖₁ⁿ/‖f|_H‖∞^{n-k} <= (ω_kⁿ/ω_n^k)‖f‖₁^k",
              lambda f, k, mc: grinberg_functional_check(f, k, mc)),
    Statement("grinberg-body", "body", "E|K∩E|ⁿ <= (ω_kⁿ/ω_n^k)|K|^k and the √e bound",
              lambda K, k, mc: suite_dual_grinberg_body(K, k, mc)),
    Statement("psi-upper", "fk", "Ψ_k(f) <= √e ‖f‖∞^{1/n} ‖f‖₁^{(n-k)/(kn)}",
              lambda f, k, mc: qm.psi_upper_check(f, k, mc)),
    Statement("psi-lower", "fk", "empirical lower constant for Ψ_k(f)", lambda f, k, mc: qm.psi_lower_report(f, k, mc)),
    Statement("psi-s-concave", "fk", "Ψ_k bounds for s-concave densities",
              lambda f, k, mc: qm.psi_s_concave_check(f, k, mc)),
    Statement("phi-bounds", "fk", "Φ_k(f) against √(n/k)‖f‖₁^{1/n}", lambda f, k, mc: qm.phi_bounds_check(f, k, mc)),
    Statement("phi-holder", "fk", "Φ'_k(f) <= Φ_k(f)", lambda f, k, mc: qm.phi_holder_check(f, k, mc)),
    Statement("phi-indicator-identity", "body", "Φ_k(1_K) = Φ_k(K)",
              lambda K, k, mc: qm.phi_indicator_identity(K, k, mc)),
    Statement("kubota-routes", "fk", "W_k(f) by projections equals W_k(f) by level sets", _kubota_routes),
    Statement("aleksandrov", "f", "(W_k(f)/W_k(u))^{1/(n-k)} nondecreasing in k",
              lambda f, mc: qm.aleksandrov_monotonicity_check(f, mc)),
    Statement("sections-vs-projections", "pair", "‖P_E f‖₁ <= ‖g|_E‖₁ implies ‖f‖₁ <= Stirling ratio ‖g‖₁",
              lambda f, g, k, mc: suite_mixed(f, g, k, mc)),
    Statement("radon-quotient", "fbody", "quotient of Radon transforms, unit ball T and g = 1",
              lambda f, K, k, mc: suite_quotient(f, Constant(f.dim, 1.0), K, _unit_ball(f.dim), k, mc)),
    Statement("slicing", "fbody", "∫_K f <= C^k |K|^{k/n} max_E ∫_{K∩E} f", lambda f, K, k, mc: suite_slicing(f, K, k, mc)),
    Statement("mean-value", "fbody", "mean value inequality for sections",
              lambda f, K, k, mc: suite_mean_value(f, K, k, mc)),
    Statement("volume-ratio", "body", "(|K|/|B|)^{(n-k)/n} <= C^k max_E |K∩E|/|B∩E|",
              lambda K, k, mc: suite_volume_ratio(K, _unit_ball(K.dim), k, mc)),
    Statement("radon-quotient-s-concave", "fbody", "quotient bound with the δ_{n,k,s} factor",
              lambda f, K, k, mc: suite_quotient_s(f, Constant(f.dim, 1.0), K, _unit_ball(f.dim), k, mc)),
    Statement("shephard", "pair", "projected level sets comparison implies ‖f‖₁^{(n-k)/n} <= n^{k/2}‖g‖₁^{(n-k)/n}",
              lambda f, g, k, mc: suite_shephard(f, g, k, mc)),
    Statement("constants", "none", "explicit constant facts", lambda mc: constants_check()),
]}


def list_statements() -> list[dict]:
    return [{"id": s.sid, "needs": s.needs, "summary": s.summary} for s in REGISTRY.values()]


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    functions: list
    suites: list
    dims: list
    ks: list | None
    mc: McSpec
    seed: int
    output: str | None = None
    bodies: list | None = None
    pairs: list | None = None

    @classmethod
    def from_dict(cls, d: dict, seed: int | None = None, workers: int | None = None) -> "RunConfig":
        if "seed" not in d and seed is None:
            raise ValueError("config needs a seed")
        suites = list(d.get("suites") or [])
        if not suites:
            raise ValueError("config lists no suites")
        unknown = [s for s in suites if s not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown statement id(s): {', '.join(unknown)}")
        s = int(seed if seed is not None else d["seed"])
        mc = McSpec.from_dict(dict(d.get("mc") or {})).with_seed(s)
        if workers is not None:
            mc = replace(mc, workers=int(workers))
        return cls(functions=list(d.get("functions") or []), suites=suites, dims=list(d.get("dims") or [2, 3]),
                   ks=None if d.get("ks") is None else list(d["ks"]), mc=mc, seed=s, output=d.get("output"),
                   bodies=d.get("bodies"), pairs=d.get("pairs"))

    def canonical(self) -> dict:
        mc = {k: v for k, v in asdict(self.mc).items() if k != "workers"}
        return {"functions": self.functions, "suites": self.suites, "dims": self.dims, "ks": self.ks, "mc": mc,
                "seed": self.seed, "bodies": self.bodies, "pairs": self.pairs}

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _expand(cfgs, dims):
    out = []
    for c in cfgs:
        for n in ([c["dim"]] if "dim" in c else dims):
            out.append({**c, "dim": int(n)})
    return out


def _ks(n, ks):
    return [k for k in (ks or range(1, n)) if 1 <= k <= n - 1]


def _instances(st: Statement, cfg: RunConfig):
    funcs = _expand(cfg.functions, cfg.dims)
    bodies = _expand(cfg.bodies or [{"body": "ball"}], cfg.dims)
    if st.needs == "none":
        yield ()
    elif st.needs == "f":
        for c in funcs:
            yield (from_config(c),)
    elif st.needs == "fk":
        for c in funcs:
            for k in _ks(c["dim"], cfg.ks):
                yield (from_config(c), k)
    elif st.needs == "body":
        for b in bodies:
            for k in _ks(b["dim"], cfg.ks):
                yield (body_from_config(b), k)
    elif st.needs == "fbody":
        for c in funcs:
            for b in bodies:
                if b["dim"] != c["dim"]:
                    continue
                for k in _ks(c["dim"], cfg.ks):
                    yield (from_config(c), body_from_config(b), k)
    elif st.needs == "pair":
        pairs = cfg.pairs or [[c, c] for c in cfg.functions]
        for a, b in pairs:
            for pa, pb in zip(_expand([a], cfg.dims), _expand([b], cfg.dims)):
                for k in _ks(pa["dim"], cfg.ks):
                    yield (from_config(pa), from_config(pb), k)


def run_statement(sid: str, args: tuple, mc: McSpec) -> VerificationReport:
    st = REGISTRY[sid]
    t0 = time.perf_counter()
    try:
        rep = st.run(*args, mc)
    except ValueError as exc:
        inst = ",".join(getattr(a, "describe", lambda: str(a))() if not isinstance(a, int) else f"k={a}"
                        for a in args)
        rep = VerificationReport.not_applicable(sid, f"hypothesis unsatisfiable: {exc}", seed=mc.seed,
                                                instance=str(inst))
    rep.statement_id = sid
    rep.seed = mc.seed
    rep.runtime_ms = 1000.0 * (time.perf_counter() - t0)
    if not isinstance(rep.instance, str):
        rep.instance = str(rep.instance)
    return rep


def run(config: RunConfig | dict, out: str | Path | None = None, echo=print) -> dict:
    """Run every requested statement over its instances; write JSON and CSV reports."""
    cfg = config if isinstance(config, RunConfig) else RunConfig.from_dict(config)
    reports = []
    for sid in cfg.suites:
        for args in _instances(REGISTRY[sid], cfg):
            rep = run_statement(sid, args, cfg.mc)
            reports.append(rep)
            if echo:
                echo(rep.summary_line())
    doc = {"statements": [r.to_dict() for r in reports], "config_hash": cfg.config_hash(),
           "config": cfg.canonical(), "summary": summarize(reports)}
    path = out or cfg.output
    if path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        write_csv(reports, path.with_suffix(".csv"))
    if echo:
        s = doc["summary"]
        echo(f"{s['total']} statements: {s['pass']} pass, {s['fail']} fail, {s['report-only']} report-only, "
             f"{s['not-applicable-pass']} not applicable")
    return doc


def summarize(reports) -> dict:
    out = {"total": len(reports), PASS: 0, FAIL: 0, REPORT_ONLY: 0, VACUOUS: 0}
    for r in reports:
        out[r.verdict] += 1
    return out


CSV_FIELDS = ["id", "instance", "verdict", "hypothesis_status", "lhs", "rhs", "stderr", "constant",
              "empirical_constant", "seed"]


def write_csv(reports, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        w.writeheader()
        for r in reports:
            w.writerow(r.to_dict(runtime=False))
