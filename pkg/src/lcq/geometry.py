"""Grassmannian sampling and Monte Carlo masses and volumes."""
from __future__ import annotations

import inspect
import math
from typing import Callable

import numpy as np

from .bodies import StarBodyOracle
from .constants import (aleksandrov_factor, alpha_from_s, beta, delta, gamma_ratio, grinberg_constant,
                        inclusion_beta_factor, inclusion_gamma_factor, log_omega, omega, phi_const,
                        s_from_alpha, s_tilde, section_ball_ratio, stirling_ratio)
from .mc import BLOCK, McEstimate, McSpec, block_mean, derive_seed, exact, parallel_map, stream, uniform_sphere
from .subspace import Subspace, orthonormalize

__all__ = [
    "haar_subspace", "haar_subspaces", "mass", "barycenter", "set_volume", "star_volume",
    "grassmann_integrate", "grassmann_values", "section_mass", "section_sup", "grinberg_functional_check",
    "omega", "log_omega", "beta", "stirling_ratio", "gamma_ratio", "delta", "phi_const", "s_tilde",
    "section_ball_ratio", "grinberg_constant", "aleksandrov_factor", "inclusion_gamma_factor",
    "inclusion_beta_factor", "alpha_from_s", "s_from_alpha",
]


def haar_subspace(n: int, m: int, rng: np.random.Generator) -> Subspace:
    """Haar-distributed element of G_{n,m}."""
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got n={n}, m={m}")
    while True:
        g = rng.standard_normal((n, m))
        if np.linalg.matrix_rank(g) == m:
            return Subspace(orthonormalize(g))


def haar_subspaces(n: int, m: int, count: int, seed: int, tag="grassmann") -> list[Subspace]:
    """``count`` subspaces, the i-th drawn from its own stream (seed, tag, i)."""
    return [haar_subspace(n, m, stream(seed, tag, i)) for i in range(count)]


# ---------------------------------------------------------------------------
# masses
# ---------------------------------------------------------------------------

def mass(f, mc: McSpec | None = None, samples: int | None = None, tag="mass") -> McEstimate:
    """‖f‖₁ by importance sampling from the function's decay envelope."""
    mc = mc or McSpec()
    n = samples or mc.mass_samples
    if f.dim == 0:
        return exact(float(f.evaluate(np.zeros((1, 0)))[0]))
    env = f.envelope()

    def draw(rng, count):
        x = env.sample(rng, count)
        lw = f.log_rows(x) - env.log_pdf(x)
        with np.errstate(under="ignore"):
            return np.exp(lw)

    return block_mean(draw, n, mc.seed, tag, mc.workers, scheme="importance")


def barycenter(f, mc: McSpec | None = None, samples: int | None = None):
    """Self-normalised importance estimate of the barycenter and its standard errors."""
    mc = mc or McSpec()
    n_s = samples or min(mc.mass_samples, 200_000)
    env = f.envelope()
    nb = -(-n_s // BLOCK)

    def run(i):
        rng = stream(mc.seed, "barycenter", i)
        x = env.sample(rng, min(BLOCK, n_s - i * BLOCK))
        with np.errstate(under="ignore"):
            w = np.exp(f.log_rows(x) - env.log_pdf(x))
        return x, w

    parts = parallel_map(run, list(range(nb)), mc.workers)
    x = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    sw = w.sum()
    if not sw > 0:
        raise ValueError("barycenter: no mass found by the proposal")
    bar = (w[:, None] * x).sum(axis=0) / sw
    # delta-method standard error of a ratio estimator
    resid = w[:, None] * (x - bar)
    se = np.sqrt((resid ** 2).sum(axis=0)) / sw
    return bar, se


# ---------------------------------------------------------------------------
# volumes
# ---------------------------------------------------------------------------

def _membership(s):
    if isinstance(s, StarBodyOracle):
        return s.contains, s.circumradius, s.dim
    return s.membership, s.enclosing_radius, s.dim


def set_volume(s, mc: McSpec | None = None, samples: int | None = None, tag="volume") -> McEstimate:
    """Hit-or-miss volume of a membership set inside its enclosing ball."""
    mc = mc or McSpec()
    if getattr(s, "empty", False):
        return exact(0.0)
    member, radius, dim = _membership(s)
    if getattr(s, "degenerate", False) or radius <= 0:
        return McEstimate(0.0, 0.0, 0, mc.seed, "degenerate")
    if not math.isfinite(radius):
        raise ValueError("set_volume needs a finite enclosing radius")
    ball = omega(dim) * radius ** dim
    n = samples or mc.volume_samples

    def draw(rng, count):
        u = uniform_sphere(rng, count, dim) * (radius * rng.random(count) ** (1.0 / dim))[:, None]
        return np.asarray(member(u), dtype=float)

    est = block_mean(draw, n, mc.seed, tag, mc.workers, scheme="hit-or-miss")
    p = est.value
    se = math.sqrt(max(p * (1 - p), 0.0) / n)
    return McEstimate(ball * p, ball * se, n, mc.seed, "hit-or-miss")


def star_volume(radial: Callable[[np.ndarray], np.ndarray], dim: int, mc: McSpec | None = None,
                samples: int | None = None, tag="star-volume") -> McEstimate:
    """|K| = ω_m E[ρ_K(θ)^m] over uniform directions θ of S^{m-1}."""
    mc = mc or McSpec()
    if dim == 0:
        return exact(1.0)
    n = samples or mc.samples
    w = omega(dim)

    def draw(rng, count):
        th = uniform_sphere(rng, count, dim)
        return w * np.asarray(radial(th), dtype=float) ** dim

    return block_mean(draw, n, mc.seed, tag, mc.workers, scheme="spherical")


# ---------------------------------------------------------------------------
# Grassmannian averages
# ---------------------------------------------------------------------------

def _arity(fn) -> int:
    try:
        return len([p for p in inspect.signature(fn).parameters.values()
                    if p.default is inspect.Parameter.empty
                    and p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD)])
    except (TypeError, ValueError):
        return 1


def grassmann_values(statistic, n: int, m: int, mc: McSpec | None = None, samples: int | None = None,
                     tag="grassmann", subspaces: list | None = None) -> tuple[np.ndarray, list]:
    """Evaluate ``statistic`` on Haar subspaces; returns (values, subspaces).

    A two-argument statistic receives ``(E, seed)`` with a seed derived from
    the run seed and the subspace index, for its own inner Monte Carlo.
    """
    mc = mc or McSpec()
    subs = subspaces if subspaces is not None else haar_subspaces(n, m, samples or mc.samples, mc.seed, tag)
    two = _arity(statistic) >= 2

    def run(i):
        e = subs[i]
        if two:
            return float(statistic(e, derive_seed(mc.seed, tag, "inner", i)))
        return float(statistic(e))

    vals = np.array(parallel_map(run, list(range(len(subs))), mc.workers))
    return vals, subs


def mean_estimate(vals: np.ndarray, seed: int = 0, scheme: str = "grassmann") -> McEstimate:
    n = len(vals)
    m = math.fsum(vals) / n
    se = math.sqrt(math.fsum((vals - m) ** 2) / (n - 1) / n) if n > 1 else math.inf
    if se < 1e-14 * abs(m):
        se = 0.0
    return McEstimate(m, se, n, seed, scheme)


def grassmann_integrate(statistic, n: int, m: int, mc: McSpec | None = None, samples: int | None = None,
                        tag="grassmann") -> McEstimate:
    """∫_{G_{n,m}} statistic dν estimated by the sample mean over Haar draws."""
    mc = mc or McSpec()
    vals, _ = grassmann_values(statistic, n, m, mc, samples, tag)
    return mean_estimate(vals, mc.seed)


# ---------------------------------------------------------------------------
# section statistics
# ---------------------------------------------------------------------------

def section_mass(f, sub: Subspace, mc: McSpec | None = None, seed: int = 0) -> McEstimate:
    """‖f|_E‖₁: closed form when available, radial volume for bodies, else inner MC."""
    from .core import Constant, Indicator, Restricted, section

    mc = mc or McSpec()
    v = f.section_mass(sub)
    if v is not None:
        return exact(v)
    if isinstance(f, Indicator):
        body = f.body.section(sub)
        if body.volume is not None:
            return exact(body.volume)
        return star_volume(body.radial, sub.dim, mc.with_seed(seed), samples=mc.inner_samples)
    if isinstance(f, Restricted) and isinstance(f.base, (Indicator, Constant)):
        # flat on K ∩ supp(base): integrate the radial function of the intersection
        bodies = [f.body.section(sub)]
        if isinstance(f.base, Indicator):
            bodies.append(f.base.body.section(sub))
        c = f.base.sup_norm
        if len(bodies) == 1 and bodies[0].volume is not None:
            return exact(c * bodies[0].volume)
        est = star_volume(lambda th: np.min([b.radial(th) for b in bodies], axis=0), sub.dim,
                          mc.with_seed(seed), samples=mc.inner_samples)
        return McEstimate(c * est.value, c * est.stderr, est.samples, est.seed, est.scheme)
    return mass(section(f, sub), mc.with_seed(seed), samples=mc.inner_samples)


def section_sup(f, sub: Subspace, opt=None) -> float:
    """‖f|_E‖∞ from metadata, or by maximising ln f over E."""
    from .core import maximize_over_fiber

    v = f.section_sup(sub)
    if v is not None:
        return v
    if f.is_geometric:
        return 1.0
    radius = f.enclosing_radius(max(f.value_at_origin, 1e-12 * f.sup_norm))
    best, _, _ = maximize_over_fiber(f.log_evaluate, np.zeros((1, f.dim)), sub.frame, np.array([radius]), opt)
    return float(np.exp(best[0]))


def grinberg_functional_check(f, m: int, mc: McSpec | None = None):
    """E_H ‖f|_H‖₁ⁿ / ‖f|_H‖∞^{n-m} <= (ω_mⁿ/ω_n^m) ‖f‖₁^m over H in G_{n,m}."""
    from .report import VerificationReport

    mc = mc or McSpec()
    n = f.dim
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got m={m}")

    def stat(h, seed):
        return section_mass(f, h, mc, seed).value ** n / section_sup(f, h) ** (n - m)

    vals, _ = grassmann_values(stat, n, m, mc, tag="grinberg-functional")
    lhs = mean_estimate(vals, mc.seed)
    tot = exact(f.mass) if f.mass is not None else mass(f, mc)
    c = grinberg_constant(n, m)
    rhs = McEstimate(c * tot.value ** m, c * m * tot.value ** (m - 1) * tot.stderr, tot.samples, mc.seed, tot.scheme)
    rep = VerificationReport.inequality("grinberg-functional", lhs, rhs, explicit_constant=c, seed=mc.seed,
                                        instance=f"{f.describe()},m={m}")
    rep.empirical_constant = lhs.value / rhs.value * c if rhs.value else None
    rep.details = {"ratio": lhs.value / rhs.value if rhs.value else None, "subspaces": len(vals)}
    return rep
