"""Ball's bodies K_p(f) as star bodies, via radial quadrature.

ρ_{K_p(f)}(ξ)^p = (1/f(0)) ∫₀^∞ p r^{p-1} f(rξ) dr.

On a finite range [0, T] the substitution r = T w^{1/p} turns the integral
into T^p ∫₀¹ f(T w^{1/p} ξ) dw, whose integrand is bounded by ‖f‖∞; so
ρ = T (∫₀¹ f(T w^{1/p}ξ)/f(0) dw)^{1/p} never forms r^{p-1} and cannot
overflow for large p.  Power tails f <= A (1 + r/s)^{-α} are split at r = s
and the outer part is mapped to [0, 1] by r = s w^{-1/(α-p)}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammainccinv, gammaln

from .bodies import StarBodyOracle
from .core import LOG_CONCAVE, S_CONCAVE, FunctionDescriptor
from .geometry import section_mass, star_volume
from .mc import McEstimate, McSpec, stream, uniform_sphere
from .report import VerificationReport
from .subspace import Subspace

__all__ = ["QuadratureSpec", "BallBody", "radial", "ball_body", "mass_via_body", "section_volume_identity",
           "inclusion_any_g", "inclusion_log_concave", "inclusion_s_concave", "convexity_probe",
           "integrate_unit"]

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half, QUADPACK order)
_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]


TAIL_SPLIT = 12.0  # ln-radius beyond which power-law tails are in their asymptotic regime
MAX_LOG_RADIUS = 300.0  # keeps |x|² finite in the norm


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "graded-gauss-kronrod-15"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    truncation: float | None = None
    grading: int = 40
    max_refinements: int = 6


def integrate_unit(g, nrows: int, q: QuadratureSpec | None = None, grading: int | None = None):
    """∫₀¹ g_i(w) dw for ``nrows`` integrands at once.

    ``g(idx, w)`` returns an array of shape ``(len(idx), len(w))``.  Panels
    are graded geometrically toward w = 0; rows whose Kronrod-Gauss error
    estimate exceeds the tolerance have all their panels halved, repeatedly.
    Returns ``(value, error_estimate, converged)``.
    """
    q = q or QuadratureSpec()
    depth = min(int(grading or q.grading), 1000)
    base = np.concatenate([[0.0], 2.0 ** -np.arange(depth, 0, -1), [1.0]])
    val = np.zeros(nrows)
    err = np.full(nrows, np.inf)
    done = np.zeros(nrows, bool)
    idx = np.arange(nrows)
    for level in range(q.max_refinements + 1):
        sub = 2 ** level
        edges = np.concatenate([np.linspace(a, b, sub + 1)[:-1] for a, b in zip(base[:-1], base[1:])] + [[1.0]])
        lo, hi = edges[:-1], edges[1:]
        half = 0.5 * (hi - lo)
        w = (0.5 * (hi + lo))[:, None] + half[:, None] * _NODES[None, :]
        vals = np.asarray(g(idx, w.ravel()), dtype=float).reshape(len(idx), len(lo), 15)
        vals = np.nan_to_num(vals, nan=0.0, posinf=0.0)
        k = np.einsum("rpj,j,p->r", vals, _WK, half)
        gs = np.abs(np.einsum("rpj,j,p->rp", vals, _WK - _WG15, half)).sum(axis=1)
        val[idx] = k
        err[idx] = gs
        ok = gs <= np.maximum(q.abs_tol, q.rel_tol * np.abs(k))
        done[idx[ok]] = True
        idx = idx[~ok]
        if not len(idx):
            break
    return val, err, done


def _exp_truncation(a: float, b: float, p: np.ndarray, f0: float, tol: float) -> np.ndarray:
    """T with A ∫_T^∞ p r^{p-1} e^{-Br} dr <= tol f(0)."""
    lg = np.log(tol * f0) + p * math.log(b) - math.log(a) - gammaln(p + 1)
    eps = np.exp(np.minimum(lg, 0.0))
    x = np.where(lg >= 0, 0.0, gammainccinv(p, np.clip(eps, 1e-300, 1.0)))
    return np.maximum(x / b, 1e-300)


def _ray_extent(f: FunctionDescriptor, xi: np.ndarray) -> np.ndarray:
    """sup{r : f(rξ) > 0} for bounded supports, by bisection when no radial oracle exists."""
    rad = f.support_radial(xi)
    if rad is not None:
        return np.minimum(np.asarray(rad, dtype=float), f.support_circumradius)
    lo = np.zeros(len(xi))
    hi = np.full(len(xi), f.support_circumradius)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = np.isfinite(f.log_evaluate(mid[:, None] * xi))
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
        if np.max(hi - lo) <= 1e-13 * f.support_circumradius:
            break
    return lo


def radial(f: FunctionDescriptor, p, xi, q: QuadratureSpec | None = None):
    """ρ_{K_p(f)}(ξ) for unit vectors ξ (rows).  ``p`` may be a scalar or one value per row."""
    q = q or QuadratureSpec()
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    xi = np.atleast_2d(xi)
    if xi.shape[1] != f.dim:
        raise ValueError("direction dimension does not match the function")
    nr = len(xi)
    p = np.broadcast_to(np.asarray(p, dtype=float), (nr,)).copy()
    if (p <= 0).any():
        raise ValueError("p must be positive")
    f0 = f.value_at_origin
    if not f0 > 0:
        raise ValueError("K_p(f) is undefined when f(0) = 0")
    lf0 = math.log(f0)
    nrm = np.linalg.norm(xi, axis=1)
    if np.abs(nrm - 1).max() > 1e-8:
        xi = xi / nrm[:, None]

    def values(points):
        with np.errstate(under="ignore"):
            return np.exp(f.log_evaluate(points) - lf0)

    tail = None if (f.bounded_support or f.decay is not None) else f.tail()
    if tail is None:
        if q.truncation is not None:
            t = np.full(nr, float(q.truncation))
            if f.decay is not None and not f.bounded_support:
                need = _exp_truncation(*f.decay, p, f0, q.abs_tol)
                if (t < need).any():
                    raise ValueError("truncation radius too small for the decay certificate")
        elif f.bounded_support:
            t = _ray_extent(f, xi)
            if f.decay is not None:
                t = np.minimum(t, _exp_truncation(*f.decay, p, f0, q.abs_tol))
        elif f.decay is not None:
            t = _exp_truncation(*f.decay, p, f0, q.abs_tol)
        else:
            raise ValueError(f"{f.describe()}: no decay certificate for the radial integral")

        def g(idx, w):
            r = t[idx, None] * w[None, :] ** (1.0 / p[idx, None])
            pts = r[:, :, None] * xi[idx, None, :]
            return values(pts.reshape(-1, f.dim)).reshape(len(idx), len(w))

        # the bulk of the integrand sits near w ~ (r_typical / T)^p
        depth = q.grading + int(math.ceil(6 * p.max()))
        val, _, ok = integrate_unit(g, nr, q, depth)
        rho = t * np.maximum(val, 0.0) ** (1.0 / p)
    else:
        _, alpha, s = tail
        if (p >= alpha).any():
            raise ValueError(f"K_p(f) is undefined for p >= {alpha} (tail exponent)")
        bexp = alpha - p

        def g_in(idx, w):
            r = s * w[None, :] ** (1.0 / p[idx, None])
            pts = r[:, :, None] * xi[idx, None, :]
            return values(pts.reshape(-1, f.dim)).reshape(len(idx), len(w))

        # w = x^{-(α-p)} maps [s, ∞) to (0, 1]; the integrand x^α f(sx)/A settles to its limit
        # once ln x exceeds a few units, i.e. for w below w0 = e^{-(α-p)U}.  For p near α that
        # transition is a thin layer at w = 1, so [w0, 1] is integrated with grading toward 1;
        # [0, w0] keeps the grading toward 0 for the w^{1/(α-p)} endpoint behaviour.
        w0 = np.maximum(np.exp(-bexp * TAIL_SPLIT), 0.5)

        def tail_values(idx, lx):
            pts = (s * np.exp(lx))[:, :, None] * xi[idx, None, :]
            with np.errstate(under="ignore", over="ignore"):
                lv = f.log_evaluate(pts.reshape(-1, f.dim)).reshape(lx.shape) - lf0
                return np.exp(alpha * lx + lv)

        def g_far(idx, v):
            lx = np.minimum(-(np.log(w0[idx, None]) + np.log(v[None, :])) / bexp[idx, None], MAX_LOG_RADIUS)
            return w0[idx, None] * tail_values(idx, lx)

        def g_near(idx, v):
            lx = -np.log1p(-(1.0 - w0[idx, None]) * v[None, :]) / bexp[idx, None]
            return (1.0 - w0[idx, None]) * tail_values(idx, lx)

        v1, _, ok1 = integrate_unit(g_in, nr, q)
        v2a, _, ok2 = integrate_unit(g_far, nr, q)
        v2b, _, ok3 = integrate_unit(g_near, nr, q)
        v2 = v2a + v2b
        ok = ok1 & ok2 & ok3
        rho = s * np.maximum(v1 + p / bexp * v2, 0.0) ** (1.0 / p)
    if not ok.all():
        import warnings
        warnings.warn(f"radial quadrature did not reach tolerance for {int((~ok).sum())} directions",
                      RuntimeWarning, stacklevel=2)
    return float(rho[0]) if single else rho


class BallBody(StarBodyOracle):
    """K_p(f) with its radial function evaluated by quadrature on demand."""

    kind = "ball-body"

    def __init__(self, f: FunctionDescriptor, p: float, q: QuadratureSpec | None = None):
        if not f.value_at_origin > 0:
            raise ValueError("K_p(f) is undefined when f(0) = 0")
        if f.decay is None and not f.bounded_support and f.alpha is not None and not p < f.alpha:
            raise ValueError(f"K_p(f) is undefined for p >= alpha = {f.alpha}")
        self.f = f
        self.p = float(p)
        self.q = q or QuadratureSpec()
        self.convex = f.concavity_class == LOG_CONCAVE
        super().__init__(f.dim, self._radius_bound(), {"function": f.describe(), "p": self.p})

    def _radius_bound(self) -> float:
        f, p = self.f, self.p
        lead = f.sup_norm / f.value_at_origin
        if f.bounded_support:
            return f.support_circumradius * lead ** (1.0 / p)
        if f.decay is not None:
            t = float(_exp_truncation(*f.decay, np.array([p]), f.value_at_origin, self.q.abs_tol)[0])
            return t * (lead + self.q.abs_tol) ** (1.0 / p)
        a, alpha, s = f.tail()
        return s * (lead + p / (alpha - p) * a / f.value_at_origin) ** (1.0 / p)

    def radial(self, xi):
        return radial(self.f, self.p, np.atleast_2d(xi), self.q)

    @property
    def rotation_invariant(self):
        return self.f.rotation_invariant


def ball_body(f: FunctionDescriptor, p: float, q: QuadratureSpec | None = None) -> BallBody:
    return BallBody(f, p, q)


def mass_via_body(f: FunctionDescriptor, q: QuadratureSpec | None = None, mc: McSpec | None = None) -> McEstimate:
    """f(0)|K_n(f)| with |K_n(f)| = ω_n E[ρ^n] over uniform directions."""
    mc = mc or McSpec()
    body = BallBody(f, f.dim, q)
    vol = star_volume(body.radial, f.dim, mc, tag="ball-body-volume")
    f0 = f.value_at_origin
    return McEstimate(f0 * vol.value, f0 * vol.stderr, vol.samples, vol.seed, "ball-body")


def section_volume_identity(f: FunctionDescriptor, sub: Subspace, q: QuadratureSpec | None = None,
                            mc: McSpec | None = None, rel_tol: float | None = None) -> VerificationReport:
    """f(0)|K_m(f) ∩ E| against ∫_E f, m = dim E."""
    mc = mc or McSpec()
    m = sub.dim
    body = BallBody(f, m, q)
    frame = sub.frame
    vol = star_volume(lambda th: body.radial(th @ frame.T), m, mc, tag="ball-body-section")
    f0 = f.value_at_origin
    lhs = McEstimate(f0 * vol.value, f0 * vol.stderr, vol.samples, vol.seed, "ball-body")
    rhs = section_mass(f, sub, mc, mc.seed)
    return VerificationReport.equality("ballbody-section-identity", lhs, rhs, seed=mc.seed, rel_tol=rel_tol,
                                       instance=f"{f.describe()},m={m}")


# ---------------------------------------------------------------------------
# inclusion lemmas, checked ray by ray
# ---------------------------------------------------------------------------

def _directions(n: int, directions, seed: int):
    if directions is None:
        directions = 200
    if np.isscalar(directions):
        return uniform_sphere(stream(seed, "directions", 0), int(directions), n)
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _ray_sup(f: FunctionDescriptor, xi: np.ndarray, q: QuadratureSpec, points: int = 400) -> np.ndarray:
    """max_r f(rξ) / f(0) on a grid along each ray (diagnostic only)."""
    if f.bounded_support:
        t = _ray_extent(f, xi)
    elif f.decay is not None:
        t = np.full(len(xi), f.enclosing_radius(1e-8 * f.sup_norm))
    else:
        t = np.full(len(xi), f.enclosing_radius(1e-8 * f.sup_norm))
    r = np.linspace(0.0, 1.0, points)[None, :] * t[:, None]
    pts = (r[:, :, None] * xi[:, None, :]).reshape(-1, f.dim)
    v = np.exp(f.log_evaluate(pts)).reshape(len(xi), points)
    return v.max(axis=1) / f.value_at_origin


def _inclusion_report(sid, ratio, tol, seed, instance, details, constant=None, empirical=None):
    worst = float(np.max(ratio))
    viol = int(np.sum(ratio > 1.0 + tol))
    rep = VerificationReport.inequality(sid, worst, 1.0, explicit_constant=constant, seed=seed, tol=tol,
                                        instance=instance)
    rep.empirical_constant = empirical
    rep.details = {"directions": int(len(ratio)), "violations": viol, "max_ratio": worst, **details}
    return rep


def _pq(p, q_exponent, count):
    p = np.broadcast_to(np.asarray(p, dtype=float), (count,))
    qe = np.broadcast_to(np.asarray(q_exponent, dtype=float), (count,))
    if (p > qe).any():
        raise ValueError("need p <= q")
    return p, qe


def inclusion_any_g(f: FunctionDescriptor, p, q_exponent, directions=None, quad: QuadratureSpec | None = None,
                    seed: int = 0, tol: float = 1e-6) -> VerificationReport:
    """ρ_{K_p} <= (‖f‖∞/f(0))^{1/p-1/q} ρ_{K_q} on sampled directions."""
    quad = quad or QuadratureSpec()
    xi = _directions(f.dim, directions, seed)
    p, qe = _pq(p, q_exponent, len(xi))
    lead = f.sup_norm / f.value_at_origin
    factor = lead ** (1.0 / p - 1.0 / qe)
    rp, rq = radial(f, p, xi, quad), radial(f, qe, xi, quad)
    ratio = rp / (factor * rq)
    tight = _ray_sup(f, xi, quad) ** (1.0 / p - 1.0 / qe)
    return _inclusion_report("ballbody-inclusion-bounded", ratio, tol + 10 * quad.rel_tol, seed,
                             f.describe(), {"max_ratio_with_ray_factor": float(np.max(rp / (tight * rq))),
                                            "max_factor": float(np.max(factor))},
                             constant=float(np.max(factor)), empirical=float(np.max(rp / rq)))


def inclusion_log_concave(f: FunctionDescriptor, p, q_exponent, directions=None,
                          quad: QuadratureSpec | None = None, seed: int = 0, tol: float = 1e-6) -> VerificationReport:
    """Γ(p+1)^{1/p}/Γ(q+1)^{1/q} ρ_{K_q} <= ρ_{K_p} on sampled directions."""
    quad = quad or QuadratureSpec()
    if f.concavity_class != LOG_CONCAVE:
        return VerificationReport.not_applicable("ballbody-inclusion-log-concave", "needs a log-concave function",
                                                 seed=seed, instance=f.describe())
    xi = _directions(f.dim, directions, seed)
    p, qe = _pq(p, q_exponent, len(xi))
    gam = np.exp(gammaln(p + 1) / p - gammaln(qe + 1) / qe)
    rp, rq = radial(f, p, xi, quad), radial(f, qe, xi, quad)
    ratio = gam * rq / rp
    return _inclusion_report("ballbody-inclusion-log-concave", ratio, tol + 10 * quad.rel_tol, seed, f.describe(),
                             {"max_abs_gap": float(np.max(np.abs(ratio - 1.0)))},
                             constant=float(np.min(gam)), empirical=float(np.min(rp / rq)))


def inclusion_s_concave(f: FunctionDescriptor, p, q_exponent, directions=None, quad: QuadratureSpec | None = None,
                        seed: int = 0, tol: float = 1e-6) -> VerificationReport:
    """ρ_{K_q} <= (qB(q,α-q))^{1/q}/(pB(p,α-p))^{1/p} ρ_{K_p}, α = n - 1/s."""
    quad = quad or QuadratureSpec()
    if f.concavity_class != S_CONCAVE or f.alpha is None:
        return VerificationReport.not_applicable("ballbody-inclusion-s-concave", "needs an s-concave density (s < 0)",
                                                 seed=seed, instance=f.describe())
    alpha = f.alpha
    xi = _directions(f.dim, directions, seed)
    p, qe = _pq(p, q_exponent, len(xi))
    if (qe >= alpha).any():
        raise ValueError(f"K_q(f) is undefined for q >= alpha = {alpha}")
    fac = np.exp((np.log(qe) + betaln(qe, alpha - qe)) / qe - (np.log(p) + betaln(p, alpha - p)) / p)
    rp, rq = radial(f, p, xi, quad), radial(f, qe, xi, quad)
    ratio = rq / (fac * rp)
    return _inclusion_report("ballbody-inclusion-s-concave", ratio, tol + 10 * quad.rel_tol, seed, f.describe(),
                             {"alpha": alpha, "s": f.s}, constant=float(np.max(fac)),
                             empirical=float(np.max(rq / rp)))


def convexity_probe(body: StarBodyOracle, pairs: int = 200, seed: int = 0, tol: float = 1e-7) -> dict:
    """Midpoints of boundary point pairs must lie in a convex body."""
    rng = stream(seed, "convexity", 0)
    a = uniform_sphere(rng, pairs, body.dim)
    b = uniform_sphere(rng, pairs, body.dim)
    x = body.radial(a)[:, None] * a
    y = body.radial(b)[:, None] * b
    g = body.gauge(0.5 * (x + y))
    return {"pairs": pairs, "violations": int(np.sum(g > 1 + tol)), "max_gauge": float(np.max(g))}
