"""Closed-form constants: ball volumes, Beta/Gamma ratios and the explicit
factors that appear in the inequalities checked by :mod:`lcq.verify`."""
from __future__ import annotations

import math

from scipy.special import betaln, gammaln


def omega(n: int | float) -> float:
    """Volume of the Euclidean unit ball in dimension ``n`` (``omega(0) = 1``)."""
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


def log_omega(n: int | float) -> float:
    return 0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0)


def beta(x: float, y: float) -> float:
    return math.exp(betaln(x, y))


def stirling_ratio(n: int, k: int) -> float:
    """``n! / ((n-k)!)^(n/(n-k))``, the constant of the sections-vs-projections bound."""
    _check_nk(n, k)
    return math.exp(gammaln(n + 1) - n / (n - k) * gammaln(n - k + 1))


def gamma_ratio(n: int, k: int) -> float:
    """``((n-k)!)^(1/k) / (n!)^((n-k)/(kn))``; bounded below uniformly in n, k."""
    _check_nk(n, k)
    return math.exp(gammaln(n - k + 1) / k - (n - k) / (k * n) * gammaln(n + 1))


def inclusion_gamma_factor(p: float, q: float) -> float:
    """``Gamma(p+1)^(1/p) / Gamma(q+1)^(1/q)`` (at most 1 for p <= q)."""
    return math.exp(gammaln(p + 1) / p - gammaln(q + 1) / q)


def inclusion_beta_factor(p: float, q: float, alpha: float) -> float:
    """``(q B(q, alpha-q))^(1/q) / (p B(p, alpha-p))^(1/p)`` for ``p <= q < alpha``."""
    if not 0 < p <= q < alpha:
        raise ValueError(f"need 0 < p <= q < alpha, got p={p}, q={q}, alpha={alpha}")
    return math.exp((math.log(q) + betaln(q, alpha - q)) / q - (math.log(p) + betaln(p, alpha - p)) / p)


def alpha_from_s(n: int, s: float) -> float:
    """Exponent ``alpha = n - 1/s`` of the (-1/alpha)-concave density of an s-concave measure."""
    if not s < 0:
        raise ValueError("s must be negative")
    return n - 1.0 / s


def s_from_alpha(n: int, alpha: float) -> float:
    if not alpha > n:
        raise ValueError("alpha must exceed the dimension")
    return -1.0 / (alpha - n)


def delta(n: int, k: int, s: float) -> float:
    """Inclusion constant ``K_n(f) ⊆ delta * K_{n-k}(f)`` for s-concave densities."""
    _check_nk(n, k)
    if not s < 0:
        raise ValueError("s must be negative")
    b = -1.0 / s
    num = (math.log(n) + betaln(n, b)) / n
    den = (math.log(n - k) + betaln(n - k, k + b)) / (n - k)
    return math.exp(num - den)


def phi_const(n: int, k: int) -> float:
    """``min{log n, (n/k) sqrt(log(e n / k))}``."""
    _check_nk(n, k)
    return min(math.log(n), (n / k) * math.sqrt(math.log(math.e * n / k)))


def s_tilde(n: int, k: int) -> float:
    """``min{sqrt(n/(n-k)) ln(e n/(n-k)), ln n}``."""
    _check_nk(n, k)
    return min(math.sqrt(n / (n - k)) * math.log(math.e * n / (n - k)), math.log(n))


def section_ball_ratio(n: int, k: int) -> float:
    """``omega_{n-k} / omega_n^((n-k)/n)``; lies strictly between 1 and e^(k/2)."""
    _check_nk(n, k)
    return math.exp(log_omega(n - k) - (n - k) / n * log_omega(n))


def grinberg_constant(n: int, m: int) -> float:
    """``omega_m^n / omega_n^m``."""
    return math.exp(n * log_omega(m) - m * log_omega(n))


def aleksandrov_factor(n: int, k: int) -> float:
    """``(n!)^((n-k)/n) / ((n-k)! omega_n^(k/n))``."""
    return math.exp((n - k) / n * gammaln(n + 1) - gammaln(n - k + 1) - k / n * log_omega(n))


def _check_nk(n: int, k: int) -> None:
    if not (n >= 2 and 1 <= k <= n - 1):
        raise ValueError(f"need n >= 2 and 1 <= k <= n-1, got n={n}, k={k}")
