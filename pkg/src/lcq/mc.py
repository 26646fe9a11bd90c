"""Monte Carlo plumbing: estimates, budgets and counter-based random streams.

Every random draw in the package comes from :func:`stream`, keyed by
``(seed, tag, index)``.  Estimators split their work into fixed-size blocks,
one stream per block, and reduce the block sums in block order.  The result
therefore does not depend on how many workers evaluated the blocks.
"""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

BLOCK = 4096


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float = 0.0
    samples: int = 0
    seed: int = 0
    scheme: str = "exact"

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError(f"stderr must be non-negative, got {self.stderr}")

    @property
    def rel_stderr(self) -> float:
        if self.value == 0:
            return 0.0 if self.stderr == 0 else math.inf
        return self.stderr / abs(self.value)

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples,
                "seed": self.seed, "scheme": self.scheme}

    def __float__(self) -> float:
        return float(self.value)


def exact(value: float, scheme: str = "exact") -> McEstimate:
    return McEstimate(float(value), 0.0, 0, 0, scheme)


@dataclass(frozen=True)
class McSpec:
    """Sampling budget.  ``workers`` never changes a result, only wall time."""

    samples: int = 4096
    seed: int = 0
    inner_samples: int = 2048
    volume_samples: int = 100_000
    mass_samples: int = 1_000_000
    workers: int = 1

    @classmethod
    def from_dict(cls, d: dict | None) -> "McSpec":
        d = dict(d or {})
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        return cls(**known)

    def with_seed(self, seed: int) -> "McSpec":
        return replace(self, seed=int(seed))

    def derive(self, *tags) -> "McSpec":
        return replace(self, seed=derive_seed(self.seed, *tags))


def _tag_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xFFFFFFFFFFFFFFFF
    h = hashlib.blake2b(repr(tag).encode(), digest_size=8).digest()
    return int.from_bytes(h, "little")


def derive_seed(seed: int, *tags) -> int:
    """Stable 63-bit seed from a parent seed and arbitrary tags."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed).to_bytes(16, "little", signed=True))
    for t in tags:
        h.update(b"|")
        h.update(repr(t).encode())
    return int.from_bytes(h.digest(), "little") >> 1


def stream(seed: int, tag, index: int = 0) -> np.random.Generator:
    """Philox generator for one (seed, purpose-tag, index) triple."""
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, _tag_int(tag), int(index)]
    ss = np.random.SeedSequence(key)
    return np.random.Generator(np.random.Philox(ss))


def uniform_sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((count, dim))
    nrm = np.linalg.norm(g, axis=1, keepdims=True)
    nrm[nrm == 0] = 1.0
    return g / nrm


def uniform_ball(rng: np.random.Generator, count: int, dim: int, radius: float = 1.0) -> np.ndarray:
    u = uniform_sphere(rng, count, dim)
    r = radius * rng.random(count) ** (1.0 / dim)
    return u * r[:, None]


def parallel_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """Ordered map; threads only when ``workers > 1``."""
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def block_mean(sampler: Callable[[np.random.Generator, int], np.ndarray], samples: int,
               seed: int, tag, workers: int = 1, scheme: str = "mc") -> McEstimate:
    """Mean of i.i.d. draws ``sampler(rng, count)`` over ``samples`` draws.

    Draws are produced in blocks of :data:`BLOCK`; block ``i`` uses
    ``stream(seed, tag, i)``.  Sums are combined with ``math.fsum`` in block
    order, so the estimate is bit-identical for any ``workers``.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    nblocks = -(-samples // BLOCK)
    sizes = [min(BLOCK, samples - i * BLOCK) for i in range(nblocks)]

    def run(i):
        vals = np.asarray(sampler(stream(seed, tag, i), sizes[i]), dtype=float)
        m = math.fsum(vals) / len(vals)
        return len(vals), m, math.fsum((vals - m) ** 2)

    parts = parallel_map(run, list(range(nblocks)), workers)
    # Chan et al. pairwise update, applied in block order
    count, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = count + nb
        delta = mb - mean
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * count * nb / tot
        count = tot
    se = math.sqrt(m2 / (count - 1) / count) if count > 1 else math.inf
    return McEstimate(mean, se, samples, int(seed), scheme)


def combine_stderr(*ests) -> float:
    return math.sqrt(sum((e.stderr if isinstance(e, McEstimate) else 0.0) ** 2 for e in ests))


def scale(est: McEstimate, factor: float) -> McEstimate:
    return McEstimate(est.value * factor, est.stderr * abs(factor), est.samples, est.seed, est.scheme)


def power(est: McEstimate, p: float) -> McEstimate:
    """Delta-method power of a positive estimate."""
    if est.value <= 0:
        return McEstimate(0.0 if est.value == 0 else math.nan, est.stderr, est.samples, est.seed, est.scheme)
    v = est.value ** p
    return McEstimate(v, abs(p) * v * est.stderr / est.value, est.samples, est.seed, est.scheme)
