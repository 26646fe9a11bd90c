"""Star bodies given by radial-function oracles."""
from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np

from .constants import omega
from .subspace import Subspace


def _unit_rows(x: np.ndarray):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    r = np.linalg.norm(x, axis=1)
    safe = np.where(r > 0, r, 1.0)
    return x / safe[:, None], r


class StarBodyOracle:
    """Star body with the origin in its interior, described by its radial function.

    Subclasses override :meth:`radial` and, where a closed form exists,
    :meth:`projection_volume`, :meth:`section` and :attr:`volume`.
    """

    kind = "star"
    convex = True

    def __init__(self, dim: int, circumradius: float, params: dict | None = None):
        self.dim = int(dim)
        self.circumradius = float(circumradius)
        self.params = dict(params or {})

    # --- oracles -------------------------------------------------------
    def radial(self, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gauge(self, x: np.ndarray) -> np.ndarray:
        u, r = _unit_rows(x)
        out = np.zeros(len(r))
        nz = r > 0
        if nz.any():
            out[nz] = r[nz] / self.radial(u[nz])
        return out

    def contains(self, x: np.ndarray) -> np.ndarray:
        return self.gauge(x) <= 1.0

    # --- closed forms (None when unavailable) --------------------------
    @property
    def volume(self) -> float | None:
        return None

    def projection_volume(self, frame: np.ndarray) -> float | None:
        return None

    def section(self, sub: Subspace) -> "StarBodyOracle":
        return SectionBody(self, sub)

    def image(self, matrix: np.ndarray) -> "StarBodyOracle":
        return ImageBody(self, matrix)

    def scaled(self, r: float) -> "StarBodyOracle":
        return self.image(r * np.eye(self.dim))

    @property
    def rotation_invariant(self) -> bool:
        return False

    def describe(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, **self.params}

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"


class EuclideanBall(StarBodyOracle):
    kind = "euclidean-ball"

    def __init__(self, dim: int, r: float = 1.0):
        if r <= 0:
            raise ValueError("radius must be positive")
        super().__init__(dim, r, {"r": float(r)})
        self.r = float(r)

    def radial(self, xi):
        return np.full(len(np.atleast_2d(xi)), self.r)

    def gauge(self, x):
        return np.linalg.norm(np.atleast_2d(x), axis=1) / self.r

    @property
    def volume(self):
        return omega(self.dim) * self.r ** self.dim

    def projection_volume(self, frame):
        k = np.shape(frame)[1]
        return omega(k) * self.r ** k

    def section(self, sub):
        return EuclideanBall(sub.dim, self.r)

    def image(self, matrix):
        return Ellipsoid(self.r * np.asarray(matrix, dtype=float))

    @property
    def rotation_invariant(self):
        return True


class Ellipsoid(StarBodyOracle):
    """``A B_2^n`` for an invertible matrix ``A``."""

    kind = "ellipsoid"

    def __init__(self, matrix: np.ndarray):
        a = np.array(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("ellipsoid matrix must be square")
        sv = np.linalg.svd(a, compute_uv=False)
        if sv.min() <= 1e-14 * sv.max():
            raise ValueError("ellipsoid matrix is singular")
        super().__init__(a.shape[0], sv.max(), {"matrix": a.tolist()})
        self.matrix = a
        self._inv = np.linalg.inv(a)

    def gauge(self, x):
        return np.linalg.norm(np.atleast_2d(x) @ self._inv.T, axis=1)

    def radial(self, xi):
        return 1.0 / np.linalg.norm(np.atleast_2d(xi) @ self._inv.T, axis=1)

    @property
    def volume(self):
        return omega(self.dim) * abs(np.linalg.det(self.matrix))

    def projection_volume(self, frame):
        fa = np.asarray(frame).T @ self.matrix
        k = fa.shape[0]
        return omega(k) * math.sqrt(max(np.linalg.det(fa @ fa.T), 0.0))

    def section(self, sub):
        g = self._inv @ sub.frame
        m = g.T @ g
        w, v = np.linalg.eigh(m)
        return Ellipsoid(v @ np.diag(w ** -0.5) @ v.T)

    def image(self, matrix):
        return Ellipsoid(np.asarray(matrix, dtype=float) @ self.matrix)


class Box(StarBodyOracle):
    """Axis-parallel box ``prod [-h_i, h_i]``."""

    kind = "box"

    def __init__(self, half_widths):
        h = np.array(half_widths, dtype=float).ravel()
        if (h <= 0).any():
            raise ValueError("half widths must be positive")
        super().__init__(len(h), float(np.linalg.norm(h)), {"half_widths": h.tolist()})
        self.h = h

    def gauge(self, x):
        return np.max(np.abs(np.atleast_2d(x)) / self.h, axis=1)

    def radial(self, xi):
        return 1.0 / np.max(np.abs(np.atleast_2d(xi)) / self.h, axis=1)

    @property
    def volume(self):
        return float(np.prod(2 * self.h))

    @property
    def generators(self) -> np.ndarray:
        """Edge vectors as columns: the box is the zonotope they span."""
        return np.diag(2 * self.h)

    def section(self, sub):
        if sub.dim == self.dim:
            return super().section(sub)
        return PolytopeSection(self, sub, sub.frame / self.h[:, None])

    def image(self, matrix):
        return Parallelotope(np.asarray(matrix, dtype=float) * self.h[None, :])

    def projection_volume(self, frame):
        return zonotope_volume(np.asarray(frame).T @ self.generators)


class Parallelotope(StarBodyOracle):
    """``M [-1, 1]^n`` for an invertible matrix ``M``; linear images of boxes."""

    kind = "parallelotope"

    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or abs(np.linalg.det(m)) < 1e-300:
            raise ValueError("parallelotope needs an invertible square matrix")
        n = m.shape[0]
        if n <= 12:
            signs = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
            rad = float(np.max(np.linalg.norm(signs @ m.T, axis=1)))
        else:
            rad = float(np.sum(np.linalg.norm(m, axis=0)))
        super().__init__(n, rad, {"matrix": m.tolist()})
        self.matrix = m
        self._inv = np.linalg.inv(m)

    @property
    def generators(self) -> np.ndarray:
        return 2 * self.matrix

    def gauge(self, x):
        return np.max(np.abs(np.atleast_2d(x) @ self._inv.T), axis=1)

    def radial(self, xi):
        return 1.0 / self.gauge(xi)

    @property
    def volume(self):
        return float(2.0 ** self.dim * abs(np.linalg.det(self.matrix)))

    def section(self, sub):
        if sub.dim == self.dim:
            return super().section(sub)
        return PolytopeSection(self, sub, self._inv @ sub.frame)

    def image(self, matrix):
        return Parallelotope(np.asarray(matrix, dtype=float) @ self.matrix)

    def projection_volume(self, frame):
        return zonotope_volume(np.asarray(frame).T @ self.generators)


def zonotope_volume(gens: np.ndarray) -> float:
    """Volume of the zonotope sum of segments [0, g_j] for the columns g_j of a (k, N) matrix."""
    k, m = gens.shape
    if k == 0:
        return 1.0
    return float(sum(abs(np.linalg.det(gens[:, list(s)])) for s in itertools.combinations(range(m), k)))


class RadialBody(StarBodyOracle):
    """Star body from an arbitrary vectorised radial oracle."""

    def __init__(self, dim: int, radial: Callable[[np.ndarray], np.ndarray], circumradius: float,
                 kind: str = "star", params: dict | None = None, convex: bool = True,
                 volume: float | None = None, rotation_invariant: bool = False):
        super().__init__(dim, circumradius, params)
        self._radial = radial
        self.kind = kind
        self.convex = convex
        self._volume = volume
        self._rot = rotation_invariant

    def radial(self, xi):
        return np.asarray(self._radial(np.atleast_2d(xi)), dtype=float)

    @property
    def volume(self):
        return self._volume

    @property
    def rotation_invariant(self):
        return self._rot


class SectionBody(StarBodyOracle):
    """``K ∩ E`` in the coordinates of the frame of ``E``."""

    kind = "section"

    def __init__(self, parent: StarBodyOracle, sub: Subspace):
        super().__init__(sub.dim, parent.circumradius, {"parent": parent.kind})
        self.parent = parent
        self.frame = sub.frame
        self.convex = parent.convex

    def radial(self, xi):
        return self.parent.radial(np.atleast_2d(xi) @ self.frame.T)

    def gauge(self, x):
        return self.parent.gauge(np.atleast_2d(x) @ self.frame.T)


class PolytopeSection(SectionBody):
    """``K ∩ E`` for K = {x : |A x|_i <= 1}; in frame coordinates {z : |A F z|_i <= 1}, exact volume."""

    def __init__(self, parent: StarBodyOracle, sub: Subspace, rows: np.ndarray):
        super().__init__(parent, sub)
        self.rows = np.asarray(rows, dtype=float)
        self._volume = None

    @property
    def volume(self):
        if self._volume is None:
            self._volume = slab_polytope_volume(self.rows)
        return self._volume


def slab_polytope_volume(rows: np.ndarray) -> float:
    """Volume of {z : |a_i . z| <= 1 for every row a_i}, assumed bounded."""
    a = rows[np.linalg.norm(rows, axis=1) > 1e-14]
    if rows.shape[1] == 1:
        return float(2.0 / np.max(np.abs(a[:, 0])))
    from scipy.spatial import ConvexHull, HalfspaceIntersection

    ones = -np.ones((len(a), 1))
    halfspaces = np.vstack([np.hstack([a, ones]), np.hstack([-a, ones])])
    pts = HalfspaceIntersection(halfspaces, np.zeros(rows.shape[1])).intersections
    return float(ConvexHull(pts).volume)


class ImageBody(StarBodyOracle):
    """``T K`` for an invertible linear map ``T``."""

    kind = "image"

    def __init__(self, parent: StarBodyOracle, matrix: np.ndarray):
        t = np.array(matrix, dtype=float)
        sv = np.linalg.svd(t, compute_uv=False)
        super().__init__(parent.dim, parent.circumradius * sv.max(), {"parent": parent.kind})
        self.parent = parent
        self.matrix = t
        self._inv = np.linalg.inv(t)
        self.convex = parent.convex

    def gauge(self, x):
        return self.parent.gauge(np.atleast_2d(x) @ self._inv.T)

    def radial(self, xi):
        return 1.0 / self.gauge(xi)

    @property
    def volume(self):
        v = self.parent.volume
        return None if v is None else v * abs(np.linalg.det(self.matrix))


def body_from_config(d: dict) -> StarBodyOracle:
    """``{"body": "ball"|"ellipsoid"|"box", "dim": n, ...}``."""
    kind = d.get("body", d.get("kind"))
    if kind in ("ball", "euclidean-ball"):
        return EuclideanBall(int(d["dim"]), float(d.get("r", 1.0)))
    if kind == "ellipsoid":
        return Ellipsoid(np.asarray(d["matrix"], dtype=float))
    if kind == "box":
        if "half_widths" in d:
            return Box(d["half_widths"])
        return Box([float(d.get("h", 1.0))] * int(d["dim"]))
    raise ValueError(f"unknown body kind {kind!r}")
