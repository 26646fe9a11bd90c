from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Subspace:
    """A point of the Grassmannian G_{n,m}, stored as an orthonormal n x m frame."""

    frame: np.ndarray
    _complement: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        fr = np.array(self.frame, dtype=float)
        if fr.ndim != 2 or fr.shape[1] > fr.shape[0]:
            raise ValueError(f"frame must be n x m with m <= n, got shape {fr.shape}")
        if fr.shape[1] and np.abs(fr.T @ fr - np.eye(fr.shape[1])).max() > 1e-10:
            raise ValueError("frame columns are not orthonormal")
        fr.setflags(write=False)
        object.__setattr__(self, "frame", fr)
        if self._complement is None:
            object.__setattr__(self, "_complement", _complement_of(fr))

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def complement(self) -> "Subspace":
        return Subspace(self._complement, self.frame)

    def embed(self, z: np.ndarray) -> np.ndarray:
        """Coordinates in the frame -> points of R^n (rows)."""
        return np.atleast_2d(z) @ self.frame.T

    def coords(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_2d(x) @ self.frame

    def rotated(self, q: np.ndarray) -> "Subspace":
        return Subspace(q @ self.frame, q @ self._complement)

    @classmethod
    def coordinate(cls, n: int, idx) -> "Subspace":
        """Span of the standard basis vectors listed in ``idx``."""
        return cls(np.eye(n)[:, list(idx)])

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(np.eye(n))


def _complement_of(frame: np.ndarray) -> np.ndarray:
    n, m = frame.shape
    if m == n:
        return np.zeros((n, 0))
    if m == 0:
        return np.eye(n)
    q, _ = np.linalg.qr(frame, mode="complete")
    comp = q[:, m:]
    # re-orthogonalise against the frame to keep the residual at round-off
    comp = comp - frame @ (frame.T @ comp)
    comp, _ = np.linalg.qr(comp)
    return comp


def orthonormalize(a: np.ndarray) -> np.ndarray:
    """QR with the sign convention that makes Gaussian input Haar-distributed."""
    q, r = np.linalg.qr(a)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d
