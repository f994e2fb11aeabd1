"""Phase-space points and the standard symplectic form.

Coordinates are always ordered ``(x_1, ..., x_d, omega_1, ..., omega_d)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point ``z = (x, omega)`` of the time-frequency plane."""

    x: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float)).copy()
        w = np.atleast_1d(np.asarray(self.omega, dtype=float)).copy()
        if x.shape != w.shape or x.ndim != 1:
            raise DimensionError("x and omega must be vectors of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise ValueError("phase point must be finite")
        x.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "omega", w)

    @classmethod
    def from_array(cls, z) -> "PhasePoint":
        z = np.asarray(z, dtype=float).ravel()
        if z.size % 2:
            raise DimensionError(f"phase-space vector has odd length {z.size}")
        d = z.size // 2
        return cls(z[:d], z[d:])

    @property
    def d(self) -> int:
        return self.x.size

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.omega])

    def __array__(self, dtype=None, copy=None):
        a = self.as_array()
        return a if dtype is None else a.astype(dtype)

    def __repr__(self):
        return f"PhasePoint(x={self.x.tolist()}, omega={self.omega.tolist()})"


def as_phase_array(z) -> np.ndarray:
    """Coerce a PhasePoint, vector or stack of vectors to a float array."""
    if isinstance(z, PhasePoint):
        return z.as_array()
    return np.asarray(z, dtype=float)


def symplectic_matrix(dim: int) -> np.ndarray:
    """The block matrix ``J = [[0, I], [-I, 0]]`` acting on R^dim."""
    if dim <= 0 or dim % 2:
        raise DimensionError(f"symplectic form needs an even dimension, got {dim}")
    d = dim // 2
    J = np.zeros((dim, dim))
    J[:d, d:] = np.eye(d)
    J[d:, :d] = -np.eye(d)
    return J


def sigma(z, w) -> np.ndarray:
    """Standard symplectic form ``sigma(z, w) = z . J w``, broadcast over rows.

    For ``z = (x, omega)`` and ``w = (x', omega')`` this is
    ``x . omega' - omega . x'``.
    """
    z = as_phase_array(z)
    w = as_phase_array(w)
    d = z.shape[-1] // 2
    return (np.sum(z[..., :d] * w[..., d:], axis=-1)
            - np.sum(z[..., d:] * w[..., :d], axis=-1))
