"""Sampled functions on uniform 1-D grids and quadrature-based STFTs.

Conventions: ``T_x f(t) = f(t - x)``, ``M_w f(t) = exp(2 pi i w t) f(t)``,
``pi(z) = M_w T_x`` and ``V_g f(z) = <f, pi(z) g>``.  Inner products are
linear in the first slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import eval_hermite, gammaln

from ..errors import DimensionError, DomainTruncationError
from ..phase import as_phase_array

DEFAULT_STEP = 1.0 / 32
DEFAULT_EXTENT = 8.0
EDGE_DECAY = 1e-14


def make_grid(step: float = DEFAULT_STEP, extent: float = DEFAULT_EXTENT) -> np.ndarray:
    """Symmetric grid ``-n h, ..., n h`` with ``n h >= extent`` (odd length)."""
    if not (step > 0 and extent > 0):
        raise ValueError("grid step and extent must be positive")
    n = int(math.ceil(extent / step - 1e-9))
    return np.arange(-n, n + 1) * step


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Samples on a uniform grid, optionally backed by a closed form.

    When ``func`` is present, evaluation off the grid (shifts by arbitrary
    amounts) is exact; otherwise it falls back to trigonometric interpolation.
    """

    samples: np.ndarray
    t: np.ndarray
    func: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or s.shape != t.shape:
            raise DimensionError("samples must match a 1-D grid")
        if len(t) < 2 or not np.allclose(np.diff(t), t[1] - t[0], rtol=1e-9, atol=0):
            raise ValueError("grid must be uniform")
        if not t[1] > t[0]:
            raise ValueError("grid step must be positive")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "t", t)

    @classmethod
    def from_callable(cls, func, t, label="") -> "SampledFunction":
        t = np.asarray(t, dtype=float)
        return cls(func(t), t, func, label)

    @property
    def h(self) -> float:
        return float(self.t[1] - self.t[0])

    def __len__(self):
        return len(self.t)

    def evaluate(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(points), dtype=complex)
        return fourier_interpolate(self.samples, self.t, points)

    def check_decay(self, tol: float = EDGE_DECAY) -> None:
        edge = max(abs(self.samples[0]), abs(self.samples[-1]))
        if edge > tol:
            raise DomainTruncationError(
                f"function{' ' + self.label if self.label else ''} is {edge:.3g} at the grid "
                f"edge (|t| = {abs(self.t[-1]):g}); needs < {tol:g}")

    def inner(self, other: "SampledFunction") -> complex:
        _same_grid(self, other)
        return complex(self.h * np.vdot(other.samples, self.samples))

    def norm(self) -> float:
        return float(math.sqrt(self.h * np.vdot(self.samples, self.samples).real))

    def with_samples(self, samples, label=None) -> "SampledFunction":
        return SampledFunction(samples, self.t, None, self.label if label is None else label)

    def __add__(self, other):
        _same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self, other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, c):
        return self.with_samples(self.samples * c)

    __rmul__ = __mul__


def _same_grid(a: SampledFunction, b: SampledFunction) -> None:
    if len(a.t) != len(b.t) or abs(a.t[0] - b.t[0]) > 1e-12 or abs(a.h - b.h) > 1e-15:
        raise ValueError("functions live on different grids")


def fourier_interpolate(samples: np.ndarray, t: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation of periodic samples at arbitrary points."""
    n = len(t)
    h = t[1] - t[0]
    coef = np.fft.fft(samples) / n
    xi = np.fft.fftfreq(n, h)
    pts = np.asarray(points, dtype=float)
    flat = pts.ravel() - t[0]
    out = np.exp(2j * math.pi * np.outer(flat, xi)) @ coef
    return out.reshape(pts.shape)


def translate(f: SampledFunction, x: float) -> SampledFunction:
    """``T_x f`` via a spectral phase ramp (periodic wrap on the grid)."""
    xi = np.fft.fftfreq(len(f.t), f.h)
    s = np.fft.ifft(np.fft.fft(f.samples) * np.exp(-2j * math.pi * xi * x))
    return f.with_samples(s)


def modulate(f: SampledFunction, w: float) -> SampledFunction:
    return f.with_samples(np.exp(2j * math.pi * w * f.t) * f.samples)


def tf_shift(f: SampledFunction, z) -> SampledFunction:
    """``pi(z) f = M_w T_x f`` for ``z = (x, w)``."""
    x, w = as_phase_array(z).ravel()
    return modulate(translate(f, x), w)


# ---------------------------------------------------------------------------
# test functions

def gaussian_func(t):
    """Normalised Gaussian ``2^(1/4) exp(-pi t^2)``."""
    t = np.asarray(t, dtype=float)
    return 2 ** 0.25 * np.exp(-math.pi * t * t)


def hermite_func(n: int):
    """Closed form of the n-th Hermite function, orthonormal in L^2(R)."""
    log_c = 0.25 * math.log(2) - 0.5 * (n * math.log(2) + gammaln(n + 1))
    c = math.exp(log_c)

    def f(t):
        t = np.asarray(t, dtype=float)
        return c * eval_hermite(n, math.sqrt(2 * math.pi) * t) * np.exp(-math.pi * t * t)

    return f


def tf_shifted_func(func, z, phase: complex = 1.0):
    """Closed form of ``phase * pi(z) func``."""
    x, w = as_phase_array(z).ravel()

    def f(t):
        t = np.asarray(t, dtype=float)
        return phase * np.exp(2j * math.pi * w * t) * func(t - x)

    return f


def gaussian(t=None) -> SampledFunction:
    t = make_grid() if t is None else t
    return SampledFunction.from_callable(gaussian_func, t, "gaussian")


def hermite(n: int, t=None) -> SampledFunction:
    t = make_grid() if t is None else t
    return SampledFunction.from_callable(hermite_func(n), t, f"hermite{n}")


def tf_shifted_gaussian(z, t=None) -> SampledFunction:
    t = make_grid() if t is None else t
    return SampledFunction.from_callable(tf_shifted_func(gaussian_func, z), t, "pi(z)gaussian")


# ---------------------------------------------------------------------------
# STFT by quadrature

def stft_many(f: SampledFunction, g: SampledFunction, Z, decay_tol: float = EDGE_DECAY) -> np.ndarray:
    """Trapezoidal ``V_g f(z) = int f(t) conj(g(t - x)) exp(-2 pi i t w) dt``.

    ``Z`` is an ``(m, 2)`` array of phase-space points.  Both functions must
    decay below 1e-14 at the grid edges; for Gaussian-type integrands the
    default grid (step 1/32, |t| <= 8) keeps the error below 1e-12.  Iterates
    such as a computed dual window carry solver noise at the edges; pass a
    looser ``decay_tol`` for them.
    """
    f.check_decay(decay_tol)
    g.check_decay(decay_tol)
    Z = np.atleast_2d(as_phase_array(Z))
    if Z.shape[1] != 2:
        raise DimensionError("quadrature STFT is implemented for d = 1")
    t = f.t
    out = np.empty(len(Z), dtype=complex)
    chunk = max(1, 2_000_000 // len(t))
    for s in range(0, len(Z), chunk):
        x = Z[s:s + chunk, 0]
        w = Z[s:s + chunk, 1]
        gs = g.evaluate(t[None, :] - x[:, None])
        kern = np.conj(gs) * np.exp(-2j * math.pi * np.outer(w, t))
        out[s:s + chunk] = f.h * (kern @ f.samples)
    return out


def stft_quadrature(f: SampledFunction, g: SampledFunction, z,
                    decay_tol: float = EDGE_DECAY) -> complex:
    z = np.asarray(as_phase_array(z), dtype=float)[None, :]
    return complex(stft_many(f, g, z, decay_tol)[0])
