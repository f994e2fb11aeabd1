"""Numerical checks of the fundamental identity of Gabor analysis and of Moyal's formula."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from ..lattice import Lattice, adjoint_lattice, enumerate_points
from ..theta import truncation_radius
from .functions import SampledFunction, make_grid, stft_many


@dataclass(frozen=True)
class FigaResult:
    lhs: complex
    rhs: complex
    residual: float
    n_lhs: int
    n_rhs: int


def figa(f1: SampledFunction, f2: SampledFunction, g1: SampledFunction, g2: SampledFunction,
         L: Lattice, radius: float | None = None, tol: float = 1e-14) -> FigaResult:
    """Both sides of

        sum_{l in L} V_g1 f1(l) conj(V_g2 f2(l))
            = vol(L)^-1 sum_{l in L°} V_g1 g2(l) conj(V_f1 f2(l)).

    With ``radius=None`` each side is truncated where a Gaussian envelope
    ``exp(-pi |l|^2 / 2)`` has tail below ``tol``, which is conservative for
    products of Gaussian/Hermite STFTs.
    """
    if L.dim != 2:
        raise DimensionError("FIGA check is implemented for d = 1")
    La = adjoint_lattice(L)
    r1 = radius if radius is not None else truncation_radius(0.5, tol, L)
    r2 = radius if radius is not None else truncation_radius(0.5, tol * L.covolume, La)
    P = enumerate_points(L, r1)
    Q = enumerate_points(La, r2)
    lhs = np.sum(stft_many(f1, g1, P) * np.conj(stft_many(f2, g2, P)))
    rhs = np.sum(stft_many(g2, g1, Q) * np.conj(stft_many(f2, f1, Q))) / L.covolume
    return FigaResult(complex(lhs), complex(rhs), float(abs(lhs - rhs)), len(P), len(Q))


def figa_residual(f1, f2, g1, g2, L: Lattice, radius: float | None = None) -> float:
    return figa(f1, f2, g1, g2, L, radius).residual


# ---------------------------------------------------------------------------
# Wigner distribution

@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray
    w: np.ndarray

    @property
    def cell(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.w[1] - self.w[0]))


def default_wigner_grid(step: float = 1 / 16, extent: float = 6.0) -> WignerGrid:
    g = make_grid(step, extent)
    return WignerGrid(g, g.copy())


def wigner(f: SampledFunction, g: SampledFunction, grid: WignerGrid | None = None,
           lag_step: float = 1 / 32) -> np.ndarray:
    """Cross-Wigner ``W(f,g)(x,w) = int f(x + t/2) conj(g(x - t/2)) exp(-2 pi i w t) dt``.

    Returns an array indexed ``[x, w]``.  The lag variable runs over twice the
    extent of the signal grid so that the integrand has decayed at its ends.
    """
    f.check_decay()
    g.check_decay()
    grid = grid or default_wigner_grid()
    T = 2 * max(abs(f.t[0]), abs(f.t[-1]))
    t = make_grid(lag_step, T)
    E = np.exp(-2j * math.pi * np.outer(t, grid.w))
    out = np.empty((len(grid.x), len(grid.w)), dtype=complex)
    for i, x in enumerate(grid.x):
        prod = f.evaluate(x + t / 2) * np.conj(g.evaluate(x - t / 2))
        out[i] = lag_step * (prod @ E)
    return out


@dataclass(frozen=True)
class MoyalCheck:
    inner_w: complex
    expected: complex
    residual: float
    norm_w: float
    norm_f: float
    norm_residual: float


def moyal_wigner_check(f: SampledFunction, g: SampledFunction,
                       f2: SampledFunction | None = None, g2: SampledFunction | None = None,
                       grid: WignerGrid | None = None,
                       window: SampledFunction | None = None) -> MoyalCheck:
    """Moyal: ``<W(f,g), W(f2,g2)> = <f,f2> conj(<g,g2>)``, plus ``||W(f,phi)|| = ||f||``."""
    grid = grid or default_wigner_grid()
    f2 = f if f2 is None else f2
    g2 = g if g2 is None else g2
    W1 = wigner(f, g, grid)
    W2 = W1 if (f2 is f and g2 is g) else wigner(f2, g2, grid)
    inner_w = complex(grid.cell * np.vdot(W2, W1))
    expected = f.inner(f2) * np.conj(g.inner(g2))
    phi = window if window is not None else g
    Wf = W1 if phi is g and f2 is f and g2 is g else wigner(f, phi, grid)
    norm_w = float(math.sqrt(grid.cell * np.vdot(Wf, Wf).real))
    norm_f = f.norm() * phi.norm()
    return MoyalCheck(inner_w, complex(expected), float(abs(inner_w - expected)),
                      norm_w, norm_f, abs(norm_w - norm_f))
