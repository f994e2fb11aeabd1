"""Canonical dual window of a Gaussian Gabor frame by conjugate gradients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, NotAFrameError, NumericError
from ..lattice import Lattice, adjoint_lattice, enumerate_points
from ..theta import DEFAULT_POLICY, TruncationPolicy, truncation_radius
from .bounds import frame_operator_bounds
from .functions import SampledFunction, gaussian, make_grid

CG_MARGIN = 10


class JanssenOperator:
    """Frame operator ``S = vol^-1 sum_{l in L°} <phi, pi(l) phi> pi(l)`` on a sample grid.

    Time shifts are spectral phase ramps, modulations are exact.  The series
    is truncated where the coefficient tail drops below ``p.tol``.
    """

    def __init__(self, L: Lattice, t: np.ndarray, p: TruncationPolicy = DEFAULT_POLICY):
        if L.dim != 2:
            raise DimensionError("dual window is implemented for d = 1")
        self.L = L
        self.t = np.asarray(t, dtype=float)
        La = adjoint_lattice(L)
        R = truncation_radius(0.5, min(p.tol * L.covolume, 0.5), La)
        pts = enumerate_points(La, R, p.max_points)
        x, w = pts[:, 0], pts[:, 1]
        # <phi, pi(l) phi> = conj(V_phi phi(l)) = exp(pi i x w) exp(-pi |l|^2 / 2)
        self.coef = np.exp(1j * math.pi * x * w - 0.5 * math.pi * (x * x + w * w)) / L.covolume
        self.points = pts
        h = self.t[1] - self.t[0]
        xi = np.fft.fftfreq(len(self.t), h)
        self._ramps = np.exp(-2j * math.pi * np.outer(x, xi))
        self._mods = np.exp(2j * math.pi * np.outer(w, self.t))

    def __call__(self, samples: np.ndarray) -> np.ndarray:
        F = np.fft.fft(samples)
        shifted = np.fft.ifft(F[None, :] * self._ramps, axis=1)
        return (self.coef[:, None] * self._mods * shifted).sum(axis=0)


@dataclass(frozen=True, eq=False)
class DualWindowResult:
    window: SampledFunction
    residual: float
    iterations: int
    budget: int
    A: float
    B: float


def cg_budget(A: float, B: float, cg_tol: float) -> int:
    return int(math.ceil(math.sqrt(B / A) * math.log(2 / cg_tol))) + CG_MARGIN


def solve_dual_window(L: Lattice, p: TruncationPolicy = DEFAULT_POLICY, cg_tol: float = 1e-8,
                      t: np.ndarray | None = None) -> DualWindowResult:
    """``gamma = S^-1 phi`` by conjugate gradients on the Janssen operator.

    The iteration budget comes from the frame-operator bounds; exceeding ten
    times the budget raises :class:`NumericError`.
    """
    if not 0 < cg_tol < 1:
        raise ValueError("cg_tol must lie in (0, 1)")
    t = make_grid() if t is None else np.asarray(t, dtype=float)
    try:
        fb = frame_operator_bounds(L, p)
    except NotAFrameError:
        raise
    budget = cg_budget(fb.A, fb.B, cg_tol)
    S = JanssenOperator(L, t, p)
    phi = gaussian(t)
    h = phi.h
    b = phi.samples

    def dot(u, v):
        return h * np.vdot(u, v)

    x = b / L.density
    r = b - S(x)
    d = r.copy()
    rr = dot(r, r).real
    it = 0
    while math.sqrt(rr) > cg_tol:
        if it >= 10 * budget:
            raise NumericError(f"CG did not converge within {10 * budget} iterations "
                               f"(residual {math.sqrt(rr):.3g})")
        Sd = S(d)
        step = rr / dot(d, Sd).real
        x = x + step * d
        r = r - step * Sd
        rr_new = dot(r, r).real
        d = r + (rr_new / rr) * d
        rr = rr_new
        it += 1
    true_res = math.sqrt(dot(b - S(x), b - S(x)).real)
    if true_res > cg_tol:
        # recurrence drift: polish once from the true residual
        return _polish(S, b, x, cg_tol, budget, fb, t, it, dot)
    return DualWindowResult(SampledFunction(x, t, None, "dual"), true_res, it, budget, fb.A, fb.B)


def _polish(S, b, x, cg_tol, budget, fb, t, it, dot):
    for _ in range(budget):
        r = b - S(x)
        res = math.sqrt(dot(r, r).real)
        if res <= cg_tol:
            break
        x = x + r / fb.B
        it += 1
    else:
        raise NumericError("CG residual drifted above tolerance")
    return DualWindowResult(SampledFunction(x, t, None, "dual"), res, it, budget, fb.A, fb.B)


def dual_window(L: Lattice, p: TruncationPolicy = DEFAULT_POLICY, cg_tol: float = 1e-8,
                t: np.ndarray | None = None) -> SampledFunction:
    return solve_dual_window(L, p, cg_tol, t).window


def frame_operator_direct(L: Lattice, f: SampledFunction, margin: float = 4.0) -> np.ndarray:
    """``sum_l <f, pi(l) phi> pi(l) phi`` summed directly over lattice points.

    Used as an independent check of :class:`JanssenOperator`; the sum runs
    over points whose atoms overlap the grid and stay below its Nyquist rate.
    """
    t = f.t
    T = max(abs(t[0]), abs(t[-1])) + margin
    W = 0.5 / f.h - margin
    R = math.hypot(T, W)
    pts = enumerate_points(L, R)
    keep = (np.abs(pts[:, 0]) <= T) & (np.abs(pts[:, 1]) <= W)
    pts = pts[keep]
    atoms = (np.exp(2j * math.pi * np.outer(pts[:, 1], t))
             * 2 ** 0.25 * np.exp(-math.pi * (t[None, :] - pts[:, 0:1]) ** 2))
    c = f.h * (atoms.conj() @ f.samples)
    return c @ atoms
