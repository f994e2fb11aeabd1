"""Frame bounds of Gaussian Gabor systems over phase-space lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..catalog import ThetaSeries
from ..errors import DimensionError, NotAFrameError, NumericError
from ..lattice import Lattice, adjoint_lattice, enumerate_points
from ..phase import as_phase_array
from ..theta import (DEFAULT_POLICY, GaussWidth, TruncationPolicy, _DualPhase, _Translate, _alpha,
                     find_extremum, theta_series_sum, theta_translate)

METHODS = ("janssen-exact", "janssen-heuristic", "janssen-operator", "gram-spectral", "relaxed",
           "condition-A-upper", "energy-lower")


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    method: str
    error_bound: float = 0.0
    density: float | None = None
    lattice_id: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.A > 0 and self.B >= self.A * (1 - 1e-15)):
            raise ValueError(f"frame bounds need 0 < A <= B, got A={self.A}, B={self.B}")
        if not self.error_bound >= 0:
            raise ValueError("error_bound must be non-negative")

    @property
    def ratio(self) -> float:
        return max(1.0, self.B / self.A)

    def as_row(self) -> dict:
        return {"lattice_id": self.lattice_id, "density": self.density, "method": self.method,
                "A": self.A, "B": self.B, "ratio": self.ratio, "error_bound": self.error_bound}


ROW_COLUMNS = ("lattice_id", "density", "method", "A", "B", "ratio", "error_bound")


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray
    index_map: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        try:
            return np.linalg.eigvalsh(self.entries)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigenvalue solver failed: {exc}") from exc


def ambiguity_gauss(z) -> np.ndarray | complex:
    """``V_phi phi(z) = exp(-pi i x.w) exp(-pi |z|^2 / 2)`` (rows of ``z`` broadcast)."""
    Z = as_phase_array(z)
    d = Z.shape[-1] // 2
    x, w = Z[..., :d], Z[..., d:]
    out = np.exp(-1j * math.pi * np.sum(x * w, axis=-1) - 0.5 * math.pi * np.sum(Z * Z, axis=-1))
    return complex(out) if out.ndim == 0 else out


def gram_entries(P: np.ndarray, Q: np.ndarray | None = None) -> np.ndarray:
    """``G[i, j] = <pi(Q_j) phi, pi(P_i) phi>``.

    Commuting the shifts gives ``exp(-2 pi i x_j.(w_i - w_j)) V_phi phi(P_i - Q_j)``;
    the formula is checked against quadrature in the test suite.
    """
    Q = P if Q is None else Q
    d = P.shape[1] // 2
    D = P[:, None, :] - Q[None, :, :]
    ph = np.exp(-2j * math.pi * np.einsum("jk,ijk->ij", Q[:, :d], D[..., d:]))
    return ph * ambiguity_gauss(D)


def gram_matrix(L: Lattice, radius: float, max_points: int = 20_000) -> GramMatrix:
    if radius <= 0:
        raise ValueError("radius must be positive")
    P = enumerate_points(L, radius, max_points)
    G = gram_entries(P)
    G = 0.5 * (G + G.conj().T)
    np.fill_diagonal(G, 1.0)
    return GramMatrix(G, P)


def _even_integer(x: float, tol: float = 1e-9) -> bool:
    n = round(x)
    return abs(x - n) <= tol * max(1.0, abs(x)) and n > 0 and n % 2 == 0


def _janssen(L: Lattice, p: TruncationPolicy, grid_n: int, alpha: float):
    if L.dim != 2:
        raise DimensionError("Janssen bounds are implemented for d = 1 (2-D lattices)")
    if L.density <= 1 + 1e-12:
        raise NotAFrameError(f"density {L.density:g} <= 1: Gaussian Gabor system is not a frame")
    vol = L.covolume
    q = TruncationPolicy(min(p.tol * vol, 0.5), p.max_radius, p.max_points)
    La = adjoint_lattice(L)
    ev = _DualPhase(La, q, alpha)
    B = float(ev(np.zeros((1, 2)))[0]) / vol
    ext = find_extremum(La, kind="min", which="dual_phase", grid_n=grid_n, p=q, _eval=ev)
    A = ext.value / vol
    if A <= 0:
        raise NotAFrameError(f"lower bound {A:.3g} <= 0 after refinement")
    return A, B


def janssen_frame_bounds(L: Lattice, p: TruncationPolicy = DEFAULT_POLICY,
                         grid_n: int = 32) -> FrameBounds:
    """``B = Fhat(0) / vol`` and ``A = min Fhat / vol`` with ``Fhat`` on the adjoint lattice.

    ``Fhat(z) = sum exp(-pi |l|^2) exp(2 pi i sigma(l, z))``, the published
    formula.  By Poisson summation these are the extrema of
    ``sum_l |<pi(z) phi, pi(l) phi>|^2``, i.e. of the frame form restricted
    to coherent states; :func:`frame_operator_bounds` gives the spectrum of
    the frame operator itself.  Labelled ``janssen-exact`` for d = 1 at even
    integer density, ``janssen-heuristic`` otherwise.
    """
    A, B = _janssen(L, p, grid_n, 1.0)
    method = "janssen-exact" if _even_integer(L.density) else "janssen-heuristic"
    return FrameBounds(A, B, method, p.tol, L.density, L.name)


def frame_operator_bounds(L: Lattice, p: TruncationPolicy = DEFAULT_POLICY,
                          grid_n: int = 32) -> FrameBounds:
    """Extremes of ``vol^-1 sum_{l in L°} exp(-pi |l|^2 / 2) exp(2 pi i sigma(l, z))``.

    These weights are the moduli of the Janssen coefficients
    ``<phi, pi(l) phi>``; at even integer density they reproduce the spectrum
    of the frame operator (checked against Gram sections and a direct
    discretisation in the tests).
    """
    A, B = _janssen(L, p, grid_n, 0.5)
    return FrameBounds(A, B, "janssen-operator", p.tol, L.density, L.name)


def _dual_table(t: ThetaSeries) -> ThetaSeries:
    if not t.self_dual:
        raise NotImplementedError(f"{t.lattice_name}: dual table needed for B-tilde")
    return t.dual()


def condition_a_upper(L, w=GaussWidth(), p: TruncationPolicy = DEFAULT_POLICY,
                      dual_table: ThetaSeries | None = None) -> float:
    """``B~ = vol^-1 sum_{l in L°} exp(-pi alpha |l|^2 / 2)``, an upper frame bound."""
    a = _alpha(w)
    if isinstance(L, ThetaSeries):
        dual = dual_table if dual_table is not None else _dual_table(L)
        density = L.covolume_of_table ** -1
        return density * theta_series_sum(dual, a, 0.5, p.tol).value
    vol = L.covolume
    q = TruncationPolicy(min(p.tol * vol, 0.5), p.max_radius, p.max_points)
    return theta_translate(adjoint_lattice(L), np.zeros(L.dim), a / 2, q) / vol


def energy_lower_bound(L, w=GaussWidth(), p: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``sum_{l in L} exp(-pi alpha |l|^2)``, a lower estimate for B."""
    a = _alpha(w)
    if isinstance(L, ThetaSeries):
        return theta_series_sum(L, a, 1.0, p.tol).value
    return theta_translate(L, np.zeros(L.dim), a, p)


def gram_spectral_bounds(L: Lattice, truncation_radius: float = 5.0,
                         max_points: int = 20_000) -> FrameBounds:
    """Extreme eigenvalues of a finite section of the adjoint Gram matrix.

    The adjoint system is a Riesz sequence with bounds ``vol(L) A`` and
    ``vol(L) B``, so after rescaling by the density every finite section gives
    estimates inside ``[A, B]`` that widen monotonically with the radius.
    """
    if L.density <= 1 + 1e-12:
        raise NotAFrameError(f"density {L.density:g} <= 1: adjoint system is not a Riesz sequence")
    G = gram_matrix(adjoint_lattice(L), truncation_radius, max_points)
    ev = G.eigenvalues()
    lo, hi = float(ev[0]), float(ev[-1])
    if lo <= 0:
        raise NotAFrameError(f"Gram section is singular (smallest eigenvalue {lo:.3g})")
    return FrameBounds(L.density * lo, L.density * hi, "gram-spectral", 0.0, L.density, L.name)


def relaxed_bounds(L: Lattice, w=GaussWidth(), grid_n: int = 32,
                   p: TruncationPolicy = DEFAULT_POLICY) -> FrameBounds:
    """``min_z`` and ``max_z`` of ``sum exp(-pi alpha |l - z|^2)`` (max at lattice points)."""
    if L.dim != 2:
        raise DimensionError("relaxed bounds are implemented for 2-D lattices")
    a = _alpha(w)
    ev = _Translate(L, a, p)
    B = float(ev(np.zeros((1, 2)))[0])
    A = find_extremum(L, a, "min", "translate", grid_n, p, _eval=ev).value
    return FrameBounds(A, B, "relaxed", p.tol, L.density, L.name)


# ---------------------------------------------------------------------------
# tensor-product example

@dataclass(frozen=True)
class TensorFrameCheck:
    lambda1_is_frame: bool
    lambda2_is_frame: bool


def tensor_lattices(alpha: float, beta: float) -> tuple[Lattice, Lattice]:
    """``L1 = alpha diag(b, b, 1/b, 1/b)`` and ``L2 = alpha diag(b, 1/b, b, 1/b)``.

    Coordinates are ``(x1, x2, w1, w2)``; L1 factors as two copies of
    ``alpha b Z x alpha/b Z`` and L2 as ``alpha b Z x alpha b Z`` times
    ``alpha/b Z x alpha/b Z``.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    L1 = Lattice(alpha * np.diag([beta, beta, 1 / beta, 1 / beta]), "tensor-1")
    L2 = Lattice(alpha * np.diag([beta, 1 / beta, beta, 1 / beta]), "tensor-2")
    return L1, L2


def tensor_frame_check(alpha: float, beta: float) -> TensorFrameCheck:
    """Frame property of the two tensor lattices via the 1-D density criterion."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    return TensorFrameCheck(alpha < 1, alpha * beta < 1 and alpha / beta < 1)


def numeric_frame_check(L: Lattice, radius: float = 4.0, threshold: float = 1e-3) -> bool:
    """Classify ``L`` numerically from the adjoint Gram section.

    A frame needs an adjoint Riesz sequence; for a non-frame the smallest
    eigenvalue of a growing Gram section drifts to zero.  Density <= 1 is a
    non-frame outright.
    """
    if L.density <= 1 + 1e-12:
        return False
    G = gram_matrix(adjoint_lattice(L), radius, 200_000)
    return float(G.eigenvalues()[0]) > threshold
