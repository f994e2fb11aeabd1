"""Gaussian lattice sums with guaranteed absolute truncation error.

Two phase-space theta functions are evaluated here::

    F(z)    = sum_l exp(-pi a |l + z|^2)                 (theta_translate)
    Fhat(z) = sum_l exp(-pi |l|^2) exp(2 pi i sigma(l, z))  (theta_dual_phase)

Tail bound
----------
Voronoi cells of the points of any translate of a lattice with |l| <= r are
disjoint and sit inside the ball of radius ``r + mu`` (``mu`` a covering
radius bound), so ``N(r) <= V_n (r + mu)^n / covol``.  Integrating by parts,

    sum_{|l| > R} exp(-pi a |l|^2) <= int_R^inf N(r) 2 pi a r exp(-pi a r^2) dr,

which is evaluated exactly through incomplete gamma functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaincc, gammaln

from .catalog import ThetaSeries
from .errors import ConsistencyError, DimensionError, ResourceCapError, TruncationWarning
from .lattice import MAX_POINTS, Lattice, adjoint_lattice, enumerate_points
from .phase import PhasePoint, as_phase_array, sigma


@dataclass(frozen=True)
class GaussWidth:
    """Scaling ``alpha`` of the Gaussian ``exp(-pi alpha |.|^2)``."""

    alpha: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-12
    max_radius: float = 60.0
    max_points: int = MAX_POINTS

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError(f"tol must lie in (0, 1), got {self.tol}")
        if not (self.max_radius > 0 and self.max_points > 0):
            raise ValueError("caps must be positive")


DEFAULT_POLICY = TruncationPolicy()


def _alpha(w) -> float:
    return w.alpha if isinstance(w, GaussWidth) else float(w)


# ---------------------------------------------------------------------------
# truncation

def gaussian_tail_bound(R: float, alpha: float, dim: int, covolume: float, mu: float) -> float:
    """Upper bound on ``sum_{|l| > R} exp(-pi alpha |l|^2)`` over a lattice translate."""
    if R <= 0:
        return math.inf
    if not math.isfinite(mu):
        return math.inf
    a = math.pi * alpha
    x = a * R * R
    log_vn = (dim / 2) * math.log(math.pi) - gammaln(dim / 2 + 1)
    total = 0.0
    # N(r) = V_n/covol * sum_k C(n,k) r^k mu^(n-k);
    # int_R^inf 2 a r^(k+1) e^{-a r^2} dr = a^{-k/2} Gamma(k/2+1, a R^2)
    for k in range(dim + 1):
        log_binom = gammaln(dim + 1) - gammaln(k + 1) - gammaln(dim - k + 1)
        s = k / 2 + 1
        upper = gammaincc(s, x)
        if upper <= 0:
            continue
        log_mu = (dim - k) * math.log(mu) if mu > 0 else (0.0 if k == dim else -math.inf)
        if log_mu == -math.inf:
            continue
        log_term = (log_vn - math.log(covolume) + log_binom + log_mu
                    - (k / 2) * math.log(a) + gammaln(s) + math.log(upper))
        total += math.exp(log_term)
    return total


def truncation_radius(w, tol: float, L: Lattice | None = None, *, dim=None,
                      covolume=None, mu=None) -> float:
    """Smallest radius (to 1e-6 relative) whose Gaussian tail is <= tol.

    Monotone non-increasing in both ``tol`` and ``alpha``.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    alpha = _alpha(w)
    if L is not None:
        dim, covolume, mu = L.dim, L.covolume, L.covering_radius_bound()
    lo, hi = 0.0, math.sqrt(max(1.0, math.log(1.0 / tol)) / (math.pi * alpha)) + 1.0
    while gaussian_tail_bound(hi, alpha, dim, covolume, mu) > tol:
        lo, hi = hi, 2 * hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if gaussian_tail_bound(mid, alpha, dim, covolume, mu) > tol:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-6 * hi:
            break
    return hi


# ---------------------------------------------------------------------------
# compensated summation

def _neumaier_rows(terms: np.ndarray) -> np.ndarray:
    """Compensated sum over axis 0, in row order, vectorised over columns."""
    if terms.ndim == 2 and terms.shape[1] <= 8 and not np.iscomplexobj(terms):
        # few columns: math.fsum is correctly rounded and runs in C
        return np.array([math.fsum(col) for col in terms.T])
    s = np.zeros(terms.shape[1:], dtype=terms.dtype)
    c = np.zeros_like(s)
    for t in terms:
        u = s + t
        big = np.abs(s) >= np.abs(t)
        c += np.where(big, (s - u) + t, (t - u) + s)
        s = u
    return s + c


def _norm_sorted(pts: np.ndarray) -> np.ndarray:
    n2 = np.einsum("ij,ij->i", pts, pts)
    return pts[np.argsort(n2, kind="stable")]


def _points_for(L: Lattice, radius: float, p: TruncationPolicy) -> np.ndarray:
    if radius > p.max_radius:
        raise ResourceCapError(
            f"truncation needs radius {radius:.4g} > max_radius {p.max_radius:g}",
            cap=p.max_radius, needed=radius)
    try:
        return _norm_sorted(enumerate_points(L, radius, p.max_points))
    except ResourceCapError as exc:
        raise ResourceCapError(
            f"truncation radius {radius:.4g} exceeds the point cap {p.max_points}",
            cap=p.max_points, needed=radius) from exc


class _Translate:
    """Batch evaluator of ``sum exp(-pi a |l + z|^2)`` with cached points."""

    def __init__(self, L: Lattice, alpha: float, p: TruncationPolicy):
        self.L, self.alpha = L, alpha
        self.R = truncation_radius(alpha, p.tol, L)
        # after reduce_near_origin |z0| <= sum |b_i| / 2
        self.shift = 0.5 * float(np.sum(np.linalg.norm(L.basis, axis=0)))
        self.points = _points_for(L, self.R + self.shift, p)
        self.Binv = np.linalg.inv(L.basis)

    def __call__(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        c = Z @ self.Binv.T
        Z0 = Z - np.round(c) @ self.L.basis.T
        D = self.points[:, None, :] + Z0[None, :, :]
        terms = np.exp(-math.pi * self.alpha * np.einsum("pzk,pzk->pz", D, D))
        return _neumaier_rows(terms)


class _DualPhase:
    """Batch evaluator of ``Re sum exp(-pi |l|^2) exp(2 pi i sigma(l, z))``."""

    def __init__(self, L: Lattice, p: TruncationPolicy, alpha: float = 1.0):
        if L.dim % 2:
            raise DimensionError("dual-phase theta needs even dimension")
        self.tol = p.tol
        self.R = truncation_radius(alpha, p.tol, L)
        self.points = _points_for(L, self.R, p)
        self.weights = np.exp(-math.pi * alpha * np.einsum("ij,ij->i", self.points, self.points))

    def __call__(self, Z, check: bool = True) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        ph = 2 * math.pi * sigma(self.points[:, None, :], Z[None, :, :])
        re = _neumaier_rows(self.weights[:, None] * np.cos(ph))
        if check:
            im = _neumaier_rows(self.weights[:, None] * np.sin(ph))
            worst = float(np.max(np.abs(im)))
            if worst > self.tol:
                raise ConsistencyError(f"imaginary residue {worst:.3g} exceeds tol {self.tol:g}")
        return re


def theta_translate(L: Lattice, z, w=GaussWidth(), p: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``sum_l exp(-pi alpha |l + z|^2)`` with absolute error <= p.tol."""
    z = as_phase_array(z).ravel()
    return float(_Translate(L, _alpha(w), p)(z[None, :])[0])


def theta_dual_phase(L: Lattice, z, p: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``Re sum_l exp(-pi |l|^2) exp(2 pi i sigma(l, z))`` with error <= p.tol."""
    z = as_phase_array(z).ravel()
    return float(_DualPhase(L, p)(z[None, :])[0])


# ---------------------------------------------------------------------------
# tabulated sums

class SeriesSum(NamedTuple):
    value: float
    tail_bound: float


def theta_series_sum(t: ThetaSeries, w=GaussWidth(), exponent_scale: float = 1.0,
                     tol: float | None = None) -> SeriesSum:
    """``sum count * exp(-pi alpha scale norm2)`` over a table, with tail bound.

    The tail covers all norms beyond ``t.complete_to``.  When ``tol`` is given
    and the bound exceeds it a :class:`TruncationWarning` is issued.
    """
    a = _alpha(w) * exponent_scale
    norms = t.norm_array()
    keep = norms <= t.complete_to * (1 + 1e-12)
    terms = t.count_array()[keep] * np.exp(-math.pi * a * norms[keep])
    value = math.fsum(terms)
    tail = gaussian_tail_bound(math.sqrt(t.complete_to), a, t.dim, t.covolume_of_table,
                               t.covering_radius_bound) if t.complete_to > 0 else math.inf
    if tol is not None and tail > tol:
        warnings.warn(TruncationWarning(
            f"{t.lattice_name} table ends at norm {t.complete_to:g}; tail bound {tail:.3g} > tol {tol:g}",
            bound=tail), stacklevel=2)
    return SeriesSum(value, tail)


# ---------------------------------------------------------------------------
# extrema over the fundamental cell

@dataclass(frozen=True)
class Certificate:
    grid_value: float
    refined_value: float
    displacement: float


@dataclass(frozen=True)
class ExtremumResult:
    location: PhasePoint
    value: float
    grid_resolution: int
    refined: bool
    certificate: Certificate


def period_lattice(L: Lattice, which: str) -> Lattice:
    """Lattice of periods of the chosen theta function of ``L``."""
    if which == "translate":
        return L
    if which == "dual_phase":
        return adjoint_lattice(L)
    raise ValueError(f"unknown theta function {which!r}")


def evaluator(L: Lattice, which: str, w=GaussWidth(), p: TruncationPolicy = DEFAULT_POLICY):
    if which == "translate":
        return _Translate(L, _alpha(w), p)
    if which == "dual_phase":
        return _DualPhase(L, p)
    raise ValueError(f"unknown theta function {which!r}")


def cell_grid(P: Lattice, grid_n: int) -> np.ndarray:
    """Points ``P.basis @ (i/n, j/n)`` in row-major (i, j) order."""
    u = np.arange(grid_n) / grid_n
    U = np.stack(np.meshgrid(u, u, indexing="ij"), axis=-1).reshape(-1, 2)
    return U @ P.basis.T


def find_extremum(L: Lattice, w=GaussWidth(), kind: str = "min", which: str = "translate",
                  grid_n: int = 32, p: TruncationPolicy = DEFAULT_POLICY,
                  refine: bool = True, max_iter: int = 200, xatol: float = 1e-10,
                  _eval=None) -> ExtremumResult:
    """Grid search over the period cell followed by Nelder-Mead refinement.

    Ties on the grid go to the lexicographically smallest grid index.  The
    refined value never loses against the grid value.
    """
    if L.dim != 2:
        raise DimensionError(f"extremum search supports 2-D lattices only, got {L.dim}")
    if grid_n < 16:
        raise ValueError("grid_n must be >= 16")
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', got {kind!r}")
    P = period_lattice(L, which)
    f = _eval if _eval is not None else evaluator(L, which, w, p)
    sign = 1.0 if kind == "min" else -1.0
    Z = cell_grid(P, grid_n)
    vals = f(Z)
    idx = int(np.argmin(sign * vals))
    z_grid, v_grid = Z[idx], float(vals[idx])
    z_best, v_best = z_grid, v_grid
    if refine:
        B = P.basis
        u0 = np.linalg.solve(B, z_grid)
        h = 1.0 / grid_n
        simplex = np.array([u0, u0 + [h, 0.0], u0 + [0.0, h]])
        res = minimize(lambda u: sign * float(f((B @ u)[None, :])[0]), u0, method="Nelder-Mead",
                       options={"maxiter": max_iter, "xatol": xatol, "fatol": 1e-16,
                                "initial_simplex": simplex})
        v_nm = sign * float(res.fun)
        if sign * v_nm < sign * v_best:
            z_best, v_best = B @ res.x, v_nm
    disp = float(np.linalg.norm(z_best - z_grid))
    z_red = P.reduce(z_best)
    return ExtremumResult(PhasePoint.from_array(z_red), v_best, grid_n, refine,
                          Certificate(v_grid, v_best, disp))


# ---------------------------------------------------------------------------
# Poisson summation

def symplectic_psf_check(L: Lattice, z, w=GaussWidth(), p: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``|LHS - RHS|`` of the symplectic Poisson summation formula.

    LHS: ``sum_l F(l + z)`` for ``F(u) = exp(-pi a |u|^2)``.
    RHS: ``vol(L)^-1 sum_{l' in L°} F_sigma F(l') exp(2 pi i sigma(z, l'))`` with
    ``F_sigma F(u) = a^{-d} exp(-pi |u|^2 / a)``.  Each side is summed with its
    own enumeration to within ``p.tol``.
    """
    a = _alpha(w)
    z = as_phase_array(z).ravel()
    lhs = theta_translate(L, z, a, p)
    La = adjoint_lattice(L)
    d = L.dim // 2
    scale = a ** (-d) / L.covolume
    q = TruncationPolicy(min(p.tol / scale, 0.5), p.max_radius, p.max_points)
    ev = _DualPhase(La, q, alpha=1.0 / a)
    # sigma(z, l') = -sigma(l', z); the real part is unchanged
    rhs = scale * float(ev(z[None, :])[0])
    return abs(lhs - rhs)
