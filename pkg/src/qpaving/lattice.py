"""Lattices in even-dimensional phase space.

A :class:`Lattice` stores a generator matrix whose *columns* are the basis
vectors, so the lattice is ``basis @ Z^n``.  Duals, symplectic adjoints,
Fincke-Pohst point enumeration, 2-D deep holes and the 2-D shape
parameterization by the modular fundamental domain live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionError, InvalidLatticeError, ResourceCapError
from .phase import PhasePoint, symplectic_matrix

#: Default cap on the number of points a single enumeration may return.
MAX_POINTS = 2_000_000

# relative slack on the radius so that points exactly on the sphere survive
# round-off (e.g. the unit vectors of Z^2 at radius 1)
_RADIUS_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class Lattice:
    """Full-rank lattice ``basis @ Z^n`` with columns as generators."""

    basis: np.ndarray
    name: str | None = None

    def __post_init__(self):
        B = np.array(self.basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] == 0:
            raise InvalidLatticeError(f"basis must be a non-empty square matrix, got shape {B.shape}")
        if not np.all(np.isfinite(B)):
            raise InvalidLatticeError("basis contains NaN or Inf")
        n = B.shape[0]
        scale = np.linalg.norm(B, 2) ** n
        det = abs(np.linalg.det(B))
        if det <= 1e-12 * scale:
            raise InvalidLatticeError("basis is singular")
        B.flags.writeable = False
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def covolume(self) -> float:
        return float(abs(np.linalg.det(self.basis)))

    @property
    def density(self) -> float:
        return 1.0 / self.covolume

    @property
    def gram(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def coordinates(self, points) -> np.ndarray:
        """Coefficients of ``points`` (rows) in this basis."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.solve(self.basis, pts.T).T

    def scaled(self, factor: float, name: str | None = None) -> "Lattice":
        return Lattice(factor * self.basis, name if name is not None else self.name)

    def with_density(self, density: float) -> "Lattice":
        """Uniformly rescaled copy with the requested density."""
        if not density > 0:
            raise ValueError("density must be positive")
        factor = (self.covolume * density) ** (-1.0 / self.dim)
        return self.scaled(factor)

    def reduce(self, z) -> np.ndarray:
        """Representative of ``z`` modulo the lattice inside the basis cell."""
        z = np.asarray(z, dtype=float)
        c = self.coordinates(z.reshape(-1, self.dim))
        c = c - np.floor(np.round(c, 12))
        return (self.basis @ c.T).T.reshape(z.shape)

    def gram_schmidt_lengths(self) -> np.ndarray:
        return np.abs(np.diag(np.linalg.qr(self.basis, mode="r")))

    def covering_radius_bound(self) -> float:
        """Babai nearest-plane bound ``sqrt(sum |b_i*|^2) / 2``."""
        return 0.5 * float(np.sqrt(np.sum(self.gram_schmidt_lengths() ** 2)))

    def __repr__(self):
        label = self.name or "Lattice"
        return f"<{label} dim={self.dim} density={self.density:.6g}>"


def dual_lattice(L: Lattice) -> Lattice:
    """Euclidean dual, generated by the inverse transpose of the basis."""
    try:
        B = np.linalg.inv(L.basis).T
    except np.linalg.LinAlgError as exc:
        raise InvalidLatticeError("singular basis") from exc
    name = f"dual({L.name})" if L.name else None
    return Lattice(B, name)


def adjoint_lattice(L: Lattice) -> Lattice:
    """Symplectic adjoint ``J * dual(L)``: all w with sigma(l, w) integral."""
    if L.dim % 2:
        raise DimensionError(f"adjoint lattice needs even dimension, got {L.dim}")
    J = symplectic_matrix(L.dim)
    name = f"adjoint({L.name})" if L.name else None
    return Lattice(J @ dual_lattice(L).basis, name)


def is_symplectic(B, tol: float = 1e-10) -> bool:
    """True iff ``max |B^T J B - J| <= tol``."""
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DimensionError("matrix must be square")
    if B.shape[0] % 2:
        raise DimensionError(f"symplectic test needs even size, got {B.shape[0]}")
    J = symplectic_matrix(B.shape[0])
    return bool(np.max(np.abs(B.T @ J @ B - J)) <= tol)


def enumerate_coordinates(L: Lattice, radius: float, max_points: int = MAX_POINTS) -> np.ndarray:
    """Integer coordinates of all lattice points with norm <= radius.

    Fincke-Pohst bounding on the Cholesky factor of the Gram matrix, expanded
    level by level over numpy arrays.  Rows are sorted lexicographically.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    n = L.dim
    R = np.linalg.cholesky(L.gram).T  # upper triangular, gram = R^T R
    diag = np.diag(R).copy()
    mu = R / diag[:, None]
    r2 = radius * radius * (1.0 + _RADIUS_SLACK)

    K = np.zeros((1, n), dtype=np.int64)
    partial = np.zeros(1)
    node_cap = 20 * max_points
    for i in range(n - 1, -1, -1):
        c = K[:, i + 1:] @ mu[i, i + 1:] if i < n - 1 else np.zeros(len(K))
        room = np.maximum(r2 - partial, 0.0)
        half = np.sqrt(room) / diag[i]
        lo = np.ceil(-c - half - 1e-12).astype(np.int64)
        hi = np.floor(-c + half + 1e-12).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > node_cap or (i == 0 and total > max_points * 2):
            raise ResourceCapError(
                f"enumeration at radius {radius:g} exceeds the point cap {max_points}",
                cap=max_points, needed=total)
        rows = np.repeat(np.arange(len(K)), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        k_i = lo[rows] + (np.arange(total) - starts)
        K = K[rows]
        K[:, i] = k_i
        partial = partial[rows] + (diag[i] * (k_i + c[rows])) ** 2

    pts = K @ L.basis.T
    keep = np.einsum("ij,ij->i", pts, pts) <= r2
    K = K[keep]
    if len(K) > max_points:
        raise ResourceCapError(
            f"enumeration at radius {radius:g} returned {len(K)} points, cap is {max_points}",
            cap=max_points, needed=len(K))
    order = np.lexsort(K.T[::-1])
    return K[order]


def enumerate_points(L: Lattice, radius: float, max_points: int = MAX_POINTS) -> np.ndarray:
    """Lattice points of Euclidean norm <= radius, one per row.

    Order is lexicographic in the integer coordinates, which makes the output
    deterministic for a fixed basis.
    """
    K = enumerate_coordinates(L, radius, max_points)
    return K @ L.basis.T


def same_point_set(L1: Lattice, L2: Lattice, radius: float = 3.0, tol: float = 1e-9) -> bool:
    """Mutual membership of enumerated points: equal lattices as point sets."""
    if L1.dim != L2.dim:
        return False
    for a, b in ((L1, L2), (L2, L1)):
        pts = enumerate_points(a, radius)
        c = b.coordinates(pts)
        if np.max(np.abs(c - np.round(c))) > tol:
            return False
    return True


def minimal_vectors(L: Lattice, rel_tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """Squared minimal norm and all vectors attaining it."""
    r = float(np.min(np.linalg.norm(L.basis, axis=0)))
    pts = enumerate_points(L, r * (1 + 1e-9))
    n2 = np.einsum("ij,ij->i", pts, pts)
    nz = n2 > 1e-20 * r * r
    m = float(np.min(n2[nz]))
    sel = nz & (n2 <= m * (1 + rel_tol))
    return m, pts[sel]


# ---------------------------------------------------------------------------
# deep holes in the plane

@dataclass(frozen=True)
class DeepHoles:
    points: tuple[PhasePoint, ...]
    covering_radius: float
    voronoi_vertices: np.ndarray


def voronoi_cell_2d(L: Lattice) -> np.ndarray:
    """Vertices of the Voronoi cell of the origin, sorted by angle."""
    if L.dim != 2:
        raise DimensionError(f"Voronoi cell is implemented for dimension 2 only, got {L.dim}")
    # every relevant vector has norm <= 2 * covering radius
    rel = enumerate_points(L, 2.0 * L.covering_radius_bound() * (1 + 1e-9))
    rel = rel[np.einsum("ij,ij->i", rel, rel) > 0]
    half = 0.5 * np.einsum("ij,ij->i", rel, rel)
    scale = float(np.max(half))
    verts = []
    for i, j in combinations(range(len(rel)), 2):
        A = rel[[i, j]]
        if abs(np.linalg.det(A)) < 1e-12 * scale:
            continue
        v = np.linalg.solve(A, half[[i, j]])
        if np.all(rel @ v <= half + 1e-9 * scale):
            verts.append(v)
    V = np.array(verts)
    # merge duplicates coming from several active constraint pairs
    uniq = []
    for v in V:
        if not any(np.linalg.norm(v - u) < 1e-9 * math.sqrt(scale) for u in uniq):
            uniq.append(v)
    V = np.array(uniq)
    return V[np.argsort(np.arctan2(V[:, 1], V[:, 0]))]


def deep_holes_2d(L: Lattice) -> DeepHoles:
    """Points at maximal distance from the lattice, modulo the lattice.

    The candidates are the vertices of the Voronoi cell; those attaining the
    covering radius are reduced into the basis cell ``B [0,1)^2`` and
    deduplicated.
    """
    if L.dim != 2:
        raise DimensionError(f"deep holes are implemented for dimension 2 only, got {L.dim}")
    V = voronoi_cell_2d(L)
    norms = np.linalg.norm(V, axis=1)
    cov = float(np.max(norms))
    far = V[norms >= cov * (1 - 1e-9)]
    coords = L.coordinates(far)
    coords = np.round(coords, 9) % 1.0
    coords = np.round(coords, 9) % 1.0
    uniq = []
    for c in coords:
        if not any(np.max(np.abs(c - u)) < 1e-8 for u in uniq):
            uniq.append(c)
    uniq.sort(key=lambda c: (c[0], c[1]))
    holes = tuple(PhasePoint.from_array(L.basis @ c) for c in uniq)
    return DeepHoles(holes, cov, V)


# ---------------------------------------------------------------------------
# 2-D shapes at fixed density

@dataclass(frozen=True)
class ShapeParam2D:
    """Point ``tau = x + i y`` of the modular fundamental domain plus a density."""

    x: float
    y: float
    density: float = 1.0

    def __post_init__(self):
        if not self.density > 0:
            raise ValueError("density must be positive")

    def in_fundamental_domain(self, tol: float = 1e-12) -> bool:
        return (abs(self.x) <= 0.5 + tol
                and self.x * self.x + self.y * self.y >= 1 - tol
                and self.y > 0)


def shape_to_lattice(s: ShapeParam2D) -> Lattice:
    """Lattice with basis ``c [[1, x], [0, y]]`` and ``|det| = 1/density``."""
    if not s.y > 0:
        raise ValueError(f"shape parameter y must be positive, got {s.y}")
    c = 1.0 / math.sqrt(s.y * s.density)
    B = c * np.array([[1.0, s.x], [0.0, s.y]])
    return Lattice(B, f"shape({s.x:.6g},{s.y:.6g})")


def reduce_shape(x: float, y: float) -> tuple[float, float]:
    """Map ``tau = x + iy`` (y > 0) into the closed fundamental domain with x >= 0."""
    tau = complex(x, y)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    for _ in range(200):
        tau = complex(tau.real - math.floor(tau.real + 0.5), tau.imag)
        if abs(tau) < 1 - 1e-15:
            tau = -1 / tau
        else:
            break
    return abs(tau.real), tau.imag


def lattice_to_shape(L: Lattice) -> ShapeParam2D:
    """Inverse of :func:`shape_to_lattice` up to rotation and reflection."""
    if L.dim != 2:
        raise DimensionError("shape parameters exist for 2-D lattices only")
    b1, b2 = L.basis[:, 0], L.basis[:, 1]
    z1, z2 = complex(*b1), complex(*b2)
    tau = z2 / z1
    if tau.imag < 0:
        tau = tau.conjugate()
    x, y = reduce_shape(tau.real, tau.imag)
    return ShapeParam2D(x, y, L.density)


def hexagonal_lattice(density: float = 1.0) -> Lattice:
    B = np.array([[1.0, 0.5], [0.0, math.sqrt(3) / 2]])
    return Lattice(B, "hexagonal").with_density(density)


def square_lattice(density: float = 1.0) -> Lattice:
    return Lattice(np.eye(2), "square").with_density(density)
