"""Named lattices and theta-series tables.

Explicit generators are provided up to dimension 8 (and for ``Z^n`` in any
dimension).  The Leech lattice is only available as a theta-series table
shipped in ``data/leech_theta.csv``; it is checked against the kissing-number
checksums every time it is loaded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import CatalogError
from .lattice import MAX_POINTS, Lattice, dual_lattice, enumerate_points, hexagonal_lattice

NAMES = ("Z^n", "hexagonal", "D4", "D8", "A8*", "E8", "Z^24", "Leech")

# squared norm -> count at the unimodular scale (minimal norm 4)
LEECH_CHECKSUMS = {0: 1, 4: 196560, 6: 16773120, 8: 398034000}
LEECH_COVERING_RADIUS = math.sqrt(2.0)


@dataclass(frozen=True)
class ThetaSeries:
    """Squared norms and their multiplicities for a lattice of given covolume.

    ``covering_radius_bound`` (at the table's own scale) feeds the tail bound
    for sums that run past the last tabulated norm.  ``self_dual`` marks
    unimodular tables, whose dual is the same table at the reciprocal scale.
    """

    lattice_name: str
    dim: int
    norms: tuple[float, ...]
    counts: tuple[int, ...]
    covolume_of_table: float = 1.0
    covering_radius_bound: float = math.inf
    self_dual: bool = False
    complete_to: float = field(default=None)

    def __post_init__(self):
        if len(self.norms) != len(self.counts) or not self.norms:
            raise CatalogError("theta table needs matching, non-empty norm and count columns")
        if self.norms[0] != 0 or self.counts[0] != 1:
            raise CatalogError("theta table must start with the entry (0, 1)")
        n = np.asarray(self.norms, dtype=float)
        if not np.all(np.isfinite(n)) or np.any(np.diff(n) <= 0):
            raise CatalogError("theta table norms must be finite and strictly increasing")
        for c in self.counts[1:]:
            if c <= 0 or c % 2:
                raise CatalogError("nonzero-norm counts must be positive and even")
        if self.complete_to is None:
            object.__setattr__(self, "complete_to", float(self.norms[-1]))

    @property
    def density(self) -> float:
        return 1.0 / self.covolume_of_table

    def norm_array(self) -> np.ndarray:
        return np.asarray(self.norms, dtype=float)

    def count_array(self) -> np.ndarray:
        return np.asarray([float(c) for c in self.counts])

    def scaled_to_density(self, density: float) -> "ThetaSeries":
        """Same lattice uniformly rescaled so that its density is ``density``."""
        if not density > 0:
            raise ValueError("density must be positive")
        cov = 1.0 / density
        s2 = (cov / self.covolume_of_table) ** (2.0 / self.dim)
        return ThetaSeries(self.lattice_name, self.dim,
                           tuple(float(v) * s2 for v in self.norms), self.counts,
                           cov, self.covering_radius_bound * math.sqrt(s2),
                           self.self_dual, self.complete_to * s2)

    def dual(self) -> "ThetaSeries":
        """Theta series of the dual lattice; only for self-dual tables."""
        if not self.self_dual:
            raise CatalogError(f"{self.lattice_name}: dual table unknown (not self-dual)")
        # L = c * L0 with L0 unimodular, so dual(L) = L0 / c
        base = self.scaled_to_density(1.0)
        c2 = self.covolume_of_table ** (2.0 / self.dim)
        return ThetaSeries(f"dual({self.lattice_name})", self.dim,
                           tuple(v / c2 for v in base.norms), self.counts,
                           1.0 / self.covolume_of_table,
                           base.covering_radius_bound / math.sqrt(c2),
                           True, base.complete_to / c2)

    def count_at(self, norm2: float, rel_tol: float = 1e-9) -> int:
        for v, c in zip(self.norms, self.counts):
            if abs(v - norm2) <= rel_tol * max(1.0, abs(norm2)):
                return c
        return 0


# ---------------------------------------------------------------------------
# explicit generators

def integer_lattice(n: int) -> Lattice:
    return Lattice(np.eye(n), f"Z^{n}")


def d_lattice(n: int) -> Lattice:
    """Checkerboard lattice ``{x in Z^n : sum x even}`` (covolume 2)."""
    B = np.zeros((n, n))
    for i in range(n - 1):
        B[i, i] = 1.0
        B[i + 1, i] = -1.0
    B[n - 2, n - 1] = 1.0
    B[n - 1, n - 1] = 1.0
    return Lattice(B, f"D{n}")


def e8_lattice() -> Lattice:
    """E8 as ``D8 u (D8 + (1/2)^8)`` (unimodular, minimal norm 2)."""
    rows = [[2, 0, 0, 0, 0, 0, 0, 0],
            [-1, 1, 0, 0, 0, 0, 0, 0],
            [0, -1, 1, 0, 0, 0, 0, 0],
            [0, 0, -1, 1, 0, 0, 0, 0],
            [0, 0, 0, -1, 1, 0, 0, 0],
            [0, 0, 0, 0, -1, 1, 0, 0],
            [0, 0, 0, 0, 0, -1, 1, 0],
            [0.5] * 8]
    return Lattice(np.array(rows, dtype=float).T, "E8")


def a_lattice(n: int) -> Lattice:
    """A_n written in an orthonormal frame of the hyperplane sum x = 0 in R^{n+1}."""
    ones = np.ones(n + 1) / math.sqrt(n + 1)
    # orthonormal basis of the complement of the all-ones vector
    Q, _ = np.linalg.qr(np.column_stack([ones, np.eye(n + 1)[:, :n]]))
    U = Q[:, 1:]
    roots = np.zeros((n + 1, n))
    for i in range(n):
        roots[i, i] = 1.0
        roots[i + 1, i] = -1.0
    return Lattice(U.T @ roots, f"A{n}")


def a_star_lattice(n: int) -> Lattice:
    return Lattice(dual_lattice(a_lattice(n)).basis, f"A{n}*")


def _parse_zn(name: str) -> int | None:
    m = re.fullmatch(r"Z\^?(\d+)", name)
    return int(m.group(1)) if m else None


def named_lattice(name: str, density: float = 1.0):
    """Catalog lookup, rescaled to ``density``.

    Returns a :class:`Lattice` for every name except ``"Leech"``, which comes
    back as a :class:`ThetaSeries`.
    """
    if not density > 0:
        raise ValueError("density must be positive")
    n = _parse_zn(name)
    if n is not None:
        if n <= 0:
            raise CatalogError(f"bad dimension in {name!r}")
        return Lattice(np.eye(n), f"Z^{n}").with_density(density)
    key = name.strip().lower()
    if key in ("hexagonal", "hex", "a2"):
        return hexagonal_lattice(density)
    if key == "d4":
        return d_lattice(4).with_density(density)
    if key == "d8":
        return d_lattice(8).with_density(density)
    if key in ("a8*", "a8star"):
        return a_star_lattice(8).with_density(density)
    if key == "e8":
        return e8_lattice().with_density(density)
    if key == "leech":
        return leech_theta_series().scaled_to_density(density)
    raise CatalogError(f"unknown lattice {name!r}; known: {', '.join(NAMES)}")


# ---------------------------------------------------------------------------
# theta series

def theta_series_of(L: Lattice, max_norm2: float, decimals: int = 9,
                    max_points: int = MAX_POINTS) -> ThetaSeries:
    """Theta series of an explicit lattice by enumeration up to ``max_norm2``."""
    pts = enumerate_points(L, math.sqrt(max_norm2), max_points)
    n2 = np.round(np.einsum("ij,ij->i", pts, pts), decimals)
    vals, cnts = np.unique(n2, return_counts=True)
    vals[0] = 0.0
    return ThetaSeries(L.name or "lattice", L.dim, tuple(float(v) for v in vals),
                       tuple(int(c) for c in cnts), L.covolume,
                       L.covering_radius_bound(), False, float(max_norm2))


def zn_theta_counts(n: int, max_norm: int) -> list[int]:
    """r_n(m) for m = 0..max_norm by repeated convolution of the 1-D series."""
    one = [0] * (max_norm + 1)
    k = 0
    while k * k <= max_norm:
        one[k * k] += 1 if k == 0 else 2
        k += 1
    out = [1] + [0] * max_norm
    for _ in range(n):
        new = [0] * (max_norm + 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(one[: max_norm + 1 - i]):
                    if b:
                        new[i + j] += a * b
        out = new
    return out


def zn_theta_series(n: int, max_norm: int) -> ThetaSeries:
    c = zn_theta_counts(n, max_norm)
    pairs = [(m, v) for m, v in enumerate(c) if v]
    return ThetaSeries(f"Z^{n}", n, tuple(float(m) for m, _ in pairs),
                       tuple(v for _, v in pairs), 1.0, math.sqrt(n) / 2, True,
                       float(max_norm))


def _sigma(k: int, m: int) -> int:
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


def e8_theta_series(max_m: int) -> ThetaSeries:
    """E8 theta: norm 2m has 240 * sigma_3(m) vectors."""
    norms = [0.0] + [2.0 * m for m in range(1, max_m + 1)]
    counts = [1] + [240 * _sigma(3, m) for m in range(1, max_m + 1)]
    return ThetaSeries("E8", 8, tuple(norms), tuple(counts), 1.0, 1.0, True, 2.0 * max_m)


@lru_cache(maxsize=None)
def named_theta_pair(name: str, max_norm2: float,
                     max_points: int = MAX_POINTS) -> tuple[ThetaSeries, ThetaSeries]:
    """(theta of the lattice, theta of its dual), both at density 1.

    Dimension-8 tables are built by enumeration; ``Z^n`` and Leech use their
    exact tables.
    """
    n = _parse_zn(name)
    if n is not None:
        t = zn_theta_series(n, int(math.floor(max_norm2)))
        return t, t
    if name.lower() == "leech":
        t = leech_theta_series()
        return t, t
    L = named_lattice(name, 1.0)
    t = theta_series_of(L, max_norm2, max_points=max_points)
    td = theta_series_of(dual_lattice(L), max_norm2, max_points=max_points)
    return t, td


# ---------------------------------------------------------------------------
# Leech table

def theta_series_from_csv(text: str, name: str, dim: int, covolume: float = 1.0,
                          covering_radius_bound: float = math.inf,
                          self_dual: bool = False) -> ThetaSeries:
    from .formats import parse_theta_csv
    norms, counts = parse_theta_csv(text)
    return ThetaSeries(name, dim, tuple(norms), tuple(counts), covolume,
                       covering_radius_bound, self_dual)


@lru_cache(maxsize=1)
def leech_theta_series() -> ThetaSeries:
    """Load and validate the shipped Leech theta table (unimodular scale)."""
    text = resources.files("qpaving").joinpath("data/leech_theta.csv").read_text()
    t = theta_series_from_csv(text, "Leech", 24, 1.0, LEECH_COVERING_RADIUS, True)
    for norm, expected in LEECH_CHECKSUMS.items():
        got = t.count_at(float(norm))
        if got != expected:
            raise CatalogError(f"Leech table checksum failed at norm {norm}: {got} != {expected}")
    if any(abs(v - round(v)) > 0 or int(round(v)) % 2 for v in t.norms):
        raise CatalogError("Leech table must contain even integral norms only")
    if t.count_at(2.0):
        raise CatalogError("Leech table lists vectors of norm 2")
    return t
