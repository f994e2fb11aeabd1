"""Fixed-density shape search in the plane and B~ comparisons of named lattices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .catalog import ThetaSeries, e8_theta_series, named_theta_pair, zn_theta_series, _parse_zn
from .errors import NotAFrameError, TruncationWarning
from .gabor.bounds import (FrameBounds, frame_operator_bounds, janssen_frame_bounds,
                           relaxed_bounds)
from .lattice import ShapeParam2D, reduce_shape, shape_to_lattice
from .theta import (DEFAULT_POLICY, GaussWidth, TruncationPolicy, _alpha, theta_series_sum,
                    truncation_radius)

KINDS = ("quantum_packing", "quantum_covering", "quantum_paving")
BOUND_METHODS = ("janssen", "relaxed", "operator")
Y_MAX = 2.0


@dataclass(frozen=True)
class Objective:
    kind: str = "quantum_paving"
    bound_method: str = "janssen"

    def __post_init__(self):
        aliases = {"packing": "quantum_packing", "covering": "quantum_covering",
                   "paving": "quantum_paving"}
        object.__setattr__(self, "kind", aliases.get(self.kind, self.kind))
        if self.kind not in KINDS:
            raise ValueError(f"objective must be one of {KINDS}, got {self.kind!r}")
        if self.bound_method not in BOUND_METHODS:
            raise ValueError(f"bound method must be one of {BOUND_METHODS}")

    def value(self, fb: FrameBounds) -> float:
        """Quantity to minimise."""
        if self.kind == "quantum_packing":
            return fb.B
        if self.kind == "quantum_covering":
            return -fb.A
        return fb.ratio


def shape_bounds(s: ShapeParam2D, method: str = "janssen", w=GaussWidth(), grid_n: int = 32,
                 p: TruncationPolicy = DEFAULT_POLICY) -> FrameBounds:
    L = shape_to_lattice(s)
    if method == "janssen":
        return janssen_frame_bounds(L, p, grid_n)
    if method == "operator":
        return frame_operator_bounds(L, p, grid_n)
    return relaxed_bounds(L, w, grid_n, p)


@dataclass(frozen=True)
class ShapeSample:
    shape: ShapeParam2D
    A: float
    B: float
    ratio: float
    flagged: bool = False


@dataclass
class Landscape:
    density: float
    objective: Objective
    samples: list[ShapeSample]
    argopt: ShapeParam2D
    opt_value: float
    opt_bounds: FrameBounds | None = None
    grid_best: ShapeParam2D | None = None
    grid_value: float = math.nan
    refined: bool = False
    flagged: list[ShapeParam2D] = field(default_factory=list)

    def rows(self) -> list[dict]:
        return [{"x": s.shape.x, "y": s.shape.y, "A": s.A, "B": s.B, "ratio": s.ratio,
                 "flagged": int(s.flagged)} for s in self.samples]


def shape_grid(grid: int, y_max: float = Y_MAX) -> list[tuple[float, float]]:
    """``grid x grid`` points with x in [0, 1/2] and y from the unit arc to ``y_max``.

    The first row (j = 0) lies on the arc, so both the square point (0, 1)
    and the hexagonal corner (1/2, sqrt(3)/2) are samples.
    """
    pts = []
    for i in range(grid):
        x = 0.5 * i / (grid - 1)
        y0 = math.sqrt(1 - x * x)
        for j in range(grid):
            pts.append((x, y0 + (y_max - y0) * j / (grid - 1)))
    return pts


def sample_shapes(density: float, grid: int = 48, method: str = "janssen", w=GaussWidth(),
                  theta_grid: int = 24, p: TruncationPolicy = DEFAULT_POLICY,
                  y_max: float = Y_MAX) -> list[ShapeSample]:
    """Frame bounds at every grid point of the shape domain (one computation each)."""
    if not density > 1:
        raise ValueError(f"shape scan needs density > 1, got {density}")
    if grid < 16:
        raise ValueError("grid must be >= 16")
    samples = []
    for x, y in shape_grid(grid, y_max):
        s = ShapeParam2D(x, y, density)
        try:
            fb = shape_bounds(s, method, w, theta_grid, p)
        except NotAFrameError:
            samples.append(ShapeSample(s, math.nan, math.nan, math.nan, True))
            continue
        samples.append(ShapeSample(s, fb.A, fb.B, fb.ratio))
    return samples


def optimise_samples(samples: list[ShapeSample], density: float, obj: Objective,
                     grid: int, refine: bool = True, w=GaussWidth(), theta_grid: int = 24,
                     p: TruncationPolicy = DEFAULT_POLICY, y_max: float = Y_MAX) -> Landscape:
    """Pick the best sample for ``obj`` and refine it with Nelder-Mead.

    Ties go to smaller y, then smaller x.  The refined point is mapped back
    into the fundamental domain, where the objective is invariant.
    """
    flagged = [s.shape for s in samples if s.flagged]
    if flagged:
        warnings.warn(f"{len(flagged)} shape samples are not frames and were excluded")
    good = [s for s in samples if not s.flagged]
    if not good:
        raise NotAFrameError("no sample of the scan is a frame")

    def score(smp: ShapeSample) -> float:
        return obj.value(FrameBounds(smp.A, smp.B, "relaxed"))

    best = min(good, key=lambda smp: (round(score(smp), 13), smp.shape.y, smp.shape.x))
    best_val = score(best)
    argopt, opt_val = best.shape, best_val
    if refine:
        def f(u):
            x, y = u
            if y <= 1e-6:
                return math.inf
            xr, yr = reduce_shape(x, y)
            if yr > 10 * y_max:
                return math.inf
            try:
                return obj.value(shape_bounds(ShapeParam2D(xr, yr, density), obj.bound_method,
                                              w, theta_grid, p))
            except NotAFrameError:
                return math.inf

        h = 0.5 / (grid - 1)
        u0 = np.array([best.shape.x, best.shape.y])
        simplex = np.array([u0, u0 + [-h, 0.0], u0 + [0.0, h]])
        res = minimize(f, u0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-7, "fatol": 1e-14,
                                "maxiter": 400})
        if res.fun < opt_val:
            xr, yr = reduce_shape(*res.x)
            argopt, opt_val = ShapeParam2D(xr, yr, density), float(res.fun)
    opt_fb = shape_bounds(argopt, obj.bound_method, w, theta_grid, p)
    return Landscape(density, obj, samples, argopt, opt_val, opt_fb, best.shape, best_val,
                     refine, flagged)


def scan_shapes(density: float, obj: Objective = Objective(), grid: int = 48, refine: bool = True,
                w=GaussWidth(), theta_grid: int = 24, p: TruncationPolicy = DEFAULT_POLICY,
                y_max: float = Y_MAX) -> Landscape:
    """Evaluate the objective over the shape domain and refine the best sample."""
    samples = sample_shapes(density, grid, obj.bound_method, w, theta_grid, p, y_max)
    return optimise_samples(samples, density, obj, grid, refine, w, theta_grid, p, y_max)


def scan_all(density: float, grid: int = 48, refine: bool = True, method: str = "janssen",
             w=GaussWidth(), theta_grid: int = 24,
             p: TruncationPolicy = DEFAULT_POLICY) -> dict[str, Landscape]:
    """One sampling pass shared by the packing, covering and paving objectives."""
    samples = sample_shapes(density, grid, method, w, theta_grid, p)
    return {k: optimise_samples(samples, density, Objective(k, method), grid, refine, w,
                                theta_grid, p) for k in KINDS}


# ---------------------------------------------------------------------------
# high-dimensional comparison

COMPARE_MAX_POINTS = 4_000_000
DEFAULT_NAMES = {8: ("E8", "D8", "Z^8", "A8*"), 24: ("Leech", "Z^24")}


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    density: float
    lower: float
    btilde: float
    error_bound: float

    def as_row(self) -> dict:
        return {"name": self.name, "density": self.density, "lower": self.lower,
                "btilde": self.btilde, "error_bound": self.error_bound}


def _tables(name: str, dim: int, max_norm2: float) -> tuple[ThetaSeries, ThetaSeries]:
    n = _parse_zn(name)
    if n is not None:
        if n != dim:
            raise ValueError(f"{name} is not {dim}-dimensional")
        t = zn_theta_series(n, int(math.ceil(max_norm2)))
        return t, t
    if name.upper() == "E8":
        t = e8_theta_series(int(math.ceil(max_norm2 / 2)))
        return t, t
    t, td = named_theta_pair(name, float(max_norm2), COMPARE_MAX_POINTS)
    if t.dim != dim:
        raise ValueError(f"{name} is not {dim}-dimensional")
    return t, td


def compare_named(dim: int, names=None, w=GaussWidth(), density: float = 1.0,
                  tol: float = 1e-12) -> list[ComparisonRow]:
    """Rows (name, energy lower bound, B~) at equal density, sorted by B~."""
    if dim not in DEFAULT_NAMES:
        raise ValueError("comparison is available in dimensions 8 and 24")
    names = DEFAULT_NAMES[dim] if names is None else tuple(names)
    a = _alpha(w)
    c2 = density ** (-2.0 / dim)  # squared scale of the lattice relative to density 1
    # both sums are over density-1 tables with widths a c2 and a / (2 c2)
    a_min = min(a * c2, a / (2 * c2))
    R = truncation_radius(a_min, tol, dim=dim, covolume=1.0, mu=math.sqrt(dim) / 2)
    rows = []
    for name in names:
        t, td = _tables(name, dim, R * R)
        lo = theta_series_sum(t, a * c2, 1.0)
        bt = theta_series_sum(td, a / c2, 0.5)
        err = lo.tail_bound + density * bt.tail_bound
        if err > 10 * tol:
            warnings.warn(TruncationWarning(f"{name}: tail bound {err:.3g} exceeds tol {tol:g}",
                                            bound=err))
        rows.append(ComparisonRow(name, density, lo.value, density * bt.value, err))
    rows.sort(key=lambda r: (r.btilde, r.name))
    return rows


# ---------------------------------------------------------------------------
# density dependence

def density_sweep(shape: ShapeParam2D, densities, obj: Objective = Objective(),
                  grid_n: int = 32, p: TruncationPolicy = DEFAULT_POLICY,
                  w=GaussWidth()) -> list[FrameBounds | ValueError]:
    """Frame bounds of one shape at several densities.

    Entries with density <= 1 are rejected individually: the returned list
    holds a :class:`ValueError` in their place.
    """
    out: list[FrameBounds | ValueError] = []
    for d in densities:
        if not d > 1:
            out.append(ValueError(f"density {d} <= 1 is outside the frame regime"))
            continue
        out.append(shape_bounds(ShapeParam2D(shape.x, shape.y, d), obj.bound_method, w, grid_n, p))
    return out
