"""Command-line interface.

Exit codes: 0 success, 1 usage or malformed input, 2 numerical failure
(including a failed ``verify``), 3 resource cap exceeded.

CSV schemas (every file starts with a ``# units ...`` comment line):

  info     name,dim,covolume,density,symplectic,min_norm,covering_radius_bound,method,error_bound
  bounds   lattice_id,density,method,A,B,ratio,error_bound
  scan     objective,x,y,A,B,ratio,opt_value,method,error_bound      (argopt rows)
  scan --landscape FILE
           x,y,A,B,ratio,flagged,method,error_bound
  compare  name,density,lower,btilde,method,error_bound
  ofdm     lattice_id,mu_k,mu_l,nu_k,nu_l,re,im,method,error_bound
           followed by one summary row per lattice with sir_db in the re column
  verify   check,residual,threshold,method,error_bound,status,seconds
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _tol(s: str) -> float:
    v = float(s)
    if not 1e-15 < v < 1e-3:
        raise argparse.ArgumentTypeError("tol must lie in (1e-15, 1e-3)")
    return v


def _grid(s: str) -> int:
    v = int(s)
    if v < 16:
        raise argparse.ArgumentTypeError("grid must be >= 16")
    return v


def _threads(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=_tol, default=1e-12, help="absolute truncation tolerance")
    p.add_argument("--grid", type=_grid, default=32, help="grid resolution (>= 16)")
    p.add_argument("--threads", type=_threads, default=1,
                   help="cap on BLAS threads (results do not depend on it)")
    p.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    p.add_argument("--png", default=None, help="optional PNG figure path")


def _lattice_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lattice", help="lattice JSON file {dim, basis, name}")
    g.add_argument("--name", help="catalog name (Z^n, hexagonal, D4, D8, A8*, E8)")
    g.add_argument("--shape", help="shape parameters x,y of the fundamental domain")
    p.add_argument("--density", type=float, default=None, help="rescale to this density")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qpaving", description=__doc__,
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="lattice summary")
    _lattice_args(p)
    _common(p)

    p = sub.add_parser("bounds", help="frame bounds of a 2-D lattice")
    _lattice_args(p)
    p.add_argument("--method", default="all",
                   choices=["all", "janssen", "operator", "gram", "relaxed", "condition-A",
                            "energy"])
    p.add_argument("--radius", type=float, default=5.0, help="Gram truncation radius")
    p.add_argument("--alpha", type=float, default=1.0, help="Gaussian width for relaxed bounds")
    _common(p)

    p = sub.add_parser("scan", help="shape scan at fixed density")
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--objective", default="all", choices=["all", "packing", "covering", "paving"])
    p.add_argument("--method", default="janssen", choices=["janssen", "operator", "relaxed"])
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--landscape", default=None, help="write every sample to this CSV")
    _common(p)
    p.set_defaults(grid=48)

    p = sub.add_parser("compare", help="B-tilde of named lattices in dimension 8 or 24")
    p.add_argument("--dim", type=int, choices=[8, 24], required=True)
    p.add_argument("--names", default=None, help="comma-separated catalog names")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--density", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("ofdm", help="interference report of an OFDM scenario")
    p.add_argument("--scenario", default=None, help="scenario JSON; default compares geometries")
    p.add_argument("--K", type=int, default=4)
    p.add_argument("--spread", type=float, nargs=2, default=(0.3, 0.3),
                   metavar=("DELAY", "DOPPLER"))
    _common(p)

    p = sub.add_parser("verify", help="run the identity suite")
    _common(p)
    p.set_defaults(tol=1e-9)
    return ap


# ---------------------------------------------------------------------------
# helpers

def _load_lattice(args):
    from .catalog import named_lattice
    from .errors import QPavingError
    from .formats import read_lattice
    from .lattice import ShapeParam2D, shape_to_lattice

    if args.lattice:
        L = read_lattice(args.lattice)
    elif args.name:
        L = named_lattice(args.name, 1.0)
        if not hasattr(L, "basis"):
            raise QPavingError(f"{args.name} has no explicit basis in the catalog")
    elif args.shape:
        try:
            x, y = (float(v) for v in args.shape.split(","))
        except ValueError:
            raise SystemExit(_usage(f"--shape expects x,y, got {args.shape!r}"))
        L = shape_to_lattice(ShapeParam2D(x, y, args.density or 1.0))
    else:
        raise SystemExit(_usage("one of --lattice, --name or --shape is required"))
    if args.density is not None:
        L = L.with_density(args.density)
    return L


def _usage(msg: str) -> int:
    print(f"qpaving: error: {msg}", file=sys.stderr)
    return 1


def _emit(rows, columns, args, units):
    from .formats import write_csv

    if args.out in (None, "-"):
        write_csv(rows, columns, sys.stdout, units)
    else:
        write_csv(rows, columns, args.out, units)


def _policy(args):
    from .theta import TruncationPolicy

    return TruncationPolicy(args.tol)


# ---------------------------------------------------------------------------
# commands

def cmd_info(args) -> int:
    from .lattice import is_symplectic, minimal_vectors

    L = _load_lattice(args)
    n2, _ = minimal_vectors(L)
    row = {"name": L.name or "", "dim": L.dim, "covolume": L.covolume, "density": L.density,
           "symplectic": is_symplectic(L.basis), "min_norm": math.sqrt(n2),
           "covering_radius_bound": L.covering_radius_bound(), "method": "enumeration",
           "error_bound": 0.0}
    _emit([row], list(row), args, "units: lengths in phase-space units; density = 1/covolume")
    if args.png and L.dim == 2:
        from .plotting import spectrogram

        spectrogram(args.png, L)
    return 0


def cmd_bounds(args) -> int:
    from .gabor import (ROW_COLUMNS, condition_a_upper, energy_lower_bound,
                        frame_operator_bounds, gram_spectral_bounds, janssen_frame_bounds,
                        relaxed_bounds)

    L = _load_lattice(args)
    p = _policy(args)
    m = args.method
    rows = []
    if m in ("all", "janssen"):
        rows.append(janssen_frame_bounds(L, p, args.grid).as_row())
    if m in ("all", "operator"):
        rows.append(frame_operator_bounds(L, p, args.grid).as_row())
    if m in ("all", "gram"):
        rows.append(gram_spectral_bounds(L, args.radius).as_row())
    if m in ("all", "relaxed"):
        rows.append(relaxed_bounds(L, args.alpha, args.grid, p).as_row())
    if m in ("all", "condition-A"):
        b = condition_a_upper(L, 1.0, p)
        rows.append({"lattice_id": L.name, "density": L.density, "method": "condition-A-upper",
                     "A": "", "B": b, "ratio": "", "error_bound": args.tol})
    if m in ("all", "energy"):
        b = energy_lower_bound(L, 1.0, p)
        rows.append({"lattice_id": L.name, "density": L.density, "method": "energy-lower",
                     "A": "", "B": b, "ratio": "", "error_bound": args.tol})
    for r in rows:
        r["lattice_id"] = r["lattice_id"] or "lattice"
    _emit(rows, ROW_COLUMNS, args, "units: frame bounds are dimensionless (unit-norm window)")
    if args.png:
        from .plotting import theta_landscape

        theta_landscape(L, args.png)
    return 0


def cmd_scan(args) -> int:
    from .formats import write_csv
    from .optimizer import KINDS, Objective, optimise_samples, sample_shapes
    from .theta import GaussWidth

    p = _policy(args)
    kinds = KINDS if args.objective == "all" else (Objective(args.objective).kind,)
    samples = sample_shapes(args.density, args.grid, args.method, GaussWidth(), 24, p)
    rows = []
    scapes = []
    for k in kinds:
        ls = optimise_samples(samples, args.density, Objective(k, args.method), args.grid,
                              not args.no_refine, GaussWidth(), 24, p)
        scapes.append(ls)
        fb = ls.opt_bounds
        rows.append({"objective": k, "x": ls.argopt.x, "y": ls.argopt.y, "A": fb.A, "B": fb.B,
                     "ratio": fb.ratio, "opt_value": ls.opt_value, "method": fb.method,
                     "error_bound": fb.error_bound})
    cols = ["objective", "x", "y", "A", "B", "ratio", "opt_value", "method", "error_bound"]
    _emit(rows, cols, args, f"units: shape (x, y) in the modular domain; density {args.density:g}")
    if args.landscape:
        lrows = [dict(r, method=rows[0]["method"], error_bound=rows[0]["error_bound"])
                 for r in scapes[0].rows()]
        write_csv(lrows, ["x", "y", "A", "B", "ratio", "flagged", "method", "error_bound"],
                  args.landscape, f"units: dimensionless bounds; density {args.density:g}")
    if args.png:
        from .plotting import landscape_heatmap

        landscape_heatmap(scapes[-1], args.png)
    return 0


def cmd_compare(args) -> int:
    from .optimizer import compare_named

    names = None if args.names is None else [n.strip() for n in args.names.split(",") if n.strip()]
    tol = args.tol
    rows = [dict(r.as_row(), method="theta-table")
            for r in compare_named(args.dim, names, args.alpha, args.density, tol)]
    _emit(rows, ["name", "density", "lower", "btilde", "method", "error_bound"], args,
          f"units: dimensionless; alpha {args.alpha:g}")
    return 0


def cmd_ofdm(args) -> int:
    from .ofdm import (gaussian_spread_channel, hexagonal_config, interference_report,
                       read_scenario, rectangular_config)

    p = _policy(args)
    if args.scenario:
        sc = read_scenario(args.scenario)
        runs = [(sc.cfg, sc.channel)]
    else:
        ch = gaussian_spread_channel(*args.spread)
        runs = [(rectangular_config(args.K), ch), (hexagonal_config(args.K), ch)]
    rows = []
    reports = []
    for cfg, ch in runs:
        rep = interference_report(cfg, ch, p=p)
        reports.append(rep)
        for r in rep.rows():
            rows.append(dict(r, lattice_id=rep.lattice_id, method="quadrature",
                             error_bound=rep.cg_residual))
    for rep in reports:
        rows.append({"lattice_id": rep.lattice_id, "mu_k": "summary", "mu_l": "sir_db",
                     "nu_k": "", "nu_l": "", "re": rep.sir_db, "im": "",
                     "method": "quadrature", "error_bound": rep.cg_residual})
    cols = ["lattice_id", "mu_k", "mu_l", "nu_k", "nu_l", "re", "im", "method", "error_bound"]
    _emit(rows, cols, args, "units: matrix entries <H g_mu, f_nu>; summary rows give SIR in dB")
    for rep in reports:
        print(f"{rep.lattice_id}: SIR {rep.sir_db:.3f} dB", file=sys.stderr)
    if args.png:
        from .plotting import interference_plot

        interference_plot(reports[-1], args.png)
    return 0


def cmd_verify(args) -> int:
    from .verify import COLUMNS, run_suite

    checks = run_suite(args.tol)
    _emit([c.as_row() for c in checks], COLUMNS, args, "units: absolute residuals")
    if args.png:
        from .plotting import spectrogram

        spectrogram(args.png)
    return 0 if all(c.passed for c in checks) else 2


COMMANDS = {"info": cmd_info, "bounds": cmd_bounds, "scan": cmd_scan, "compare": cmd_compare,
            "ofdm": cmd_ofdm, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(args.threads))
    from .errors import ParseError, QPavingError, ResourceCapError

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except ResourceCapError as exc:
        print(f"qpaving: resource cap: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"qpaving: {exc}", file=sys.stderr)
        return 1
    except (QPavingError, ValueError, FloatingPointError) as exc:
        print(f"qpaving: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qpaving: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
