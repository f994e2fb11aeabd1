"""File formats: lattice descriptors (JSON), theta tables and CSV output.

Lattice descriptor::

    {"dim": 2, "basis": [b11, b12, b21, b22], "name": "hex"}

``basis`` is the generator matrix in row-major order (columns are the
generators).  Theta tables are CSV with the exact header ``norm2,count``.
Both parsers reject NaN and Inf.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidLatticeError, ParseError
from .lattice import Lattice


def _reject_constant(token):
    raise ValueError(f"non-finite number {token!r}")


def _load_json(text: str, path=None):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from exc
    except ValueError as exc:
        raise ParseError(str(exc), path) from exc


def lattice_from_dict(obj, path=None) -> Lattice:
    if not isinstance(obj, dict):
        raise ParseError("lattice descriptor must be a JSON object", path)
    if "dim" not in obj or "basis" not in obj:
        raise ParseError("lattice descriptor needs 'dim' and 'basis'", path)
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0 or dim % 2:
        raise ParseError(f"'dim' must be a positive even integer, got {dim!r}", path)
    basis = obj["basis"]
    if not isinstance(basis, list) or len(basis) != dim * dim:
        raise ParseError(f"'basis' must be a flat array of {dim * dim} numbers", path)
    vals = []
    for v in basis:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"basis entry {v!r} is not a finite number", path)
        vals.append(float(v))
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("'name' must be a string", path)
    try:
        return Lattice(np.array(vals).reshape(dim, dim), name)
    except InvalidLatticeError as exc:
        raise ParseError(str(exc), path) from exc


def parse_lattice(text: str, path=None) -> Lattice:
    return lattice_from_dict(_load_json(text, path), path)


def read_lattice(path) -> Lattice:
    return parse_lattice(Path(path).read_text(), str(path))


def lattice_to_dict(L: Lattice) -> dict:
    d = {"dim": L.dim, "basis": [float(v) for v in L.basis.ravel()]}
    if L.name:
        d["name"] = L.name
    return d


def write_lattice(L: Lattice, path) -> None:
    Path(path).write_text(json.dumps(lattice_to_dict(L), indent=2) + "\n")


def parse_theta_csv(text: str, path=None) -> tuple[list[float], list[int]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "norm2,count":
        raise ParseError("theta table header must be 'norm2,count'", path, 1, 1)
    norms, counts = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError("expected two columns", path, lineno, 1)
        try:
            v = float(parts[0])
        except ValueError:
            raise ParseError(f"bad norm {parts[0]!r}", path, lineno, 1) from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite norm {parts[0]!r}", path, lineno, 1)
        try:
            c = int(parts[1])
        except ValueError:
            raise ParseError(f"bad count {parts[1]!r}", path, lineno, len(parts[0]) + 2) from None
        norms.append(v)
        counts.append(c)
    return norms, counts


def read_theta_csv(path) -> tuple[list[float], list[int]]:
    return parse_theta_csv(Path(path).read_text(), str(path))


def write_theta_csv(norms, counts, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("norm2,count\n")
        for v, c in zip(norms, counts):
            fh.write(f"{v:.17g},{int(c)}\n")


# ---------------------------------------------------------------------------
# tabular output

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(rows, columns, out, units: str | None = None) -> None:
    """Write dict rows with a fixed column order.

    ``units``, when given, goes on a leading ``#`` comment line; the header row
    follows immediately after it.  Floats use ``repr`` so output is
    byte-identical across runs.
    """
    own = isinstance(out, (str, Path))
    fh = open(out, "w", newline="") if own else out
    try:
        if units:
            fh.write(f"# {units}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c, "")) for c in columns])
    finally:
        if own:
            fh.close()


def csv_string(rows, columns, units=None) -> str:
    buf = io.StringIO()
    write_csv(rows, columns, buf, units)
    return buf.getvalue()
