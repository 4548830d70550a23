"""Reading point, line and conic files; deterministic JSON/CSV writers.

Input formats
-------------
JSON: ``{"points": [[x, y, z], ...]}`` or ``{"lines": [[x, y, z], ...]}``
(lines are given by their poles).  CSV: one ``x,y,z`` row per vector; a
non-numeric first row is treated as a header and lines starting with ``#``
are ignored.

Conics are ``{"nu1": .., "nu2": .., "q": [w, x, y, z]}``,
``{"a": .., "b": .., "q": [...]}`` (semi-axis tangents) or
``{"matrix": [[...], [...], [...]]}``.
"""

import csv
from enum import Enum
import io
import json
import math
import re

import numpy as np

from .errors import DegenerateInput, ParseError
from .geometry import Conic, SpherePoint, normalize_conic, semi_axes

NORM_TOL = 1e-3
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_TRIPLE = re.compile(r"\[\s*(" + _NUM + r")\s*,\s*(" + _NUM + r")\s*,\s*(" + _NUM + r")\s*\]")


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _check_vector(v, line, col):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ParseError("expected three finite numbers", line, col)
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > NORM_TOL:
        raise ParseError(f"vector norm {n:.6g} deviates from 1 by more than {NORM_TOL:g}",
                         line, col)
    return v / n


def _vectors_from_json(text, key):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f'expected a JSON object with key "{key}"', 1, 1)
    rows = data[key]
    if not isinstance(rows, list):
        raise ParseError(f'"{key}" must be a list of 3-vectors', 1, 1)
    # positions of the literal triples, used for error locations
    start = text.find(f'"{key}"')
    spots = [m.start() for m in _TRIPLE.finditer(text, max(start, 0))]
    out = []
    for i, row in enumerate(rows):
        line, col = _line_col(text, spots[i]) if i < len(spots) else (None, None)
        if not (isinstance(row, list) and len(row) == 3
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row)):
            raise ParseError(f"entry {i} is not a list of three numbers", line, col)
        out.append(_check_vector(row, line, col))
    return out


def _vectors_from_csv(text):
    out = []
    header_allowed = True
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells) or cells[0].startswith("#"):
            continue
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            bad = next(i for i, c in enumerate(cells) if not _is_float(c))
            raise ParseError(f"not a number: {cells[bad]!r}", lineno,
                             _csv_column(text, lineno, bad)) from None
        header_allowed = False
        if len(vals) != 3:
            raise ParseError(f"expected 3 columns, got {len(vals)}", lineno, 1)
        out.append(_check_vector(vals, lineno, 1))
    return out


def _is_float(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def _csv_column(text, lineno, field):
    line = text.splitlines()[lineno - 1]
    col = 1
    for _ in range(field):
        col = line.index(",", col - 1) + 2
    return col


def read_vectors(path, key="points"):
    """Unit vectors from a JSON or CSV file (format chosen by content)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        vecs = _vectors_from_json(text, key)
    else:
        vecs = _vectors_from_csv(text)
    if not vecs:
        raise DegenerateInput("file contains no vectors")
    return vecs


def dedupe(vectors, tol=1e-12):
    """Canonical SpherePoints with antipodal and exact duplicates removed."""
    out = []
    for v in vectors:
        p = SpherePoint.from_vector(v)
        if any(abs(float(p.vector @ q.vector)) >= 1.0 - tol for q in out):
            continue
        out.append(p)
    return out


def load_points(path):
    """PointSet from a file (see module docstring for the formats)."""
    from .solver import PointSet

    return PointSet(dedupe(read_vectors(path, "points")))


def load_lines(path):
    """Great lines (by pole) from a file; antipodal poles are merged."""
    from .duality import GreatLine

    return [GreatLine(p) for p in dedupe(read_vectors(path, "lines"))]


def conic_from_dict(d):
    if "matrix" in d:
        return normalize_conic(np.asarray(d["matrix"], dtype=float))
    q = tuple(d.get("q", (1.0, 0.0, 0.0, 0.0)))
    if "nu1" in d:
        return Conic(float(d["nu1"]), float(d["nu2"]), q)
    if "a" in d:
        return Conic.from_axes(float(d["a"]), float(d["b"]), q)
    raise ParseError('conic needs "matrix", "nu1"/"nu2" or "a"/"b"')


def load_conic(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(data, dict) and "conic" in data:
        data = data["conic"]
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object describing a conic", 1, 1)
    return conic_from_dict(data)


def parse_numbers(text, count=None):
    """Comma separated floats, e.g. ``"0.1, 0.2, 1"``."""
    try:
        vals = [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ParseError(f"cannot parse numbers from {text!r}") from None
    if count is not None and len(vals) not in ((count,) if isinstance(count, int) else count):
        raise ParseError(f"expected {count} numbers, got {len(vals)} in {text!r}")
    return vals


def parse_conic(text):
    """Conic from ``"nu1,nu2[,w,x,y,z]"`` or from a JSON file path."""
    if text.lower().endswith(".json"):
        return load_conic(text)
    vals = parse_numbers(text, (2, 6))
    q = tuple(vals[2:]) if len(vals) == 6 else (1.0, 0.0, 0.0, 0.0)
    return Conic(vals[0], vals[1], q)


# ---------------------------------------------------------------------------
# output


def _plain(x):
    """Convert numpy scalars/arrays and enums for JSON."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Enum):
        return x.value
    return x


def conic_dict(c):
    a, b, alpha, beta = semi_axes(c)
    return {
        "nu1": c.nu1, "nu2": c.nu2, "q": list(c.q), "center": list(c.center),
        "a": a, "b": b, "alpha": alpha, "beta": beta, "matrix": c.matrix,
    }


def result_dict(res):
    out = {
        "mode": res.mode.value, "objective": res.objective, "area": res.area,
        "conic": conic_dict(res.conic), "active_points": list(res.active_points),
        "iterations": res.iterations, "converged": res.converged,
        "kkt_residual": res.kkt_residual, "starts": res.starts,
    }
    if not math.isnan(res.agreement):
        out["agreement"] = res.agreement
    if res.certificate is not None:
        out["certificate"] = res.certificate.as_dict()
    return out


def make_meta(command, version, seed=None, tolerances=None):
    return {"tool": "spheroconic", "version": version, "command": command,
            "seed": seed, "tolerances": tolerances or {}}


def dumps_json(payload, meta):
    doc = {"meta": meta}
    doc.update(payload)
    return json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"


def dumps_csv(header, rows, meta):
    """CSV text preceded by ``# key: value`` metadata lines."""
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}: {json.dumps(_plain(meta[k]), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def write_text(text, path=None, stream=None):
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


__all__ = [
    "read_vectors", "dedupe", "load_points", "load_lines", "load_conic", "conic_from_dict",
    "parse_numbers", "parse_conic", "conic_dict", "result_dict", "make_meta", "dumps_json",
    "dumps_csv", "write_text",
]
