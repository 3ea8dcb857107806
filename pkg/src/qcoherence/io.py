"""JSON matrix files.

A state file is ``{"dim": n, "matrix": rows}`` where each entry is either a
real number or an ``[re, im]`` pair. An observable file is
``{"dim": n, "outcomes": [{"eigenvalue": a, "projector": rows}, ...]}``.
Floats are written with ``repr`` so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .qobj import DensityMatrix, DiscreteObservable, make_density, make_observable


class MatrixFileError(ValueError):
    """Malformed file: bad JSON, wrong layout, or a bad entry (with its location)."""


def _entry(x, where: str) -> complex:
    if isinstance(x, bool):
        raise MatrixFileError(f"{where}: expected a number or [re, im], got {x!r}")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise MatrixFileError(f"{where}: expected a number or [re, im], got {x!r}")


def parse_matrix(rows, dim: int | None = None, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise MatrixFileError(f"{where}: expected a non-empty list of rows")
    n = len(rows) if dim is None else dim
    if len(rows) != n:
        raise MatrixFileError(f"{where}: expected {n} rows, got {len(rows)}")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFileError(f"{where}: row {i} must have {n} entries")
        for j, x in enumerate(row):
            out[i, j] = _entry(x, f"{where}: row {i}, column {j}")
    return out


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _load(path) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise MatrixFileError(f"{path}: top level must be an object")
    return doc


def _dim(doc: dict, path) -> int | None:
    dim = doc.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        raise MatrixFileError(f"{path}: 'dim' must be a positive integer")
    return dim


def read_matrix(path) -> np.ndarray:
    doc = _load(path)
    if "matrix" not in doc:
        raise MatrixFileError(f"{path}: missing 'matrix'")
    return parse_matrix(doc["matrix"], _dim(doc, path), f"{path}: matrix")


def read_state(path) -> DensityMatrix:
    """Parse and validate a state file (validation errors propagate as ``ValidationError``)."""
    return make_density(read_matrix(path))


def read_observable(path) -> DiscreteObservable:
    doc = _load(path)
    outcomes = doc.get("outcomes")
    if not isinstance(outcomes, list) or not outcomes:
        raise MatrixFileError(f"{path}: 'outcomes' must be a non-empty list")
    dim = _dim(doc, path)
    pairs = []
    for k, item in enumerate(outcomes):
        if not isinstance(item, dict) or "eigenvalue" not in item or "projector" not in item:
            raise MatrixFileError(f"{path}: outcome {k} needs 'eigenvalue' and 'projector'")
        a = item["eigenvalue"]
        if not isinstance(a, (int, float)) or isinstance(a, bool):
            raise MatrixFileError(f"{path}: outcome {k}: eigenvalue must be a real number")
        pairs.append((float(a), parse_matrix(item["projector"], dim, f"{path}: outcome {k} projector")))
    return make_observable(pairs)


def write_matrix(path, M) -> None:
    M = np.asarray(M, dtype=complex)
    Path(path).write_text(json.dumps({"dim": M.shape[0], "matrix": encode_matrix(M)}) + "\n")


def write_observable(path, A: DiscreteObservable) -> None:
    doc = {
        "dim": A.dim,
        "outcomes": [{"eigenvalue": a, "projector": encode_matrix(P)} for a, P in zip(A.labels, A.projectors)],
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def write_columns(path, values, header: str | None = None) -> None:
    """Two-column ``index value`` text, one row per entry."""
    lines = [f"# {header}"] if header else []
    lines += [f"{i}\t{float(v)!r}" for i, v in enumerate(values)]
    Path(path).write_text("\n".join(lines) + "\n")
