"""File formats: frames, operators and symbols as JSON.

Complex scalars serialize as two-element arrays [re, im] of decimal floats.
Frames: {"dim": n, "vectors": [[[re,im], ...], ...]}.
Matrices: {"rows": r, "cols": c, "data": [[re,im], ...]} (row-major).
Symbols: {"values": [[re,im], ...], "lower": a, "upper": b} (bounds optional).

Parsing is strict and deterministic, and serialize-then-parse is the
identity on the carried values.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ParseError
from .frames import Frame
from .linalg import as_matrix
from .multipliers import Symbol

__all__ = [
    "parse_file",
    "parse_obj",
    "frame_to_obj",
    "matrix_to_obj",
    "symbol_to_obj",
    "write_file",
]


def _complex_from(pair, where: str) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
    ):
        raise ParseError(f"{where}: expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _parse_frame(obj: dict, source: str) -> Frame:
    dim = obj.get("dim")
    vectors = obj.get("vectors")
    if not _is_count(dim):
        raise ParseError(f"{source}: 'dim' must be a positive integer, got {dim!r}")
    if not isinstance(vectors, list) or not vectors:
        raise ParseError(f"{source}: 'vectors' must be a nonempty list")
    rows = []
    for i, vec in enumerate(vectors):
        if not isinstance(vec, list):
            raise ParseError(f"{source}: vectors[{i}] is not a list")
        if len(vec) != dim:
            raise DimensionMismatch(
                f"{source}: vectors[{i}] has length {len(vec)}, expected dim {dim}"
            )
        rows.append([_complex_from(entry, f"{source}: vectors[{i}][{j}]")
                     for j, entry in enumerate(vec)])
    return Frame.from_vectors(rows)


def _is_count(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 1


def _parse_matrix(obj: dict, source: str) -> np.ndarray:
    rows, cols, data = obj.get("rows"), obj.get("cols"), obj.get("data")
    if not _is_count(rows) or not _is_count(cols):
        raise ParseError(f"{source}: 'rows'/'cols' must be positive integers")
    if not isinstance(data, list):
        raise ParseError(f"{source}: 'data' must be a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise DimensionMismatch(
            f"{source}: 'data' has {len(data)} entries, expected rows*cols = {rows * cols}"
        )
    flat = [_complex_from(entry, f"{source}: data[{i}]") for i, entry in enumerate(data)]
    return as_matrix(np.array(flat, dtype=complex).reshape(rows, cols), source)


def _parse_symbol(obj: dict, source: str) -> Symbol:
    values = obj.get("values")
    if not isinstance(values, list) or not values:
        raise ParseError(f"{source}: 'values' must be a nonempty list")
    seq = [_complex_from(entry, f"{source}: values[{i}]") for i, entry in enumerate(values)]
    lower, upper = obj.get("lower"), obj.get("upper")
    for name, v in (("lower", lower), ("upper", upper)):
        if v is not None and not isinstance(v, (int, float)):
            raise ParseError(f"{source}: '{name}' must be a number")
    return Symbol(np.array(seq, dtype=complex),
                  None if lower is None else float(lower),
                  None if upper is None else float(upper))


def parse_obj(obj, source: str = "<input>"):
    """Dispatch on the document shape; returns Frame, matrix or Symbol."""
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    if "vectors" in obj:
        return _parse_frame(obj, source)
    if "data" in obj:
        return _parse_matrix(obj, source)
    if "values" in obj:
        return _parse_symbol(obj, source)
    raise ParseError(
        f"{source}: unrecognized document (need 'vectors', 'data' or 'values')"
    )


def parse_file(path):
    """Parse a frame / matrix / symbol file, with file context in errors."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"{p}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_obj(obj, str(p))


def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def frame_to_obj(f: Frame) -> dict:
    return {
        "dim": f.ambient_dim,
        "vectors": [[_pair(z) for z in row] for row in f.vectors],
    }


def matrix_to_obj(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=complex)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [_pair(z) for z in a.reshape(-1)],
    }


def symbol_to_obj(s: Symbol) -> dict:
    obj = {"values": [_pair(z) for z in s.values]}
    if s.lower is not None:
        obj["lower"] = float(s.lower)
        obj["upper"] = float(s.upper)
    return obj


def write_file(path, obj: dict) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
