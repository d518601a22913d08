"""Matrix JSON wire format: ``{"n": int, "re": [[...]], "im": [[...]]}``.

``im`` may be omitted for real matrices.  Arrays are row-major ``n x n``.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import InvalidMatrix
from .matcore import cmatrix


def _grid(name, rows, n):
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidMatrix(f'"{name}" must be a list of {n} rows')
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidMatrix(f'"{name}" row {i} must have {n} entries (matrix must be square)')
        vals = []
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidMatrix(f'"{name}" row {i} has a non-numeric entry {v!r}')
            if not math.isfinite(v):
                raise InvalidMatrix(f'"{name}" row {i} has a non-finite entry')
            vals.append(float(v))
        out.append(vals)
    return np.array(out, dtype=float).reshape(n, n)


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidMatrix("matrix JSON must be an object")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidMatrix('"n" must be a positive integer')
    if "re" not in obj:
        raise InvalidMatrix('missing "re"')
    re = _grid("re", obj["re"], n)
    im = _grid("im", obj["im"], n) if obj.get("im") is not None else np.zeros((n, n))
    return cmatrix(re + 1j * im)


def matrix_to_obj(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    obj = {"n": int(a.shape[0]), "re": (a.real + 0.0).tolist()}  # + 0.0 drops signed zeros
    if np.any(a.imag != 0):
        obj["im"] = (a.imag + 0.0).tolist()
    return obj


def loads(text: str) -> np.ndarray:
    try:
        # NaN/Infinity literals are rejected at parse time
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidMatrix(f"malformed JSON: {exc}") from exc
    return matrix_from_obj(obj)


def _reject_constant(name):
    raise InvalidMatrix(f"non-finite literal {name} in matrix JSON")


def load(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(a) -> str:
    return json.dumps(matrix_to_obj(a))
