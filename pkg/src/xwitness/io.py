"""JSON round-tripping and text rendering.

Matrix schema::

    {"n": 3, "role": "witness",
     "entries": [{"index": "000", "s": 0.0, "t": 0.0, "u": [-1.0, 0.0]}, ...]}

Omitted indices are zero triples; ``role`` is optional.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .exceptions import ValidationError
from .xcore import XMatrix, build, to_dense


def xmatrix_to_dict(X: XMatrix, include_zero: bool = False) -> dict:
    entries = []
    for p, label in enumerate(X.labels):
        s, t, u = float(X.s[p]), float(X.t[p]), complex(X.u[p])
        if include_zero or s or t or u:
            entries.append({"index": label, "s": s, "t": t, "u": [u.real, u.imag]})
    return {"n": X.n, "role": X.role, "entries": entries}


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"complex value must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return complex(float(value))


def xmatrix_from_dict(data: dict, role: str | None = None) -> XMatrix:
    if not isinstance(data, dict) or "n" not in data:
        raise ValidationError("matrix JSON needs an integer 'n'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError(f"'n' must be an integer, got {n!r}")
    triples = {}
    for entry in data.get("entries", []):
        try:
            key = entry["index"]
        except (KeyError, TypeError):
            raise ValidationError(f"entry without 'index': {entry!r}") from None
        if key in triples:
            raise ValidationError(f"duplicate index {key}")
        triples[key] = (float(entry.get("s", 0.0)), float(entry.get("t", 0.0)),
                        _complex(entry.get("u", 0.0)))
    return build(n, triples, role or data.get("role", "generic"))


def dense_to_list(A: np.ndarray) -> list:
    """Row-major complex pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(A)]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _fmt(z: complex) -> str:
    if abs(z.imag) < 1e-15:
        return f"{z.real:.4g}"
    return f"{z.real:.3g}{z.imag:+.3g}i"


def staircase(X: XMatrix) -> str:
    """Dense layout with '.' for structural zeros, rows in lexicographic order."""
    A = to_dense(X)
    dim = A.shape[0]
    cells = [["." if A[r, c] == 0 else _fmt(complex(A[r, c])) for c in range(dim)]
             for r in range(dim)]
    width = max(len(c) for row in cells for c in row)
    labels = [format(r, f"0{X.n}b") for r in range(dim)]
    lines = [" " * (X.n + 1) + " ".join(lab.rjust(width) for lab in labels)]
    for lab, row in zip(labels, cells):
        lines.append(lab + " " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)
