"""Conversion between X matrices and flat feature rows.

A row for ``n`` qubits has ``4 * 2**(n-1)`` columns laid out as
``[s..., t..., Re u..., Im u...]`` over B0 in lexicographic order.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import ValidationError
from .xcore import XMatrix


def n_qubits_from_features(n_features: int) -> int:
    m = n_features // 4
    n = m.bit_length()
    if n_features % 4 or m != 1 << (n - 1):
        raise ValidationError(f"{n_features} columns is not 4 * 2**(n-1) for any n")
    return n


def pack(matrices: Iterable[XMatrix]) -> np.ndarray:
    rows = [np.concatenate([X.s, X.t, X.u.real, X.u.imag]) for X in matrices]
    if not rows:
        raise ValidationError("no matrices to pack")
    if len({r.size for r in rows}) != 1:
        raise ValidationError("matrices have different party counts")
    return np.vstack(rows)


def unpack_row(row: np.ndarray, n: int, role: str = "generic") -> XMatrix:
    m = 1 << (n - 1)
    return XMatrix(n, row[:m], row[m:2 * m], row[2 * m:3 * m] + 1j * row[3 * m:], role)


def check_xmatrices(X, role: str = "generic") -> list[XMatrix]:
    """Accept a list of :class:`XMatrix` or a 2-D packed array; return matrices."""
    if isinstance(X, XMatrix):
        return [X]
    if isinstance(X, (list, tuple)) and X and all(isinstance(x, XMatrix) for x in X):
        if len({x.n for x in X}) != 1:
            raise ValidationError("matrices have different party counts")
        return list(X)
    arr = check_array(X, dtype=np.float64, ensure_all_finite=True)
    n = n_qubits_from_features(arr.shape[1])
    return [unpack_row(row, n, role) for row in arr]
