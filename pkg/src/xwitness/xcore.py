"""X-shaped multi-qubit Hermitian matrices.

An X-shaped matrix on n qubits is stored as three arrays indexed by the
2**(n-1) indices that begin with 0 (``B0``), in lexicographic order:
``s[p]`` at dense entry ``(p, p)``, ``t[p]`` at ``(p̄, p̄)`` and ``u[p]`` at
``(p, p̄)``, where ``p̄`` is the bitwise complement.  The ``(p̄, p)`` entry is
always ``conj(u[p])``, so Hermiticity cannot be broken.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .exceptions import IndexNotInB0Error, ValidationError, XWitnessError
from .multiindex import (
    MAX_PARTIES,
    MultiIndex,
    PartySet,
    complement_position,
    parse_position,
    position_string,
)

TOL = 1e-9
STRUCT_TOL = 1e-12
ROLES = ("generic", "witness", "state")

IndexLike = Union[str, MultiIndex, int]


@dataclass(frozen=True)
class Verdict:
    """Boolean verdict with the raw margin and the indices that decided it.

    ``margin >= -tol`` is what ``holds`` records; callers can re-threshold
    ``margin`` themselves.
    """

    holds: bool
    margin: float
    where: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out = {"holds": self.holds, "margin": self.margin, "where": list(self.where)}
        out.update(self.extra)
        return out


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class XMatrix:
    """Immutable X-shaped Hermitian matrix on ``n`` qubits."""

    __slots__ = ("n", "s", "t", "u", "role")

    def __init__(self, n: int, s, t, u, role: str = "generic"):
        if not 1 <= n <= MAX_PARTIES:
            raise ValidationError(f"n must be in [1, {MAX_PARTIES}], got {n}")
        if role not in ROLES:
            raise ValidationError(f"unknown role {role!r}")
        m = 1 << (n - 1)
        s = _real_array(s, "s", m)
        t = _real_array(t, "t", m)
        u = np.array(u, dtype=complex).reshape(-1)
        if u.shape != (m,):
            raise ValidationError(f"u must have {m} entries, got {u.shape[0]}")
        if not np.all(np.isfinite(u)):
            raise ValidationError("u has non-finite entries")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "s", _readonly(s))
        object.__setattr__(self, "t", _readonly(t))
        object.__setattr__(self, "u", _readonly(u))
        object.__setattr__(self, "role", role)

    def __setattr__(self, name, value):
        raise AttributeError("XMatrix is immutable")

    @classmethod
    def zeros(cls, n: int, role: str = "generic") -> "XMatrix":
        m = 1 << (n - 1)
        return cls(n, np.zeros(m), np.zeros(m), np.zeros(m, complex), role)

    @classmethod
    def identity(cls, n: int, role: str = "generic") -> "XMatrix":
        m = 1 << (n - 1)
        return cls(n, np.ones(m), np.ones(m), np.zeros(m, complex), role)

    @property
    def size(self) -> int:
        return 1 << (self.n - 1)

    @property
    def labels(self) -> list[str]:
        return [position_string(self.n, p) for p in range(self.size)]

    def slot(self, index: IndexLike) -> int:
        return slot_of(self.n, index)

    def triple(self, index: IndexLike) -> tuple[float, float, complex]:
        p = self.slot(index)
        return float(self.s[p]), float(self.t[p]), complex(self.u[p])

    def with_role(self, role: str) -> "XMatrix":
        return XMatrix(self.n, self.s, self.t, self.u, role)

    def replace(self, s=None, t=None, u=None) -> "XMatrix":
        return XMatrix(self.n,
                       self.s if s is None else s,
                       self.t if t is None else t,
                       self.u if u is None else u,
                       self.role)

    def transpose(self) -> "XMatrix":
        return self.replace(u=np.conj(self.u))

    @property
    def trace(self) -> float:
        return float(self.s.sum() + self.t.sum())

    def _check_same(self, other: "XMatrix"):
        if not isinstance(other, XMatrix):
            raise TypeError(f"expected XMatrix, got {type(other).__name__}")
        if other.n != self.n:
            raise ValidationError(f"party counts differ: {self.n} vs {other.n}")

    def __add__(self, other: "XMatrix") -> "XMatrix":
        self._check_same(other)
        return self.replace(self.s + other.s, self.t + other.t, self.u + other.u)

    def __sub__(self, other: "XMatrix") -> "XMatrix":
        self._check_same(other)
        return self.replace(self.s - other.s, self.t - other.t, self.u - other.u)

    def __mul__(self, c: float) -> "XMatrix":
        c = float(c)
        return self.replace(self.s * c, self.t * c, self.u * c)

    __rmul__ = __mul__

    def max_abs_diff(self, other: "XMatrix") -> float:
        self._check_same(other)
        return float(max(np.max(np.abs(self.s - other.s)),
                         np.max(np.abs(self.t - other.t)),
                         np.max(np.abs(self.u - other.u))))

    def allclose(self, other: "XMatrix", atol: float = STRUCT_TOL) -> bool:
        return self.n == other.n and self.max_abs_diff(other) <= atol

    def __eq__(self, other) -> bool:
        if not isinstance(other, XMatrix):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.s, other.s)
                and np.array_equal(self.t, other.t) and np.array_equal(self.u, other.u))

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(
            f"{lab}:({self.s[p]:.6g},{self.t[p]:.6g},{self.u[p]:.6g})"
            for p, lab in enumerate(self.labels)
            if self.s[p] or self.t[p] or self.u[p])
        return f"XMatrix(n={self.n}, role={self.role!r}, {{{body}}})"


def _real_array(x, name: str, m: int) -> np.ndarray:
    a = np.asarray(x)
    if np.iscomplexobj(a):
        if np.any(np.abs(a.imag) > STRUCT_TOL):
            raise ValidationError(f"{name} must be real (diagonal of a Hermitian matrix)")
        a = a.real
    a = np.array(a, dtype=float).reshape(-1)
    if a.shape != (m,):
        raise ValidationError(f"{name} must have {m} entries, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def slot_of(n: int, index: IndexLike) -> int:
    """B0 slot (dense position) of an index given as string, MultiIndex or int."""
    if isinstance(index, MultiIndex):
        if index.n != n:
            raise ValidationError(f"index {index} is not on {n} parties")
        p = index.position
    elif isinstance(index, str):
        p = parse_position(index, n)
    else:
        p = int(index)
        if not 0 <= p < 1 << n:
            raise ValidationError(f"position {p} out of range")
    if p >= 1 << (n - 1):
        raise IndexNotInB0Error(f"index {position_string(n, p)} does not begin with 0")
    return p


def build(n: int, triples: Mapping[IndexLike, Sequence] | None = None,
          role: str = "generic") -> XMatrix:
    """Assemble an X matrix from ``{index: (s, t, u)}``; missing indices are zero."""
    m = 1 << (n - 1)
    s = np.zeros(m)
    t = np.zeros(m)
    u = np.zeros(m, complex)
    for key, value in (triples or {}).items():
        p = slot_of(n, key)
        sv, tv, uv = value
        for name, v in (("s", sv), ("t", tv)):
            if isinstance(v, complex) and abs(v.imag) > STRUCT_TOL:
                raise ValidationError(f"{name} at {position_string(n, p)} must be real")
        s[p] = np.real(sv)
        t[p] = np.real(tv)
        u[p] = complex(uv)
    return XMatrix(n, s, t, u, role)


def x_single(n: int, index: IndexLike, s: float, t: float, u: complex,
             role: str = "generic") -> XMatrix:
    """The matrix with one nonzero slot."""
    return build(n, {index: (s, t, u)}, role)


def block_min_eigenvalues(X: XMatrix) -> np.ndarray:
    """Smallest eigenvalue of each 2x2 block [[s, u], [conj(u), t]]."""
    half_sum = 0.5 * (X.s + X.t)
    radius = np.hypot(0.5 * (X.s - X.t), np.abs(X.u))
    return half_sum - radius


def is_positive_semidefinite(X: XMatrix, tol: float = TOL) -> Verdict:
    """PSD test by 2x2 blocks; margin is the smallest block eigenvalue.

    On failure ``where`` holds the first violating index.
    """
    lam = block_min_eigenvalues(X)
    margin = float(lam.min())
    bad = np.flatnonzero(lam < -tol)
    if bad.size:
        return Verdict(False, margin, (position_string(X.n, int(bad[0])),))
    return Verdict(True, margin, (position_string(X.n, int(np.argmin(lam))),))


def partial_transpose(X: XMatrix, subset: PartySet) -> XMatrix:
    """Partial transpose on the parties in ``subset``.

    Diagonals are untouched.  The entry ``u[p]`` at ``(p, p̄)`` moves to
    ``(j, j̄)`` with ``j = p`` flipped on ``subset``; when ``j`` begins with
    1 the stored value lands in slot ``j̄`` conjugated.
    """
    if subset.n != X.n:
        raise ValidationError(f"subset is on {subset.n} parties, matrix on {X.n}")
    m = X.size
    full = (1 << X.n) - 1
    src = np.arange(m)
    j = src ^ subset.dense_mask
    upper = j >= m
    target = np.where(upper, j ^ full, j)
    values = np.where(upper, np.conj(X.u), X.u)
    if np.unique(target).size != m:
        raise XWitnessError("partial transpose slot collision")  # cannot happen
    u = np.zeros(m, complex)
    u[target] = values
    return X.replace(u=u)


def pairing(A: XMatrix, B: XMatrix) -> float:
    """``Tr(A B^t)``: sum of a*s + b*t + 2 Re(z*u) over B0."""
    if A.n != B.n:
        raise ValidationError(f"party counts differ: {A.n} vs {B.n}")
    return float(np.dot(A.s, B.s) + np.dot(A.t, B.t) + 2.0 * np.sum((A.u * B.u).real))


@dataclass(frozen=True)
class BlockPair:
    """Two B0 slots ``i != j`` viewed as the 4x4 X-form matrix on ``(i, j, j̄, ī)``."""

    i: str
    j: str
    corner: tuple[float, float, complex]
    middle: tuple[float, float, complex]

    def matrix(self) -> np.ndarray:
        si, ti, ui = self.corner
        sj, tj, uj = self.middle
        return np.array([
            [si, 0, 0, ui],
            [0, sj, uj, 0],
            [0, np.conj(uj), tj, 0],
            [np.conj(ui), 0, 0, ti],
        ], dtype=complex)

    def as_two_qubit(self) -> XMatrix:
        """Corner at slot ``00``, middle at ``01``; dense form equals :meth:`matrix`."""
        return build(2, {"00": self.corner, "01": self.middle})


def block_pair(X: XMatrix, i: IndexLike, j: IndexLike) -> BlockPair:
    pi, pj = X.slot(i), X.slot(j)
    if pi == pj:
        raise ValidationError("block_pair needs two different indices")
    return BlockPair(position_string(X.n, pi), position_string(X.n, pj),
                     X.triple(pi), X.triple(pj))


def to_dense(X: XMatrix) -> np.ndarray:
    dim = 1 << X.n
    A = np.zeros((dim, dim), complex)
    p = np.arange(X.size)
    q = complement_position(X.n, p)
    A[p, p] = X.s
    A[q, q] = X.t
    A[p, q] = X.u
    A[q, p] = np.conj(X.u)
    return A


def from_dense(A: np.ndarray, role: str = "generic", atol: float = STRUCT_TOL) -> XMatrix:
    """Read the X part of a dense Hermitian matrix; fails if anything else is nonzero."""
    A = np.asarray(A, dtype=complex)
    dim = A.shape[0]
    n = dim.bit_length() - 1
    if A.shape != (dim, dim) or dim != 1 << n or n < 1:
        raise ValidationError(f"expected a 2^n x 2^n matrix, got {A.shape}")
    if np.max(np.abs(A - A.conj().T)) > atol:
        raise ValidationError("matrix is not Hermitian")
    p = np.arange(dim >> 1)
    q = complement_position(n, p)
    mask = np.zeros((dim, dim), bool)
    mask[p, p] = mask[q, q] = mask[p, q] = mask[q, p] = True
    if np.any(np.abs(A[~mask]) > atol):
        raise ValidationError("matrix is not X-shaped")
    return XMatrix(n, A[p, p].real, A[q, q].real, A[p, q], role)
