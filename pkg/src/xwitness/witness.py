"""Closed-form witness classification and certificates for X-shaped matrices.

Every test here reads only the per-slot quantities ``sqrt(s t)`` and ``|u|``:

* fully bi-block positive (pairs bi-separable states nonnegatively) iff
  ``sqrt(s_i t_i) + sqrt(s_j t_j) >= |u_i| + |u_j|`` for all ``i != j``;
* decomposable iff ``sum sqrt(s t) >= sum |u|``;
* optimal iff one slot carries ``|u| = r`` on a zero diagonal and every other
  slot has ``sqrt(s t) = r`` and ``u = 0``.

The certificate builders return explicit PSD pieces that recompose to the
input through partial transposes, so the claims can be checked without
trusting this module.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .exceptions import (
    InvalidBipartitionError,
    NotDecomposableError,
    NotFullyBiBlockPositiveError,
    NotOptimalError,
    PreconditionError,
    ValidationError,
)
from .multiindex import PartySet, enumerate_bipartitions, position_string
from .xcore import (
    TOL,
    IndexLike,
    Verdict,
    XMatrix,
    block_pair,
    is_positive_semidefinite,
    partial_transpose,
    slot_of,
)

EPSILON_LADDER = (1e-4, 1e-6, 1e-8)


def _checked_diagonals(W: XMatrix, tol: float = TOL) -> tuple[np.ndarray, np.ndarray]:
    for name, arr in (("s", W.s), ("t", W.t)):
        bad = np.flatnonzero(arr < -tol)
        if bad.size:
            label = position_string(W.n, int(bad[0]))
            raise PreconditionError(
                f"negative diagonal {name}={arr[bad[0]]:.3g} at index {label}", index=label)
    return np.clip(W.s, 0.0, None), np.clip(W.t, 0.0, None)


def diagonal_geomean(W: XMatrix, tol: float = TOL) -> np.ndarray:
    """``sqrt(s_i t_i)`` per slot, after the nonnegative-diagonal check."""
    s, t = _checked_diagonals(W, tol)
    return np.sqrt(s * t)


def is_fully_bi_block_positive(W: XMatrix, tol: float = TOL) -> Verdict:
    """Pairwise test; ``where`` is the worst pair (ties: lexicographically smallest)."""
    slack = diagonal_geomean(W, tol) - np.abs(W.u)
    if W.size < 2:
        return Verdict(True, float("inf"))
    order = np.argsort(slack, kind="stable")
    a, b = sorted(int(x) for x in order[:2])
    margin = float(slack[a] + slack[b])
    return Verdict(margin >= -tol, margin,
                   (position_string(W.n, a), position_string(W.n, b)))


def is_genuine_witness(W: XMatrix, tol: float = TOL) -> Verdict:
    """Non-positive and fully bi-block positive; always false for one qubit,
    which has no bipartition to witness."""
    bbp = is_fully_bi_block_positive(W, tol)
    psd = is_positive_semidefinite(W, tol)
    return Verdict(W.n >= 2 and bbp.holds and not psd.holds, bbp.margin, bbp.where,
                   {"psd_margin": psd.margin})


def is_decomposable(W: XMatrix, tol: float = TOL) -> Verdict:
    margin = float(diagonal_geomean(W, tol).sum() - np.abs(W.u).sum())
    return Verdict(margin >= -tol, margin)


def _subset_from_xor(n: int, xor: int) -> PartySet:
    return PartySet.of(n, [k for k in range(1, n + 1) if xor >> (n - k) & 1])


@dataclass
class DecompositionCertificate:
    """``W = sum_k partial_transpose(Q_k, S_k)`` with every ``Q_k`` PSD.

    ``epsilon > 0`` means the pieces decompose ``W + epsilon I`` instead;
    ``residual`` is then the honest distance to ``W``.
    """

    n: int
    parts: list[tuple[PartySet, XMatrix]]
    residual: float = 0.0
    epsilon: float = 0.0

    def recompose(self) -> XMatrix:
        total = XMatrix.zeros(self.n)
        for subset, Q in self.parts:
            total = total + partial_transpose(Q, subset)
        return total

    def verify(self, W: XMatrix, atol: float = 1e-10, tol: float = TOL) -> bool:
        return (all(is_positive_semidefinite(Q, tol).holds for _, Q in self.parts)
                and self.recompose().max_abs_diff(W) <= atol)

    def to_dict(self) -> dict:
        from .io import xmatrix_to_dict
        return {
            "parts": [{"subset": S.to_list(), "Q": xmatrix_to_dict(Q)} for S, Q in self.parts],
            "residual": self.residual,
            "epsilon": self.epsilon,
        }


def decompose(W: XMatrix, tol: float = TOL) -> DecompositionCertificate:
    """Split a decomposable ``W`` into partial transposes of PSD X matrices.

    Slots with ``sqrt(s t) >= |u|`` donate their diagonal surplus, slots with
    ``sqrt(s t) < |u|`` carry an anti-diagonal excess; each (surplus, excess)
    pair becomes one PSD piece moved into place by the partial transpose on
    the parties where the two slots differ.  Pieces sharing a subset are
    summed.
    """
    verdict = is_decomposable(W, tol)
    if not verdict.holds:
        raise NotDecomposableError(
            f"not decomposable: sum sqrt(st) - sum |u| = {verdict.margin:.6g}", verdict.margin)
    cert = _decompose_exact(W, tol)
    if cert is not None:
        return cert
    # every surplus slot has p*q = 0: regularize and report the distance
    best = None
    for eps in EPSILON_LADDER:
        cert = _decompose_exact(W + XMatrix.identity(W.n) * eps, tol)
        if cert is None:
            break
        best, best_eps = cert, eps
    if best is None:
        raise NotDecomposableError("degenerate even after regularization", verdict.margin)
    cert = best
    cert.epsilon = best_eps
    cert.residual = cert.recompose().max_abs_diff(W)
    return cert


def _decompose_exact(W: XMatrix, tol: float) -> DecompositionCertificate | None:
    n = W.n
    g = diagonal_geomean(W, tol)
    s, t = _checked_diagonals(W, tol)
    a = np.abs(W.u)
    plus = g >= a
    empty = PartySet.empty(n)
    if plus.all():
        return DecompositionCertificate(n, [(empty, W)], 0.0)

    ratio = np.divide(a, g, out=np.zeros_like(a), where=plus & (g > 0))
    phase = np.exp(1j * np.angle(W.u))
    wp_s = np.where(plus, ratio * s, s)
    wp_t = np.where(plus, ratio * t, t)
    wp_u = np.where(plus, W.u, g * phase)
    p = np.where(plus, (1.0 - ratio) * s, 0.0)
    q = np.where(plus, (1.0 - ratio) * t, 0.0)
    v = np.where(plus, 0.0, (a - g) * phase)

    root_pq = np.sqrt(p * q)
    total_pq = root_pq[plus].sum()
    total_v = np.abs(v[~plus]).sum()
    if total_pq <= 0.0:
        return None
    c = root_pq / total_pq
    d = np.abs(v) / total_v

    pieces: dict[int, list[np.ndarray]] = {}
    m = W.size
    for i in np.flatnonzero(plus):
        for j in np.flatnonzero(~plus):
            xor = int(i) ^ int(j)
            if xor not in pieces:
                pieces[xor] = [np.zeros(m), np.zeros(m), np.zeros(m, complex)]
            qs, qt, qu = pieces[xor]
            qs[i] += d[j] * p[i]
            qt[i] += d[j] * q[i]
            qu[i] += c[i] * v[j]

    parts = []
    w_plus = XMatrix(n, wp_s, wp_t, wp_u, W.role)
    if np.any(wp_s) or np.any(wp_t) or np.any(wp_u):
        parts.append((empty, w_plus))
    for xor in sorted(pieces):
        qs, qt, qu = pieces[xor]
        parts.append((_subset_from_xor(n, xor), XMatrix(n, qs, qt, qu)))
    cert = DecompositionCertificate(n, parts)
    cert.residual = cert.recompose().max_abs_diff(W)
    return cert


@dataclass
class BipartitionSplit:
    """``target = P + partial_transpose(Q, subset)`` with ``P`` and ``Q`` PSD."""

    subset: PartySet
    P: XMatrix
    Q: XMatrix
    target: XMatrix = field(repr=False)

    @property
    def residual(self) -> float:
        return (self.P + partial_transpose(self.Q, self.subset)).max_abs_diff(self.target)

    def to_dict(self) -> dict:
        from .io import xmatrix_to_dict
        return {"subset": self.subset.to_list(), "P": xmatrix_to_dict(self.P),
                "Q": xmatrix_to_dict(self.Q), "residual": self.residual}


def decompose_bipartition(W: XMatrix, subset: PartySet,
                          tol: float = TOL) -> tuple[XMatrix, XMatrix]:
    """PSD ``P, Q`` with ``W = P + partial_transpose(Q, subset)``.

    Requires ``W`` fully bi-block positive and ``subset`` nontrivial.
    """
    return _split(W, subset, tol)


def split_bipartition(W: XMatrix, subset: PartySet, tol: float = TOL) -> BipartitionSplit:
    P, Q = _split(W, subset, tol)
    return BipartitionSplit(subset, P, Q, W)


def _split(W: XMatrix, subset: PartySet, tol: float) -> tuple[XMatrix, XMatrix]:
    if subset.n != W.n:
        raise InvalidBipartitionError(f"subset on {subset.n} parties, matrix on {W.n}")
    if subset.is_trivial:
        raise InvalidBipartitionError(f"subset {subset} is trivial")
    bbp = is_fully_bi_block_positive(W, tol)
    if not bbp.holds:
        raise NotFullyBiBlockPositiveError(
            f"pair {bbp.where} violates the pair inequality by {bbp.margin:.6g}",
            bbp.margin, bbp.where)
    if 1 in subset:
        # Q^{T(S)} = (Q^t)^{T(S^c)}
        P, Q = _split(W, subset.complement(), tol)
        return P, Q.transpose()
    if is_positive_semidefinite(W, tol).holds:
        return W, XMatrix.zeros(W.n, W.role)

    slack = diagonal_geomean(W, tol) - np.abs(W.u)
    i0 = int(np.argmin(slack))
    j = i0 ^ subset.dense_mask
    pair = block_pair(W, i0, j)
    local = decompose(pair.as_two_qubit(), tol)
    m = W.size
    p0 = [np.zeros(m), np.zeros(m), np.zeros(m, complex)]
    qq = [np.zeros(m), np.zeros(m), np.zeros(m, complex)]
    for sub, part in local.parts:
        if sub.mask == 0:
            target = p0
        elif sub.members == (2,):
            target = qq
        else:  # pragma: no cover - two slots in B0 can only differ on party 2
            raise AssertionError(f"unexpected subset {sub} in two-qubit split")
        for slot_local, slot_global in ((0, i0), (1, j)):
            target[0][slot_global] += part.s[slot_local]
            target[1][slot_global] += part.t[slot_local]
            target[2][slot_global] += part.u[slot_local]
    ds, dt, du = np.zeros(m), np.zeros(m), np.zeros(m, complex)
    for slot in (i0, j):
        ds[slot], dt[slot], du[slot] = W.s[slot], W.t[slot], W.u[slot]
    D = XMatrix(W.n, ds, dt, du)
    P = W - D + XMatrix(W.n, *p0)
    Q = XMatrix(W.n, *qq)
    return P, Q


def is_optimal_gew(W: XMatrix, tol: float = TOL) -> Verdict:
    """Closed-form optimality test, relative tolerance ``tol``.

    On success ``where == (i0,)`` and ``extra["r"]`` is ``|u_i0|``.
    """
    g = diagonal_geomean(W, tol)
    a = np.abs(W.u)
    i0 = int(np.argmax(a))
    r = float(a[i0])
    label = position_string(W.n, i0)
    if r <= 0.0:
        return Verdict(False, -1.0, (), {"r": 0.0})
    others = np.ones(W.size, bool)
    others[i0] = False
    deviations = [max(W.s[i0], 0.0) / r, max(W.t[i0], 0.0) / r]
    if others.any():
        deviations.append(float(np.max(np.abs(g[others] - r))) / r)
        deviations.append(float(np.max(a[others])) / r)
    worst = float(max(deviations))
    return Verdict(worst <= tol, -worst, (label,), {"r": r})


def construct_optimal(n: int, i0: IndexLike | None = None, theta: float = np.pi,
                      scales: float | Mapping[IndexLike, float] | Sequence[float] | None = None,
                      r: float = 1.0) -> XMatrix:
    """Optimal witness: zero diagonal and ``u = r e^{i theta}`` at ``i0``,
    ``s_i = scales[i]``, ``t_i = r**2 / s_i`` and ``u_i = 0`` elsewhere.

    ``scales`` may be one number, a mapping from index to scale, or a
    sequence over all B0 slots (the ``i0`` entry is ignored).
    """
    m = 1 << (n - 1)
    p0 = 0 if i0 is None else slot_of(n, i0)
    if not (np.isfinite(r) and r > 0):
        raise ValidationError(f"r must be positive, got {r}")
    sc = np.ones(m)
    if scales is None:
        pass
    elif isinstance(scales, Mapping):
        for key, val in scales.items():
            sc[slot_of(n, key)] = float(val)
    elif np.ndim(scales) == 0:
        sc[:] = float(scales)
    else:
        arr = np.asarray(scales, dtype=float).reshape(-1)
        if arr.size == m:
            sc = arr.copy()
        elif arr.size == m - 1:
            sc[np.arange(m) != p0] = arr
        else:
            raise ValidationError(f"expected {m - 1} or {m} scales, got {arr.size}")
    sc[p0] = 1.0
    if not np.all(np.isfinite(sc)) or np.any(sc <= 0):
        bad = int(np.flatnonzero(~(sc > 0))[0]) if np.any(~(sc > 0)) else 0
        raise ValidationError(f"scale at {position_string(n, bad)} must be positive")
    s = sc.copy()
    t = r * r / sc
    s[p0] = t[p0] = 0.0
    u = np.zeros(m, complex)
    phase = cmath.exp(1j * theta)
    # exact at multiples of pi/2
    phase = complex(*(0.0 if abs(x) < 1e-15 else x for x in (phase.real, phase.imag)))
    u[p0] = r * phase
    return XMatrix(n, s, t, u, "witness")


@dataclass(frozen=True)
class SpanningVector:
    subset: PartySet
    complement: PartySet
    alpha: complex
    vector: np.ndarray = field(compare=False)


DEFAULT_ALPHAS = (1.0, -1.0, 1j, 2.0)


def spanning_family(W: XMatrix, alphas: Sequence[complex] = DEFAULT_ALPHAS,
                    tol: float = TOL) -> list[SpanningVector]:
    """Bi-product vectors ``z`` with ``<conj z| W |conj z> = 0`` spanning the space.

    Works on the copy of ``W`` relabeled by local bit flips so that the
    distinguished slot is ``0...0`` and scaled to ``r = 1``; the flip is
    undone on every returned vector.
    """
    verdict = is_optimal_gew(W, tol)
    if not verdict.holds:
        raise NotOptimalError("spanning family needs an optimal witness")
    n = W.n
    p0 = slot_of(n, verdict.where[0])
    r = verdict.extra["r"]
    full = (1 << n) - 1
    u = W.u[p0] / r
    diag = np.empty(1 << n)
    idx = np.arange(W.size)
    diag[idx] = W.s / r
    diag[full ^ idx] = W.t / r

    family = []
    for S, T in enumerate_bipartitions(n):
        x_ones = S.dense_mask  # 1_S ◇ 0_T
        y_ones = T.dense_mask  # 0_S ◇ 1_T
        s_val = diag[y_ones ^ p0]
        for alpha in alphas:
            alpha = complex(alpha)
            z = np.zeros(1 << n, complex)
            z[0 ^ p0] = s_val * np.conj(u)
            z[y_ones ^ p0] = -np.conj(alpha)
            z[x_ones ^ p0] = s_val * np.conj(u) * alpha
            z[full ^ p0] = -abs(alpha) ** 2
            family.append(SpanningVector(S, T, alpha, z))
    return family


@dataclass
class ClassificationReport:
    is_psd: bool
    is_fully_bi_block_positive: bool
    is_genuine_witness: bool
    is_decomposable: bool
    is_optimal: bool
    violations: list[tuple[str, tuple[str, ...], float]]
    margins: dict[str, float]
    optimal_index: str | None = None
    optimal_r: float | None = None

    def to_dict(self) -> dict:
        return {
            "psd": self.is_psd,
            "fully_bi_block_positive": self.is_fully_bi_block_positive,
            "gew": self.is_genuine_witness,
            "decomposable": self.is_decomposable,
            "optimal": self.is_optimal,
            "optimal_index": self.optimal_index,
            "optimal_r": self.optimal_r,
            "margins": self.margins,
            "violations": [{"inequality": name, "indices": list(idx), "margin": m}
                           for name, idx, m in self.violations],
        }


def classify_witness(W: XMatrix, tol: float = TOL) -> ClassificationReport:
    psd = is_positive_semidefinite(W, tol)
    bbp = is_fully_bi_block_positive(W, tol)
    dec = is_decomposable(W, tol)
    gew = W.n >= 2 and bbp.holds and not psd.holds
    opt = is_optimal_gew(W, tol)
    optimal = gew and opt.holds
    violations = []
    if not psd.holds:
        violations.append(("psd", psd.where, psd.margin))
    if not bbp.holds:
        violations.append(("pair", bbp.where, bbp.margin))
    if not dec.holds:
        violations.append(("decomposability", (), dec.margin))
    return ClassificationReport(
        is_psd=psd.holds,
        is_fully_bi_block_positive=bbp.holds,
        is_genuine_witness=gew,
        is_decomposable=dec.holds,
        is_optimal=optimal,
        violations=violations,
        margins={"psd": psd.margin, "pair": bbp.margin, "decomposability": dec.margin,
                 "optimality": opt.margin},
        optimal_index=opt.where[0] if optimal else None,
        optimal_r=opt.extra["r"] if optimal else None,
    )
