"""Separability ladder for X-shaped multi-qubit states.

A state here is an :class:`~xwitness.xcore.XMatrix` with role ``"state"``;
its triples are read as ``(a, b, z)``.  Writing ``g_i = sqrt(a_i b_i)``:

* fully bi-separable  <=>  PPT            <=>  min_i g_i >= max_j |z_j|
* S-T bi-separable    <=>  S-T PPT        <=>  g_{flip_S(j)} >= |z_j| for all j
* bi-separable        <=>  PPT mixture    <=>  sum_{j != i} g_j >= |z_i| for all i

Full separability is not decided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidBipartitionError, PreconditionError, RegularizationRequiredError
from .multiindex import PartySet, enumerate_bipartitions, position_string
from .xcore import TOL, IndexLike, Verdict, XMatrix, is_positive_semidefinite


def check_state(rho: XMatrix, normalized: bool = True, tol: float = TOL) -> XMatrix:
    """Raise unless ``rho`` is PSD (and trace one when ``normalized``)."""
    psd = is_positive_semidefinite(rho, tol)
    if not psd.holds:
        raise PreconditionError(f"not positive semidefinite at index {psd.where[0]}",
                                index=psd.where[0])
    if normalized and abs(rho.trace - 1.0) > tol:
        raise PreconditionError(f"trace is {rho.trace:.12g}, expected 1")
    return rho


def _geomean(rho: XMatrix) -> np.ndarray:
    return np.sqrt(np.clip(rho.s, 0.0, None) * np.clip(rho.t, 0.0, None))


def is_bi_separable(rho: XMatrix, normalized: bool = True, tol: float = TOL) -> Verdict:
    """Worst index ``i`` of ``sum_{j != i} g_j - |z_i|``."""
    check_state(rho, normalized, tol)
    g = _geomean(rho)
    slack = g.sum() - g - np.abs(rho.u)
    i = int(np.argmin(slack))
    margin = float(slack[i])
    return Verdict(margin >= -tol, margin, (position_string(rho.n, i),))


def is_st_biseparable(rho: XMatrix, subset: PartySet, normalized: bool = True,
                      tol: float = TOL) -> Verdict:
    """Bi-separability across ``subset | rest``; ``subset`` must not contain party 1."""
    if subset.n != rho.n or subset.is_trivial:
        raise InvalidBipartitionError(f"{subset} is not a nontrivial subset of [{rho.n}]")
    if 1 in subset:
        raise InvalidBipartitionError("pass the side without party 1 (use the complement)")
    check_state(rho, normalized, tol)
    g = _geomean(rho)
    j = np.arange(rho.size)
    i = j ^ subset.dense_mask
    slack = g[i] - np.abs(rho.u)
    worst = int(np.argmin(slack))
    margin = float(slack[worst])
    return Verdict(margin >= -tol, margin,
                   (position_string(rho.n, int(i[worst])), position_string(rho.n, worst)))


def is_fully_biseparable_ppt(rho: XMatrix, normalized: bool = True, tol: float = TOL) -> Verdict:
    check_state(rho, normalized, tol)
    g = _geomean(rho)
    a = np.abs(rho.u)
    i, j = int(np.argmin(g)), int(np.argmax(a))
    margin = float(g[i] - a[j])
    return Verdict(margin >= -tol, margin,
                   (position_string(rho.n, i), position_string(rho.n, j)))


def regularize(rho: XMatrix, epsilon: float) -> XMatrix:
    """``rho + epsilon I`` (unnormalized); keeps PPT-mixture membership."""
    return (rho + XMatrix.identity(rho.n) * epsilon).with_role("state")


def detection_witness(rho: XMatrix, index: IndexLike) -> XMatrix:
    """Witness whose pairing with ``rho`` is ``2 (sum_{j != i} g_j - |z_i|)``.

    Needs ``a_j, b_j > 0`` for every ``j != i``; otherwise mix with
    ``epsilon I`` first (:func:`regularize`).
    """
    p = rho.slot(index)
    others = np.arange(rho.size) != p
    zero = others & ((rho.s <= 0) | (rho.t <= 0))
    if zero.any():
        label = position_string(rho.n, int(np.flatnonzero(zero)[0]))
        raise RegularizationRequiredError(
            f"zero diagonal at {label}; regularize with epsilon*I first", index=label)
    s = np.zeros(rho.size)
    t = np.zeros(rho.size)
    s[others] = np.sqrt(rho.t[others] / rho.s[others])
    t[others] = np.sqrt(rho.s[others] / rho.t[others])
    u = np.zeros(rho.size, complex)
    z = complex(rho.u[p])
    theta = np.angle(z) if z != 0 else 0.0
    u[p] = -np.exp(-1j * theta)
    return XMatrix(rho.n, s, t, u, "witness")


@dataclass
class StateReport:
    fully_bi_separable: Verdict
    bipartitions: list[tuple[PartySet, Verdict]]
    bi_separable: Verdict
    fully_separable: str = "undecided"

    @property
    def genuinely_entangled(self) -> bool:
        return not self.bi_separable.holds

    @property
    def label(self) -> str:
        if self.fully_bi_separable.holds:
            return "fully-bi-separable"
        if self.bi_separable.holds:
            return "bi-separable"
        return "genuinely-entangled"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "fully_bi_separable": self.fully_bi_separable.to_dict(),
            "ppt": self.fully_bi_separable.holds,
            "bipartitions": [{"subset": S.to_list(), **v.to_dict()} for S, v in self.bipartitions],
            "bi_separable": self.bi_separable.to_dict(),
            "ppt_mixture": self.bi_separable.holds,
            "genuinely_entangled": self.genuinely_entangled,
            "fully_separable": self.fully_separable,
        }


def classify_state(rho: XMatrix, normalized: bool = True, tol: float = TOL) -> StateReport:
    check_state(rho, normalized, tol)
    rungs = []
    if rho.n >= 2:
        rungs = [(S, is_st_biseparable(rho, S, normalized, tol))
                 for S, _ in enumerate_bipartitions(rho.n)]
    return StateReport(
        fully_bi_separable=is_fully_biseparable_ppt(rho, normalized, tol),
        bipartitions=rungs,
        bi_separable=is_bi_separable(rho, normalized, tol),
    )


def ghz(n: int, phase: float = 0.0) -> XMatrix:
    """``(|0...0> + e^{i phase} |1...1>) / sqrt(2)`` as an X-shaped state."""
    m = 1 << (n - 1)
    s = np.zeros(m)
    t = np.zeros(m)
    u = np.zeros(m, complex)
    s[0] = t[0] = 0.5
    u[0] = 0.5 * np.exp(-1j * phase)
    return XMatrix(n, s, t, u, "state")


def maximally_mixed(n: int) -> XMatrix:
    return XMatrix.identity(n, "state") * (1.0 / (1 << n))
