"""Brute-force numerical checks that do not use any closed-form criterion.

Everything here works on dense ``2**n x 2**n`` arrays: a Jacobi
eigensolver, tensor-reshaping partial transposes, alternating minimization
of ``<z|W|z>`` over bi-product unit vectors, and sampling of bi-separable
states.  Randomness always comes from ``numpy.random.PCG64`` keyed by
``(seed, stream)`` so runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._jacobi import jacobi_hermitian, min_eigvecs
from .exceptions import ConvergenceError, InvalidBipartitionError, ValidationError
from .multiindex import PartySet, enumerate_bipartitions
from .xcore import XMatrix, to_dense

MAX_DIM = 1024
HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100
BLOCK_POSITIVE_THRESHOLD = -1e-6


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([int(seed), int(stream)]))


def _as_dense(A) -> np.ndarray:
    if isinstance(A, XMatrix):
        return to_dense(A)
    return np.asarray(A, dtype=complex)


def _party_count(A: np.ndarray) -> int:
    dim = A.shape[0]
    n = dim.bit_length() - 1
    if A.ndim != 2 or A.shape != (dim, dim) or dim != 1 << n or n < 1:
        raise ValidationError(f"expected a 2^n x 2^n matrix, got shape {A.shape}")
    return n


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])


def eigen_hermitian(A, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Full spectrum of a dense Hermitian matrix by cyclic Jacobi rotations."""
    A = _as_dense(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_DIM:
        raise ValidationError(f"dimension {A.shape[0]} exceeds {MAX_DIM}")
    if A.size and np.max(np.abs(A - A.conj().T)) > HERMITIAN_TOL:
        raise ValidationError("matrix is not Hermitian")
    A = np.ascontiguousarray(0.5 * (A + A.conj().T))
    w, V, sweeps, converged = jacobi_hermitian(A, tol, max_sweeps)
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return Spectrum(w, V, int(sweeps))


def min_eigenvalue(A) -> float:
    return eigen_hermitian(A).min


def dense_partial_transpose(A, subset: PartySet) -> np.ndarray:
    """Transpose the tensor factors of the parties in ``subset``."""
    A = _as_dense(A)
    n = _party_count(A)
    if subset.n != n:
        raise ValidationError(f"subset on {subset.n} parties, matrix on {n}")
    T = A.reshape((2,) * (2 * n))
    for k in subset.members:
        T = np.swapaxes(T, k - 1, n + k - 1)
    return T.reshape(A.shape).copy()


def dense_pairing(rho, W) -> float:
    """``Tr(rho W^t)``."""
    return float(np.sum(_as_dense(rho) * _as_dense(W)).real)


def _split_perm(S: PartySet, T: PartySet) -> list[int]:
    return [k - 1 for k in S.members] + [k - 1 for k in T.members]


def assemble_product(S: PartySet, T: PartySet, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Full vector of ``x (on S) ⊗ y (on T)`` in lexicographic party order."""
    n = S.n
    perm = _split_perm(S, T)
    z = np.kron(x, y).reshape((2,) * n)
    return z.transpose(np.argsort(perm)).reshape(-1)


@dataclass
class BiProductVector:
    subset: PartySet
    complement: PartySet
    factor_s: np.ndarray
    factor_t: np.ndarray
    assembled: np.ndarray = field(init=False)

    def __post_init__(self):
        self.assembled = assemble_product(self.subset, self.complement,
                                          self.factor_s, self.factor_t)


@dataclass
class BiProductMinimum:
    value: float
    argmin: BiProductVector
    iterations: int
    restarts: int
    seed: int
    stream: int

    def to_dict(self) -> dict:
        return {
            "subset": self.argmin.subset.to_list(),
            "complement": self.argmin.complement.to_list(),
            "value": self.value,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "seed": self.seed,
            "stream": self.stream,
            "argmin": [[float(z.real), float(z.imag)] for z in self.argmin.assembled],
        }


def _unit_rows(rng: np.random.Generator, k: int, d: int) -> np.ndarray:
    v = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def min_biproduct_value(W, subset: PartySet, restarts: int = 32, iters: int = 100,
                        seed: int = 0, stream: int = 0) -> BiProductMinimum:
    """Upper bound on ``min <z|W|z>`` over unit product vectors across ``subset | rest``.

    Alternates between the two factors, each time taking the smallest
    eigenvector of the contracted form.  A value below ``-1e-6`` refutes
    block positivity with ``argmin`` as the counterexample.
    """
    if restarts < 8:
        raise ValidationError("need at least 8 restarts")
    if iters < 1:
        raise ValidationError("need at least one iteration")
    A = _as_dense(W)
    n = _party_count(A)
    if subset.n != n or subset.is_trivial:
        raise InvalidBipartitionError(f"{subset} is not a nontrivial subset of [{n}]")
    S, T = subset, subset.complement()
    perm = _split_perm(S, T)
    dS, dT = 1 << len(S), 1 << len(T)
    Wt = A.reshape((2,) * (2 * n)).transpose(perm + [n + p for p in perm])
    Wt = np.ascontiguousarray(Wt.reshape(dS, dT, dS, dT))
    scale = max(1.0, float(np.max(np.abs(A))) * A.shape[0])

    rng = rng_for(seed, stream)
    y = _unit_rows(rng, restarts, dT)
    prev = np.full(restarts, np.inf)
    it = 0
    for it in range(1, iters + 1):
        Mx = np.einsum("rb,abcd,rd->rac", y.conj(), Wt, y)
        Mx = 0.5 * (Mx + Mx.conj().transpose(0, 2, 1))
        _, x, _ = min_eigvecs(np.ascontiguousarray(Mx), JACOBI_TOL, MAX_SWEEPS)
        My = np.einsum("ra,abcd,rc->rbd", x.conj(), Wt, x)
        My = 0.5 * (My + My.conj().transpose(0, 2, 1))
        vals, y, _ = min_eigvecs(np.ascontiguousarray(My), JACOBI_TOL, MAX_SWEEPS)
        if np.max(np.abs(vals - prev)) <= 1e-14 * scale:
            break
        prev = vals
    best = int(np.argmin(vals))
    vec = BiProductVector(S, T, x[best], y[best])
    z = vec.assembled
    value = float(np.vdot(z, A @ z).real)
    return BiProductMinimum(value, vec, it, restarts, seed, stream)


def random_biseparable_state(n: int, mixture_size: int, seed: int,
                             stream: int = 0) -> np.ndarray:
    """Mixture of pure bi-product projectors with random splits and Dirichlet weights."""
    if mixture_size < 1:
        raise ValidationError("mixture_size must be >= 1")
    rng = rng_for(seed, stream)
    splits = enumerate_bipartitions(n)
    weights = rng.dirichlet(np.ones(mixture_size))
    rho = np.zeros((1 << n, 1 << n), complex)
    for w in weights:
        S, T = splits[rng.integers(len(splits))]
        x = _unit_rows(rng, 1, 1 << len(S))[0]
        y = _unit_rows(rng, 1, 1 << len(T))[0]
        z = assemble_product(S, T, x, y)
        rho += w * np.outer(z, z.conj())
    return 0.5 * (rho + rho.conj().T)


@dataclass
class OracleReport:
    minima: list[BiProductMinimum]
    block_positive: bool
    threshold: float
    closed_form: bool | None = None
    closed_form_margin: float | None = None

    @property
    def min_value(self) -> float:
        return min(m.value for m in self.minima)

    @property
    def agrees(self) -> bool | None:
        if self.closed_form is None:
            return None
        return self.closed_form == self.block_positive

    def to_dict(self) -> dict:
        return {
            "block_positive": self.block_positive,
            "threshold": self.threshold,
            "min_value": self.min_value,
            "closed_form": self.closed_form,
            "closed_form_margin": self.closed_form_margin,
            "agrees": self.agrees,
            "bipartitions": [m.to_dict() for m in self.minima],
        }


def verify_witness_numeric(W, restarts: int = 32, iters: int = 100, seed: int = 0,
                           threshold: float = BLOCK_POSITIVE_THRESHOLD) -> OracleReport:
    """Minimize over bi-product vectors for every split with party 1 on one side.

    The other orientation gives the transposed map, so it is not repeated.
    When ``W`` is an :class:`XMatrix` the closed-form pair verdict is
    attached for comparison.
    """
    A = _as_dense(W)
    n = _party_count(A)
    if n > 5:
        raise ValidationError(f"numeric verification is limited to n <= 5, got {n}")
    minima = [min_biproduct_value(A, S, restarts, iters, seed, stream)
              for stream, (S, _) in enumerate(enumerate_bipartitions(n))]
    report = OracleReport(minima, all(m.value >= threshold for m in minima), threshold)
    if isinstance(W, XMatrix):
        from .witness import is_fully_bi_block_positive
        verdict = is_fully_bi_block_positive(W)
        report.closed_form = verdict.holds
        report.closed_form_margin = verdict.margin
    return report
