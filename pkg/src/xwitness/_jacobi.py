"""Cyclic Jacobi eigensolver for small dense complex Hermitian matrices."""

import numpy as np
from numba import njit


@njit(cache=True)
def jacobi_hermitian(A, tol, max_sweeps):
    """Return ``(w, V, sweeps, converged)``; ``w`` ascending, ``V`` unitary.

    Each rotation diagonalizes one 2x2 Hermitian sub-block with the unitary
    ``diag(1, e^{-i phi}) @ [[c, s], [-s, c]]``.
    """
    n = A.shape[0]
    B = A.copy()
    V = np.eye(n, dtype=np.complex128)
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += B[i, j].real ** 2 + B[i, j].imag ** 2
    norm = np.sqrt(norm)
    threshold = tol * norm
    converged = False
    sweeps = 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += B[i, j].real ** 2 + B[i, j].imag ** 2
        if np.sqrt(off) <= threshold:
            converged = True
            break
        if sweep == max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = B[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase_c = np.conj(apq / mag)
                app = B[p, p].real
                aqq = B[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                u00 = c + 0j
                u01 = s + 0j
                u10 = -s * phase_c
                u11 = c * phase_c
                for k in range(n):
                    bkp = B[k, p]
                    bkq = B[k, q]
                    B[k, p] = bkp * u00 + bkq * u10
                    B[k, q] = bkp * u01 + bkq * u11
                for k in range(n):
                    bpk = B[p, k]
                    bqk = B[q, k]
                    B[p, k] = np.conj(u00) * bpk + np.conj(u10) * bqk
                    B[q, k] = np.conj(u01) * bpk + np.conj(u11) * bqk
                B[p, q] = 0.0
                B[q, p] = 0.0
                B[p, p] = B[p, p].real
                B[q, q] = B[q, q].real
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = vkp * u00 + vkq * u10
                    V[k, q] = vkp * u01 + vkq * u11
    w = np.empty(n)
    for i in range(n):
        w[i] = B[i, i].real
    order = np.argsort(w)
    return w[order], V[:, order], sweeps, converged


@njit(cache=True)
def min_eigvecs(batch, tol, max_sweeps):
    """Smallest eigenpair of every matrix in a ``(k, d, d)`` stack."""
    k = batch.shape[0]
    d = batch.shape[1]
    vals = np.empty(k)
    vecs = np.empty((k, d), dtype=np.complex128)
    ok = True
    for r in range(k):
        w, V, _, conv = jacobi_hermitian(batch[r], tol, max_sweeps)
        ok = ok and conv
        vals[r] = w[0]
        vecs[r] = V[:, 0]
    return vals, vecs, ok
