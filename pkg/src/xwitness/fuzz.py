"""Seeded cross-checks between the closed forms and the oracle."""

from __future__ import annotations

import numpy as np

from . import oracle, sampling
from .multiindex import enumerate_bipartitions
from .witness import (
    decompose,
    is_decomposable,
    is_genuine_witness,
    split_bipartition,
)
from .xcore import is_positive_semidefinite, to_dense
from .xstate import is_bi_separable, is_fully_biseparable_ppt

BOUNDARY_BAND = 1e-5
RECOMPOSE_TOL = 1e-10
PSD_TOL = 1e-9
DUALITY_TOL = 1e-9


def _mutate(cert):
    S, Q = cert.parts[0]
    cert.parts[0] = (S, Q.replace(s=Q.s + 1e-3))


def run_fuzz(n: int, trials: int, seed: int, restarts: int = 32,
             inject_fault: bool = False) -> dict:
    """Run every suite; ``report["ok"]`` is False iff a hard invariant failed.

    The closed-form vs oracle comparison only runs for ``n <= 4``; the other
    suites are cheap at any supported size.
    """
    rng = oracle.rng_for(seed, 1)
    suites: dict[str, dict] = {}

    if n <= 4:
        agree = band = hard = 0
        for k in range(trials):
            # zero diagonals can put true violations below the oracle's resolution
            W = sampling.random_xmatrix(n, rng, zero_rate=0.0)
            rep = oracle.verify_witness_numeric(W, restarts=restarts, seed=seed + k)
            if rep.agrees:
                agree += 1
            elif abs(rep.closed_form_margin) < BOUNDARY_BAND:
                band += 1
            else:
                hard += 1
        suites["closed_form_vs_oracle"] = {"trials": trials, "agree": agree,
                                           "boundary": band, "failures": hard}

    failures = 0
    worst_residual = 0.0
    for _ in range(trials):
        W = sampling.random_decomposable(n, rng)
        cert = decompose(W)
        if inject_fault:
            _mutate(cert)
        residual = cert.recompose().max_abs_diff(W)
        worst_residual = max(worst_residual, residual)
        parts_ok = all(is_positive_semidefinite(Q, PSD_TOL).holds for _, Q in cert.parts)
        if n <= 6:
            parts_ok = parts_ok and all(oracle.min_eigenvalue(Q) >= -PSD_TOL
                                        for _, Q in cert.parts)
        if residual > RECOMPOSE_TOL or not parts_ok:
            failures += 1
    suites["certificate"] = {"trials": trials, "failures": failures,
                             "worst_residual": worst_residual}

    failures = 0
    gews = []
    for _ in range(trials):
        G = sampling.random_gew(n, rng)
        gews.append(G)
        for S, _ in enumerate_bipartitions(n):
            split = split_bipartition(G, S)
            if (split.residual > RECOMPOSE_TOL
                    or not is_positive_semidefinite(split.P, PSD_TOL).holds
                    or not is_positive_semidefinite(split.Q, PSD_TOL).holds):
                failures += 1
    suites["bipartition_split"] = {"trials": trials, "failures": failures}

    failures = 0
    worst = np.inf
    n_states = max(1, trials)
    dense_gews = np.array([to_dense(G) for G in gews[: min(len(gews), 100)]])
    for k in range(n_states):
        rho = oracle.random_biseparable_state(n, 1 + k % 4, seed, stream=1000 + k)
        values = np.einsum("ij,kij->k", rho, dense_gews).real
        worst = min(worst, float(values.min()))
        failures += int(np.sum(values < -DUALITY_TOL))
    suites["duality"] = {"states": n_states, "witnesses": len(dense_gews),
                         "failures": failures, "min_pairing": worst}

    failures = 0
    for W in gews + [sampling.random_xmatrix(n, rng) for _ in range(trials)]:
        if is_genuine_witness(W).holds and not is_decomposable(W).holds:
            failures += 1
    state_failures = 0
    for _ in range(trials):
        rho = sampling.random_xstate(n, rng)
        if is_fully_biseparable_ppt(rho).holds and not is_bi_separable(rho).holds:
            state_failures += 1
    suites["corollaries"] = {"gew_implies_decomposable_failures": failures,
                             "ppt_implies_biseparable_failures": state_failures}

    ok = (suites.get("closed_form_vs_oracle", {}).get("failures", 0) == 0
          and suites["certificate"]["failures"] == 0
          and suites["bipartition_split"]["failures"] == 0
          and suites["duality"]["failures"] == 0
          and failures == 0 and state_failures == 0)
    return {"n": n, "trials": trials, "seed": seed, "restarts": restarts,
            "ok": ok, "suites": suites}

