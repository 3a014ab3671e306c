"""Seeded random X matrices and states for fuzzing and acceptance runs."""

from __future__ import annotations

import numpy as np

from .xcore import XMatrix


def _phases(rng: np.random.Generator, m: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(m))


def _diagonals(rng: np.random.Generator, m: int,
               zero_rate: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    s = rng.exponential(1.0, m)
    t = rng.exponential(1.0, m)
    # occasional zero diagonals exercise the degenerate branches
    zero = rng.random(m) < zero_rate
    s[zero & (rng.random(m) < 0.5)] = 0.0
    t[zero & (rng.random(m) < 0.5)] = 0.0
    return s, t


def random_xmatrix(n: int, rng: np.random.Generator, zero_rate: float = 0.1) -> XMatrix:
    """Nonnegative diagonals; one slot gets an anti-diagonal entry near the
    largest value the pair inequality allows, so both verdicts are common
    and margins spread across zero.

    ``zero_rate`` is the per-slot chance of forcing a diagonal entry to 0;
    with 0 the diagonals are almost surely positive.
    """
    m = 1 << (n - 1)
    s, t = _diagonals(rng, m, zero_rate)
    g = np.sqrt(s * t)
    mags = np.where(rng.random(m) < 0.5, g * rng.random(m), 0.0)
    i0 = rng.integers(m)
    mags[i0] = 0.0
    others = np.arange(m) != i0
    allowed = g[i0] + np.min((g - mags)[others]) if m > 1 else g[i0] + 1.0
    mags[i0] = max(allowed, 0.0) * rng.uniform(0.6, 1.4)
    if rng.random() < 0.2:
        mags = mags + rng.exponential(0.3, m)
    return XMatrix(n, s, t, mags * _phases(rng, m), "witness")


def random_gew(n: int, rng: np.random.Generator) -> XMatrix:
    """A genuine entanglement witness: pair margin >= 0 and not PSD."""
    m = 1 << (n - 1)
    while True:
        s = rng.exponential(1.0, m)
        t = rng.exponential(1.0, m)
        i0 = rng.integers(m)
        if rng.random() < 0.3:
            s[i0] = t[i0] = 0.0
        g = np.sqrt(s * t)
        mags = np.where(rng.random(m) < 0.5, g * rng.uniform(0, 0.9, m), 0.0)
        mags[i0] = 0.0
        others = np.arange(m) != i0
        allowed = g[i0] + np.min((g - mags)[others])
        if allowed <= g[i0] * 1.001 + 1e-6:
            continue
        mags[i0] = g[i0] + rng.uniform(0.05, 1.0) * (allowed - g[i0])
        slack = g - mags
        order = np.sort(slack)
        if order[0] + order[1] >= 0:
            return XMatrix(n, s, t, mags * _phases(rng, m), "witness")


def random_decomposable(n: int, rng: np.random.Generator) -> XMatrix:
    """Random X matrix rescaled so that sum |u| <= sum sqrt(s t)."""
    m = 1 << (n - 1)
    while True:
        s, t = _diagonals(rng, m)
        g = np.sqrt(s * t)
        mags = rng.exponential(1.0, m) * (rng.random(m) < 0.7)
        total_g, total_u = g.sum(), mags.sum()
        if total_g <= 0:
            continue
        if total_u > total_g or rng.random() < 0.5:
            mags = mags * (total_g / max(total_u, 1e-300)) * rng.uniform(0.3, 1.0)
        if mags.sum() <= total_g:
            return XMatrix(n, s, t, mags * _phases(rng, m), "witness")


def random_xstate(n: int, rng: np.random.Generator) -> XMatrix:
    """Random normalized X-shaped state with anti-diagonals of assorted strength."""
    m = 1 << (n - 1)
    a = rng.exponential(1.0, m)
    b = rng.exponential(1.0, m)
    kind = rng.integers(3)
    if kind == 0:
        strength = rng.random(m)
    elif kind == 1:
        strength = np.zeros(m)
        strength[rng.integers(m)] = rng.random()
    else:
        strength = rng.random(m) * np.min(np.sqrt(a * b)) / np.sqrt(a * b) * rng.uniform(0.5, 1.5)
        strength = np.minimum(strength, 1.0)
    z = np.sqrt(a * b) * strength * _phases(rng, m)
    trace = a.sum() + b.sum()
    return XMatrix(n, a / trace, b / trace, z / trace, "state")
