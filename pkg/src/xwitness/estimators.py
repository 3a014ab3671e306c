"""scikit-learn style front end for batch classification.

Inputs are lists of :class:`~xwitness.xcore.XMatrix` or packed feature
arrays (see :mod:`xwitness.validation`).  Nothing is learned: ``fit`` only
validates and records the qubit count, so the estimators can sit inside a
:class:`sklearn.pipeline.Pipeline`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import ValidationError
from .validation import check_xmatrices, pack
from .witness import classify_witness
from .xcore import TOL
from .xstate import classify_state


class _XBase(BaseEstimator):
    _role = "generic"

    def fit(self, X, y=None):
        mats = check_xmatrices(X, self._role)
        self.n_qubits_ = mats[0].n
        self.n_features_in_ = 4 * mats[0].size
        return self

    def _matrices(self, X):
        check_is_fitted(self, "n_qubits_")
        mats = check_xmatrices(X, self._role)
        if mats[0].n != self.n_qubits_:
            raise ValidationError(f"fitted on {self.n_qubits_} qubits, got {mats[0].n}")
        return mats


class WitnessClassifier(ClassifierMixin, TransformerMixin, _XBase):
    """Label X-shaped Hermitian matrices by their strongest witness property.

    Labels: ``"positive"``, ``"optimal-gew"``, ``"gew"``, ``"decomposable"``
    (non-positive, not a genuine witness, but decomposable) and
    ``"non-decomposable"``.  ``transform`` returns the margins
    ``[psd, pair, decomposability]``.

    Parameters
    ----------
    tol : float, default=1e-9
        Verdict threshold applied to every margin.
    """

    _role = "witness"
    classes_ = np.array(["decomposable", "gew", "non-decomposable", "optimal-gew", "positive"])

    def __init__(self, tol: float = TOL):
        self.tol = tol

    def predict(self, X):
        labels = []
        for W in self._matrices(X):
            rep = classify_witness(W, self.tol)
            if rep.is_psd:
                labels.append("positive")
            elif rep.is_optimal:
                labels.append("optimal-gew")
            elif rep.is_genuine_witness:
                labels.append("gew")
            elif rep.is_decomposable:
                labels.append("decomposable")
            else:
                labels.append("non-decomposable")
        return np.array(labels)

    def transform(self, X):
        out = []
        for W in self._matrices(X):
            m = classify_witness(W, self.tol).margins
            out.append([m["psd"], m["pair"], m["decomposability"]])
        return np.array(out)


class StateClassifier(ClassifierMixin, TransformerMixin, _XBase):
    """Label X-shaped states as fully-bi-separable, bi-separable or
    genuinely-entangled; ``transform`` gives ``[full, bi]`` margins."""

    _role = "state"
    classes_ = np.array(["bi-separable", "fully-bi-separable", "genuinely-entangled"])

    def __init__(self, tol: float = TOL, normalized: bool = True):
        self.tol = tol
        self.normalized = normalized

    def predict(self, X):
        return np.array([classify_state(r, self.normalized, self.tol).label
                         for r in self._matrices(X)])

    def transform(self, X):
        out = []
        for r in self._matrices(X):
            rep = classify_state(r, self.normalized, self.tol)
            out.append([rep.fully_bi_separable.margin, rep.bi_separable.margin])
        return np.array(out)


__all__ = ["WitnessClassifier", "StateClassifier", "pack"]
