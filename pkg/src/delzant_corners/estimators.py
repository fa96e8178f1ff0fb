"""scikit-learn style wrappers around the Legendre transform and the slope test."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import catalog
from .classify import SlopeClass, member_at_vertex
from .formats import load_polytope
from .geometry import legendre_inverse, potential_grad
from .polytope import DelzantPolytope, validate


def _resolve(polytope) -> DelzantPolytope:
    if polytope is None:
        return catalog.projective_plane()
    if isinstance(polytope, DelzantPolytope):
        return polytope
    if isinstance(polytope, str):
        return load_polytope(polytope)
    return validate(polytope)


class LegendreTransformer(TransformerMixin, BaseEstimator):
    """Rows of interior points to gradient coordinates, and back.

    ``polytope`` may be a DelzantPolytope, a path to a polytope file, a list
    of ``(normal, offset)`` pairs, or None for the triangle of CP^2.
    """

    def __init__(self, polytope=None):
        self.polytope = polytope

    def fit(self, X=None, y=None):
        self.polytope_ = _resolve(self.polytope)
        self.n_features_in_ = self.polytope_.dim
        if X is not None:
            self._check(X)
        return self

    def _check(self, X):
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X

    def transform(self, X):
        check_is_fitted(self, "polytope_")
        X = self._check(X)
        return np.array([potential_grad(self.polytope_, row) for row in X])

    def inverse_transform(self, X):
        check_is_fitted(self, "polytope_")
        X = self._check(X)
        return np.array([legendre_inverse(self.polytope_, row) for row in X])


class EmbeddedToricClassifier(ClassifierMixin, BaseEstimator):
    """Predict whether codimension-one slopes pass at every vertex.

    Each row of X is an integer slope: a direction in the plane, a normal
    vector in higher dimension. ``fit`` ignores y.
    """

    def __init__(self, polytope=None):
        self.polytope = polytope

    def fit(self, X=None, y=None):
        self.polytope_ = _resolve(self.polytope)
        self.n_features_in_ = self.polytope_.dim
        self.classes_ = np.array([False, True])
        return self

    def _slopes(self, X):
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        if not np.all(np.equal(np.mod(X, 1), 0)):
            raise ValueError("slopes must be integer vectors")
        return [SlopeClass(tuple(int(v) for v in row)) for row in X]

    def predict_per_vertex(self, X):
        """Boolean array of shape (n_samples, n_vertices)."""
        check_is_fitted(self, "polytope_")
        slopes = self._slopes(X)
        charts = self.polytope_.charts
        return np.array([[member_at_vertex(c, s) for c in charts] for s in slopes], dtype=bool)

    def predict(self, X):
        return self.predict_per_vertex(X).all(axis=1)
