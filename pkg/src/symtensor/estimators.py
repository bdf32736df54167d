"""scikit-learn style wrappers: a Löwner ellipsoid estimator and a tensor-norm feature transformer."""
from __future__ import annotations

import numpy as np
from gmpy2 import mpq
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .convex.bodies import Body
from .ellipsoids.mvee import DEFAULT_MAX_ITER, DEFAULT_TOL, khachiyan
from .norms.tensor_norms import TensorElement, eps_norm, omega2_norm, pi_norm
from .tensor.shape import TensorShape

NORMS = ("eps", "pi", "omega2")


class LoewnerEllipsoid(BaseEstimator, TransformerMixin):
    """Fit the smallest 0-centred ellipsoid containing ``±X``.

    After ``fit``: ``shape_`` (the matrix Q), ``duality_gap_``, ``n_iter_``,
    ``support_`` (indices of points carrying weight) and ``ellipsoid_``.
    ``transform`` maps into coordinates where the ellipsoid is the unit ball.
    """

    def __init__(self, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER):
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_samples=1)
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        res = khachiyan(X, self.tol, self.max_iter)
        self.ellipsoid_ = res.ellipsoid
        self.shape_ = res.shape
        self.duality_gap_ = res.duality_gap
        self.n_iter_ = res.iterations
        self.support_ = np.array(res.active_points, dtype=int)
        self.converged_ = res.converged
        self.n_features_in_ = X.shape[1]
        return self

    def _checked(self, X):
        check_is_fitted(self, "shape_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X

    def transform(self, X):
        return self._checked(X) @ self.ellipsoid_.root

    def score_samples(self, X):
        """Gauge of each row: at most 1 inside the ellipsoid."""
        X = self._checked(X)
        return np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", X, self.shape_, X), 0.0))

    def predict(self, X):
        """``+1`` for rows inside the ellipsoid (up to the fitted gap), ``-1`` outside."""
        scores = self.score_samples(X)
        return np.where(scores <= np.sqrt(1 + self.duality_gap_), 1, -1)


class TensorNormTransformer(BaseEstimator, TransformerMixin):
    """Turn flattened tensors of ``(R^m, g_P) ⊗ (R^n, g_Q)`` into norm features.

    Each row of ``X`` holds ``m*n`` entries in row-major order.  Float entries
    are converted to the exact rationals they represent, so ``eps`` and ``pi``
    columns are exact values of those inputs; ``omega2`` reports the upper end
    of its certified interval.
    """

    def __init__(self, P: Body | None = None, Q: Body | None = None, norms=NORMS, tol: float = 1e-5):
        self.P = P
        self.Q = Q
        self.norms = norms
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.P is None or self.Q is None:
            raise ValueError("both factor bodies P and Q are required")
        unknown = set(self.norms) - set(NORMS)
        if unknown or not self.norms:
            raise ValueError(f"norms must be a non-empty subset of {NORMS}")
        self.shape_ = TensorShape((self.P.dim, self.Q.dim))
        self.n_features_in_ = self.shape_.total_dim
        if X is not None:
            self._checked(X)
        return self

    def _checked(self, X):
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X

    def _row(self, x) -> list:
        u = TensorElement(self.shape_, tuple(mpq(float(a)) for a in x))
        out = []
        for name in self.norms:
            if name == "eps":
                out.append(float(eps_norm(u, self.P, self.Q).value))
            elif name == "pi":
                out.append(float(pi_norm(u, self.P, self.Q).value))
            else:
                out.append(omega2_norm(u, self.P, self.Q, self.tol).hi)
        return out

    def transform(self, X):
        check_is_fitted(self, "shape_")
        X = self._checked(X)
        return np.array([self._row(x) for x in X], dtype=float).reshape(len(X), len(self.norms))

    def get_feature_names_out(self, input_features=None):
        return np.array(list(self.norms), dtype=object)


__all__ = ["LoewnerEllipsoid", "TensorNormTransformer"]
