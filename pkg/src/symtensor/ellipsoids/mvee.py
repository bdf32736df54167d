"""Löwner (minimal enclosing) and John (maximal inscribed) ellipsoids of symmetric bodies.

The enclosing ellipsoid of ``±x_1, ..., ±x_k`` is centred at 0, so only its
shape is unknown.  Khachiyan's coordinate ascent works on weights ``w`` with
``X(w) = sum w_i x_i x_i^t``: it moves weight towards the point with the
largest ``M_i = x_i^t X^{-1} x_i`` (and, with Todd-Yildirim away steps, away
from the smallest).  At the optimum ``max M_i = d``; ``max M_i / d - 1`` is
the duality gap, and ``Q = X^{-1} / max M_i`` always contains every point.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..convex.bodies import (
    Body,
    DegenerateBodyError,
    Ellipsoid,
    HPolytope,
    VPolytope,
    polar_generators,
)
from ..convex.rational import to_float_matrix

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 100_000
REFRESH = 200


@dataclass
class MveeResult:
    ellipsoid: Ellipsoid
    duality_gap: float
    iterations: int
    active_points: tuple
    converged: bool = True
    trace: list = field(default_factory=list, repr=False)

    @property
    def shape(self) -> np.ndarray:
        return self.ellipsoid.shape

    def write_trace(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "gap"])
            for it, gap in self.trace:
                w.writerow([it, repr(gap)])


def _points_of(source) -> np.ndarray:
    if isinstance(source, VPolytope):
        return to_float_matrix(source.generators)
    if isinstance(source, HPolytope):
        return to_float_matrix(source.vertices)
    pts = np.asarray(source, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array (one point per row)")
    return pts


def khachiyan(points, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              trace: bool = False) -> MveeResult:
    """Minimal-volume 0-centred ellipsoid containing ``±points``."""
    X_pts = _points_of(points)
    X_pts = X_pts[np.abs(X_pts).sum(axis=1) > 0]
    k, d = X_pts.shape
    if k == 0 or np.linalg.matrix_rank(X_pts) < d:
        raise DegenerateBodyError("points do not span the space")
    w = np.full(k, 1.0 / k)
    Xinv = np.linalg.inv(X_pts.T @ (w[:, None] * X_pts))
    history = []
    gap = np.inf
    it = 0
    converged = False
    for it in range(max_iter + 1):
        if it % REFRESH == 0:
            Xinv = np.linalg.inv(X_pts.T @ (w[:, None] * X_pts))
        M = np.einsum("ij,jk,ik->i", X_pts, Xinv, X_pts)
        j = int(np.argmax(M))
        gap = M[j] / d - 1
        if trace:
            history.append((it, float(gap)))
        if gap <= tol:
            converged = True
            break
        support = np.flatnonzero(w > 0)
        kk = support[np.argmin(M[support])]
        if d - M[kk] > M[j] - d and w[kk] < 1:
            # away step, clipped so the weight stays nonnegative
            idx, Mi = kk, M[kk]
            floor = -w[kk] / (1 - w[kk])
            # for M_i <= 1 the line search has no interior optimum: drop the point
            lam = floor if Mi <= 1 else max((Mi - d) / (d * (Mi - 1)), floor)
        else:
            idx, Mi = j, M[j]
            lam = (Mi - d) / (d * (Mi - 1))
        x = X_pts[idx]
        Xx = Xinv @ x
        Xinv = (Xinv - lam * np.outer(Xx, Xx) / ((1 - lam) + lam * Mi)) / (1 - lam)
        w *= 1 - lam
        w[idx] += lam
        w[np.abs(w) < 1e-300] = 0.0
    Xinv = np.linalg.inv(X_pts.T @ (w[:, None] * X_pts))
    M = np.einsum("ij,jk,ik->i", X_pts, Xinv, X_pts)
    gap = float(M.max() / d - 1)
    Q = Xinv / M.max()
    active = tuple(int(i) for i in np.flatnonzero(w > 1e-9))
    return MveeResult(Ellipsoid(0.5 * (Q + Q.T), provenance={"construction": "loewner"}),
                      gap, it, active, converged and gap <= tol, history)


def loewner(source, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
            trace: bool = False) -> MveeResult:
    """Löwner ellipsoid of a polytope, of a point set (symmetrized), or of an ellipsoid."""
    if isinstance(source, Ellipsoid):
        return MveeResult(source, 0.0, 0, ())
    return khachiyan(source, tol, max_iter, trace)


def john(body: Body, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> Ellipsoid:
    """John ellipsoid as the polar of the Löwner ellipsoid of the polar body."""
    if isinstance(body, Ellipsoid):
        return body
    res = khachiyan(to_float_matrix(polar_generators(body)), tol, max_iter)
    E = res.ellipsoid.polar()
    E.provenance.update({"construction": "john", "duality_gap": res.duality_gap})
    return E


def relative_distance(A, B) -> float:
    """``‖A - B‖_F / ‖B‖_F``."""
    A, B = np.asarray(A, float), np.asarray(B, float)
    return float(np.linalg.norm(A - B) / np.linalg.norm(B))
