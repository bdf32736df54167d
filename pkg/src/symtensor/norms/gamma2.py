"""γ2 factorization norm as a certified interval.

    γ2(M) = min over M = X Y^t of  max_i ‖x_i‖ · max_j ‖y_j‖.

Normalizing the Gram matrix of the factors gives the semidefinite program

    1 / γ2(M) = max s  s.t.  Z ⪰ 0,  diag(Z) = 1,  Z_12 = s M,

solved by the interior-point routine in :mod:`.sdp`.  Both ends of the
returned interval are re-derived from the solver output rather than taken
from its objective values:

* the upper end is the measured cost of an explicit factorization read off
  the dual slack ``Z``;
* the lower end comes from the primal matrix ``W = [[D1, W12], [W21, D2]]``
  (``D1``, ``D2`` diagonal, ``W ⪰ 0``, repaired if roundoff broke either):
  for every factorization ``N = U V^t`` of cost ``t``, pairing ``W`` with the
  PSD Gram matrix of ``(U, -V)`` gives ``-2 <W12, N> <= t tr W``.  So
  ``dual = -2 W12 / tr W`` satisfies ``<dual, N> <= γ2(N)`` for all ``N``.

A side can also be "hilbert": its cost is the operator norm of the factor
instead of the largest row norm, the diagonal constraint becomes
``Z_11 ⪯ I``, and the matching block of ``W`` only has to be PSD.  This is
the factorization norm of ``M`` as a map into (or out of) a Hilbert space,
which is what an ellipsoid factor needs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..convex.bodies import Interval
from ..convex.enumeration import DeskScaleError
from .sdp import solve_sdp

MAX_ENTRIES = 256
DEFAULT_TOL = 1e-5
DEFAULT_MAX_ITER = 200
RESIDUAL_TOL = 1e-8

LINF = "linf"
HILBERT = "hilbert"


@dataclass(frozen=True)
class Gamma2Result:
    """Bracket ``[lo, hi]`` for γ2 together with both certificates.

    ``left @ right.T`` reproduces the matrix (a factorization whose cost is
    ``hi``); ``dual`` is a matrix with ``<dual, M> = lo`` and
    ``<dual, N> <= γ2(N)`` for every ``N`` of the same shape.
    """

    interval: Interval
    left: np.ndarray
    right: np.ndarray
    dual: np.ndarray
    iterations: int
    converged: bool
    tol: float
    sides: tuple = (LINF, LINF)

    @property
    def lo(self) -> float:
        return self.interval.lo

    @property
    def hi(self) -> float:
        return self.interval.hi

    def factor_cost(self) -> float:
        return _side_cost(self.left, self.sides[0]) * _side_cost(self.right, self.sides[1])

    def verify(self, M, tol: float = RESIDUAL_TOL) -> bool:
        M = np.asarray(M, dtype=float)
        scale = max(1.0, np.abs(M).max())
        if np.abs(self.left @ self.right.T - M).max() > tol * scale:
            return False
        if self.factor_cost() > self.hi * (1 + 1e-9) + 1e-12:
            return False
        return abs(float(np.sum(self.dual * M)) - self.lo) <= 1e-8 * scale


class Gamma2ConvergenceError(RuntimeError):
    """Raised when the iteration cap is hit; ``result`` holds the best bracket so far."""

    def __init__(self, message, result: Gamma2Result):
        super().__init__(message)
        self.result = result


def _side_cost(F: np.ndarray, side: str) -> float:
    if F.size == 0:
        return 0.0
    if side == HILBERT:
        return float(np.linalg.norm(F, 2))
    return float(np.sqrt((F * F).sum(axis=1).max()))


def _build_program(M, sides):
    """Data of the dual-form SDP; ``y[0]`` is ``s``, the rest shape the diagonal blocks."""
    m, n = M.shape
    sizes = [m, n]
    offsets = [0, m]
    N = m + n
    extra = {}
    for side_idx, side in enumerate(sides):
        if side == HILBERT:
            extra[side_idx] = N
            N += sizes[side_idx]
    C = np.zeros((N, N))
    mats = []
    A0 = np.zeros((N, N))
    A0[:m, m:m + n] = -M
    A0[m:m + n, :m] = -M.T
    mats.append(A0)
    for side_idx, side in enumerate(sides):
        d, o = sizes[side_idx], offsets[side_idx]
        if side == LINF:
            C[o:o + d, o:o + d] = np.eye(d)
            pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        else:
            e = extra[side_idx]
            C[e:e + d, e:e + d] = np.eye(d)
            pairs = [(i, j) for i in range(d) for j in range(i, d)]
        for i, j in pairs:
            A = np.zeros((N, N))
            A[o + i, o + j] = A[o + j, o + i] = -1.0
            if side == HILBERT:
                e = extra[side_idx]
                A[e + i, e + j] = A[e + j, e + i] = 1.0
            mats.append(A)
    b = np.zeros(len(mats))
    b[0] = 1.0
    return C, np.array(mats), b


def _factor_from_slack(C, A, y, m, n):
    """Explicit factors from the main block of ``S = C - sum y_k A_k``."""
    S = C - np.tensordot(y, A, axes=1)
    Z = _sym(S[:m + n, :m + n])
    w, V = np.linalg.eigh(Z)
    F = V * np.sqrt(np.clip(w, 0.0, None))
    s = y[0]
    return F[:m] / np.sqrt(s), F[m:m + n] / np.sqrt(s)


def _dual_from_primal(X, M, sides):
    """Repaired primal block and the dual matrix ``-2 W12 / tr W``."""
    m, n = M.shape
    W = _sym(X[:m + n, :m + n].copy())
    for side_idx, side in enumerate(sides):
        if side == LINF:
            sl = slice(0, m) if side_idx == 0 else slice(m, m + n)
            blk = W[sl, sl]
            W[sl, sl] = np.diag(np.diag(blk))
    lam = np.linalg.eigvalsh(W)[0]
    if lam < 0:
        W += (-lam) * (1 + 1e-12) * np.eye(m + n)
    return -2.0 * W[:m, m:] / np.trace(W)


def _sym(Z):
    return 0.5 * (Z + Z.T)


def gamma2_norm(M, *, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                sides=(LINF, LINF), raise_on_cap: bool = True) -> Gamma2Result:
    """γ2 of a real matrix as a certified interval with gap ``<= tol * value``.

    ``sides`` selects ``"linf"`` (row norms, the usual γ2) or ``"hilbert"``
    (operator norm) for the left and right factors.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError("gamma2_norm takes a matrix")
    if M.size > MAX_ENTRIES:
        raise DeskScaleError(f"desk-scale limit: {M.size} entries exceed {MAX_ENTRIES}")
    sides = tuple(sides)
    if not np.any(M):
        return Gamma2Result(Interval(0.0, 0.0), np.zeros((M.shape[0], 1)), np.zeros((M.shape[1], 1)),
                            np.zeros_like(M), 0, True, tol, sides)
    m, n = M.shape
    norm = np.abs(M).max()
    Mn = M / norm
    C, A, b = _build_program(Mn, sides)
    sol = solve_sdp(C, A, b, max_iter=max_iter)
    X, Y = _factor_from_slack(C, A, sol.y, m, n) if sol.y[0] > 0 else (Mn, np.eye(n))
    if np.abs(X @ Y.T - Mn).max() > RESIDUAL_TOL:
        X, Y = _fallback_factors(Mn, sides)
    hi = _side_cost(X, sides[0]) * _side_cost(Y, sides[1])
    dual = _dual_from_primal(sol.X, Mn, sides)
    lo = float(np.sum(dual * Mn))
    lo, hi = float(lo * norm * (1 - 1e-12)), float(hi * norm * (1 + 1e-12))
    result = Gamma2Result(Interval(lo, hi), X * norm, Y, dual, sol.iterations,
                          hi - lo <= tol * max(lo, 1e-300), tol, sides)
    if not result.converged and raise_on_cap:
        raise Gamma2ConvergenceError(
            f"gamma2 interval [{lo:.10g}, {hi:.10g}] wider than relative gap {tol:g} "
            f"after {sol.iterations} interior-point steps",
            result,
        )
    return result


def _fallback_factors(M, sides):
    """Trivial factorization ``M = M · I`` or ``I · M``, whichever is cheaper."""
    m, n = M.shape
    a = (M, np.eye(n))
    b = (np.eye(m), M.T.copy())
    ca = _side_cost(a[0], sides[0]) * _side_cost(a[1], sides[1])
    cb = _side_cost(b[0], sides[0]) * _side_cost(b[1], sides[1])
    return a if ca <= cb else b
