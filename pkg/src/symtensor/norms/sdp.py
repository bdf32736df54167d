"""Small dense semidefinite programs by a primal-dual interior-point method.

Standard pair, all matrices symmetric ``N x N``::

    (P)  min <C, X>   s.t.  <A_k, X> = b_k,  X ⪰ 0
    (D)  max b^t y    s.t.  S = C - sum_k y_k A_k ⪰ 0

Infeasible-start path following with the HKM search direction and a
Mehrotra predictor-corrector step.  Dense linear algebra throughout; meant
for the few-dozen-row problems this package builds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve


@dataclass
class SDPResult:
    X: np.ndarray
    y: np.ndarray
    S: np.ndarray
    primal_value: float
    dual_value: float
    iterations: int
    converged: bool


def _sym(Z):
    return 0.5 * (Z + Z.T)


def _max_step(Z, dZ) -> float:
    """Largest ``a <= 1`` keeping ``Z + a dZ`` positive definite (``Z`` PD)."""
    try:
        L = np.linalg.cholesky(Z)
    except np.linalg.LinAlgError:
        return 0.0
    Li = np.linalg.solve(L, np.eye(len(Z)))
    lam = np.linalg.eigvalsh(_sym(Li @ dZ @ Li.T))[0]
    return 1.0 if lam >= 0 else min(1.0, -1.0 / lam)


def solve_sdp(C, A, b, *, tol: float = 1e-9, max_iter: int = 200) -> SDPResult:
    """Solve the pair above.  ``A`` is a ``K x N x N`` stack of symmetric matrices."""
    C = np.asarray(C, float)
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    K, N = A.shape[0], C.shape[0]
    Aflat = A.reshape(K, -1)

    def op(Z):
        return Aflat @ Z.reshape(-1)

    def adj(v):
        return (v @ Aflat).reshape(N, N)

    X = np.eye(N)
    S = np.eye(N)
    y = np.zeros(K)
    scale = 1 + max(np.abs(b).max(), np.abs(C).max())
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        rp = b - op(X)
        Rd = C - adj(y) - S
        pv, dv = float(np.sum(C * X)), float(b @ y)
        mu = float(np.sum(X * S)) / N
        gap = abs(pv - dv) / (1 + abs(pv) + abs(dv))
        if (gap < tol and np.abs(rp).max() < tol * scale and np.abs(Rd).max() < tol * scale):
            converged = True
            break
        if mu < 1e-15 * scale:
            break
        try:
            Si = _sym(np.linalg.inv(S))
        except np.linalg.LinAlgError:
            break
        # Schur complement H_kl = <A_k, X A_l S^-1>
        T = np.matmul(np.matmul(X, A), Si)
        H = Aflat @ T.reshape(K, -1).T
        H = _sym(H)
        try:
            fac = cho_factor(H + 1e-14 * np.trace(H) / K * np.eye(K))
        except np.linalg.LinAlgError:
            break
        XRdSi = X @ Rd @ Si

        def direction(sig_mu, corr):
            rhs = b - sig_mu * op(Si) + op(XRdSi) + (op(corr @ Si) if corr is not None else 0.0)
            dy = cho_solve(fac, rhs)
            dS = Rd - adj(dy)
            dX = sig_mu * Si - X - _sym(X @ dS @ Si)
            if corr is not None:
                dX = dX - _sym(corr @ Si)
            return dX, dy, dS

        dXa, dya, dSa = direction(0.0, None)
        ap = _max_step(X, dXa)
        ad = _max_step(S, dSa)
        mu_aff = float(np.sum((X + ap * dXa) * (S + ad * dSa))) / N
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
        dX, dy, dS = direction(sigma * mu, dXa @ dSa)
        ap = min(1.0, 0.98 * _max_step(X, dX))
        ad = min(1.0, 0.98 * _max_step(S, dS))
        if ap == 0.0 and ad == 0.0:
            break  # iterates lost definiteness to roundoff; callers repair what they use
        X = _sym(X + ap * dX)
        y = y + ad * dy
        S = _sym(S + ad * dS)
    return SDPResult(X, y, S, float(np.sum(C * X)), float(b @ y), it, converged)
