"""Explicit injective and projective hulls of order-2 products.

``pi_inj`` is the section of a projective product of finite ``ℓ∞`` balls
through the facet embeddings of the factors; ``eps_proj`` is the image of an
injective product of ``ℓ1`` balls under the vertex quotient maps.  Facet
embeddings are isometric and finite ``ℓ∞`` is 1-injective, so these agree
with the infinite-dimensional constructions; oracle provenance records that.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..convex.bodies import (
    Body,
    HPolytope,
    OracleBody,
    RepresentationError,
    VPolytope,
    as_vpolytope,
    polar_generators,
)
from ..convex.enumeration import DeskScaleError
from ..convex.lp import LinProgram, l1_decomposition, lp_solve, preimage_support
from ..convex.rational import ONE, ZERO, dot, kron_vec, matmul, sign_vectors, transpose, vec

KRONECKER_BUDGET = 4096
FINITE_INJECTIVE_FLAG = "equality-assumed-finite-injective"


@lru_cache(maxsize=64)
def sign_kronecker_generators(m: int, n: int) -> tuple:
    """Generators of ``B∞^m ⊗π B∞^n``: ``s ⊗ t`` over sign vectors, one per ± pair."""
    count = (1 << (m - 1)) * (1 << (n - 1))
    if count > KRONECKER_BUDGET:
        raise DeskScaleError(
            f"desk-scale limit: {count} sign-Kronecker generators exceed {KRONECKER_BUDGET}"
        )
    return tuple(kron_vec(s, t) for s in sign_vectors(m) for t in sign_vectors(n))


def linf_pi_gauge(matrix) -> object:
    """Projective norm of an ``m x n`` matrix in ``ℓ∞^m ⊗ ℓ∞^n`` (exact LP)."""
    m, n = len(matrix), len(matrix[0])
    flat = tuple(a for row in matrix for a in row)
    return l1_decomposition(sign_kronecker_generators(m, n), flat).value


def _as_matrix(u, d1: int, d2: int) -> tuple:
    u = vec(u)
    return tuple(u[i * d2:(i + 1) * d2] for i in range(d1))


def _require_polytope(body: Body, what: str) -> None:
    if not isinstance(body, (VPolytope, HPolytope)):
        raise RepresentationError(f"embedding unavailable: {what} needs polytope factors, got {body.kind}")


@dataclass(frozen=True)
class EmbeddingData:
    """Facet embeddings ``J_i`` into ``ℓ∞^{m_i}`` and vertex quotients ``Q_i`` from ``ℓ1^{n_i}``.

    ``J_i`` has the facet normals of ``P_i`` as rows, so ``max_r |(J_i x)_r|``
    is the gauge of ``P_i``; ``Q_i`` has the generators of ``P_i`` as columns,
    so ``Q_i(B_1) = P_i``.  Both bounds ``‖J_i‖`` and ``‖J_i^{-1}‖`` equal 1.
    """

    embeddings: tuple
    quotients: tuple

    @classmethod
    def of(cls, *bodies: Body) -> "EmbeddingData":
        for b in bodies:
            _require_polytope(b, "embedding data")
        return cls(
            tuple(tuple(polar_generators(b)) for b in bodies),
            tuple(transpose(as_vpolytope(b).generators) for b in bodies),
        )

    @property
    def inverse_bounds(self) -> tuple:
        return tuple(ONE for _ in self.embeddings)

    def verify(self, *bodies: Body) -> bool:
        """Exact check that each ``J_i`` reproduces the gauge on the generators of ``P_i``."""
        for J, body in zip(self.embeddings, bodies):
            for g in as_vpolytope(body).generators:
                if max(abs(dot(row, g)) for row in J) != body.gauge(g):
                    return False
        for Q, body in zip(self.quotients, bodies):
            if VPolytope(transpose(Q), body.dim) != as_vpolytope(body):
                return False
        return True


def pi_inj_product(P: Body, Q: Body) -> OracleBody:
    """``P ⊗_{π^inj} Q``: pull back ``B∞^m ⊗π B∞^n`` through the facet embeddings."""
    _require_polytope(P, "pi_inj")
    _require_polytope(Q, "pi_inj")
    J1 = tuple(polar_generators(P))
    J2 = tuple(polar_generators(Q))
    d1, d2 = P.dim, Q.dim
    m, n = len(J1), len(J2)
    W = sign_kronecker_generators(m, n)
    J2t = transpose(J2)

    def gauge_fn(u):
        V = matmul(matmul(J1, _as_matrix(u, d1, d2)), J2t)
        return linf_pi_gauge(V)

    J12 = [kron_vec(a, b) for a in J1 for b in J2]

    def support_fn(y):
        return preimage_support(J12, W, y)

    return OracleBody(d1 * d2, gauge_fn, support_fn, {
        "construction": "pi_inj",
        "facets": [m, n],
        "flags": [FINITE_INJECTIVE_FLAG],
    })


def eps_proj_product(P: Body, Q: Body) -> OracleBody:
    """``P ⊗_{ε^proj} Q = (Q_1 ⊗ Q_2)(B_1^m ⊗ε B_1^n)`` through the vertex quotients.

    The polar is the exact preimage ``{z : (Q_1^t ⊗ Q_2^t) z ∈ B∞^m ⊗π B∞^n}``,
    so the support function is one l1 LP; the gauge is the LP
    ``min τ  s.t.  (Q_1 ⊗ Q_2) w = x,  |<s ⊗ t, w>| <= τ``.
    """
    _require_polytope(P, "eps_proj")
    _require_polytope(Q, "eps_proj")
    G1 = as_vpolytope(P).generators  # rows = generators, i.e. Q_1^t
    G2 = as_vpolytope(Q).generators
    d1, d2 = P.dim, Q.dim
    m, n = len(G1), len(G2)
    W = sign_kronecker_generators(m, n)
    G2t = transpose(G2)

    def support_fn(z):
        V = matmul(matmul(G1, _as_matrix(z, d1, d2)), G2t)
        return linf_pi_gauge(V)

    Q12 = transpose([kron_vec(a, b) for a in G1 for b in G2])  # (d1 d2) x (m n)

    def gauge_fn(x):
        mn = m * n
        A, senses, rhs = [], [], []
        for r in range(d1 * d2):
            A.append(list(Q12[r]) + [ZERO])
            senses.append("=")
            rhs.append(x[r])
        for w in W:
            A.append(list(w) + [-ONE])
            senses.append("<=")
            rhs.append(ZERO)
            A.append([-a for a in w] + [-ONE])
            senses.append("<=")
            rhs.append(ZERO)
        bounds = [(None, None)] * mn + [(ZERO, None)]
        obj = [ZERO] * mn + [ONE]
        res = lp_solve(LinProgram(obj, A, senses, rhs, bounds))
        return res.value

    return OracleBody(d1 * d2, gauge_fn, support_fn, {
        "construction": "eps_proj",
        "generators": [m, n],
        "flags": [FINITE_INJECTIVE_FLAG],
    })
