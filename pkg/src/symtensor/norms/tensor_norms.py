"""ε, π and ω2 norms of order-2 tensors with checkable certificates."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..convex.bodies import (
    Body,
    Ellipsoid,
    Interval,
    OracleBody,
    RepresentationError,
    as_vpolytope,
    polar_generators,
)
from ..convex.enumeration import DeskScaleError
from ..convex.lp import l1_decomposition
from ..convex.rational import ZERO, dot, format_rational, kron_vec, matvec, to_float, to_float_matrix, vec
from ..tensor.shape import TensorShape
from .gamma2 import DEFAULT_TOL, HILBERT, LINF, MAX_ENTRIES, Gamma2Result, gamma2_norm

PI_BUDGET = 4096


@dataclass(frozen=True)
class TensorElement:
    """A tensor ``u`` in ``R^{d1} ⊗ R^{d2}`` stored as its flat row-major vector."""

    shape: TensorShape
    entries: tuple

    def __post_init__(self):
        shape = self.shape if isinstance(self.shape, TensorShape) else TensorShape(tuple(self.shape))
        if shape.order != 2:
            raise ValueError("tensor norms here are defined for order 2")
        ent = self.entries
        if isinstance(ent, np.ndarray) and ent.dtype.kind == "f":
            ent = tuple(float(a) for a in ent.reshape(-1))
        else:
            ent = vec(np.asarray(ent, dtype=object).reshape(-1).tolist()) \
                if isinstance(ent, np.ndarray) else vec(_flatten(ent))
        if len(ent) != shape.total_dim:
            raise ValueError(f"{len(ent)} entries for shape {shape.factor_dims}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_matrix(cls, rows) -> "TensorElement":
        rows = [list(r) for r in rows]
        return cls(TensorShape((len(rows), len(rows[0]))), [a for r in rows for a in r])

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(a, float) for a in self.entries)

    def matrix(self) -> tuple:
        return t_u(self)

    def as_float(self) -> np.ndarray:
        d1, d2 = self.shape.factor_dims
        return to_float(self.entries).reshape(d1, d2)


def _flatten(values):
    out = []
    for v in values:
        if hasattr(v, "__len__") and not isinstance(v, str):
            out.extend(v)
        else:
            out.append(v)
    return out


def as_tensor(u, shape=None) -> TensorElement:
    if isinstance(u, TensorElement):
        return u
    if shape is not None:
        return TensorElement(TensorShape(tuple(shape)), u)
    arr = np.asarray(u, dtype=object)
    if arr.ndim != 2:
        raise ValueError("pass a matrix or give the shape of a flat tensor")
    return TensorElement.from_matrix(arr.tolist())


def t_u(u: TensorElement) -> tuple:
    """The matrix of ``T_u``: entry ``(i, j)`` is the coefficient of ``e_i ⊗ e_j``."""
    d1, d2 = u.shape.factor_dims
    return tuple(u.entries[i * d2:(i + 1) * d2] for i in range(d1))


def u_t(M) -> TensorElement:
    return TensorElement.from_matrix(M)


def _check_factors(u: TensorElement, P: Body, Q: Body):
    if (P.dim, Q.dim) != u.shape.factor_dims:
        raise ValueError(f"factors of dims {(P.dim, Q.dim)} for a tensor of shape {u.shape.factor_dims}")


# --------------------------------------------------------------------------
# ε


@dataclass(frozen=True)
class EpsNorm:
    """``value = |<u, v ⊗ w>|`` maximized over polar generators, attained at ``pair``."""

    value: object
    pair: tuple

    def verify(self, u: TensorElement) -> bool:
        v, w = self.pair
        return abs(dot(u.entries, kron_vec(v, w))) == self.value


def eps_norm(u, P: Body, Q: Body) -> EpsNorm:
    u = as_tensor(u)
    _check_factors(u, P, Q)
    for body in (P, Q):
        if isinstance(body, (OracleBody, Ellipsoid)):
            raise RepresentationError(f"eps_norm needs polytope factors, got {body.kind}")
    U = t_u(u)
    best = None
    for v in polar_generators(P):
        row = matvec(tuple(zip(*U)), v)  # U^t v
        for w in polar_generators(Q):
            val = abs(dot(row, w))
            if best is None or val > best[0]:
                best = (val, (v, w))
    return EpsNorm(*best)


# --------------------------------------------------------------------------
# π


@dataclass(frozen=True)
class PiNorm:
    """``u = sum_k c_k g_{a_k} ⊗ h_{b_k}`` with ``sum |c_k| = value`` (minimal).

    ``terms`` lists ``(c_k, a_k, b_k)`` for the nonzero coefficients; ``dual``
    is a linear functional with ``|<dual, g ⊗ h>| <= 1`` on every generator
    pair and ``<dual, u> = value``, which proves minimality.
    """

    value: object
    terms: tuple
    dual: tuple
    left_generators: tuple = field(repr=False)
    right_generators: tuple = field(repr=False)

    def verify(self, u: TensorElement) -> bool:
        recon = [ZERO] * len(u.entries)
        for c, a, b in self.terms:
            for i, x in enumerate(kron_vec(self.left_generators[a], self.right_generators[b])):
                recon[i] += c * x
        if tuple(recon) != tuple(u.entries):
            return False
        if sum(abs(c) for c, _, _ in self.terms) != self.value:
            return False
        if dot(self.dual, u.entries) != self.value:
            return False
        return all(abs(dot(self.dual, kron_vec(g, h))) <= 1
                   for g in self.left_generators for h in self.right_generators)


def pi_norm(u, P: Body, Q: Body, budget: int = PI_BUDGET) -> PiNorm:
    u = as_tensor(u)
    _check_factors(u, P, Q)
    if not u.is_exact:
        raise ValueError("pi_norm is exact and needs rational entries")
    G = as_vpolytope(P).generators
    H = as_vpolytope(Q).generators
    count = len(G) * len(H)
    if count > budget:
        raise DeskScaleError(f"desk-scale limit: {count} Kronecker generators exceed {budget}")
    gens = [kron_vec(g, h) for g in G for h in H]
    dec = l1_decomposition(gens, u.entries)
    terms = tuple((c, k // len(H), k % len(H)) for k, c in enumerate(dec.coefficients) if c)
    return PiNorm(dec.value, terms, dec.dual, G, H)


# --------------------------------------------------------------------------
# ω2


def _embedding(body: Body):
    """``(J, side)``: rows of ``J`` embed the factor into ``ℓ∞`` or ``ℓ2``."""
    if isinstance(body, Ellipsoid):
        return body.root, HILBERT
    if isinstance(body, OracleBody):
        raise RepresentationError("omega2 needs polytope or ellipsoid factors")
    return to_float_matrix(polar_generators(body)), LINF


@dataclass(frozen=True)
class Omega2Norm:
    """``ω2(u) = γ2(J_1 U J_2^t)`` bracketed by ``interval``.

    ``gram`` is the matrix ``G_ij = <u, v_i ⊗ w_j>`` over the polar generators
    (or the ``Q^{1/2}`` rows of an ellipsoid factor); ``gamma2`` holds the
    factorization and dual certificates for it.
    """

    interval: Interval
    gram: np.ndarray
    gamma2: Gamma2Result
    embeddings: tuple = field(repr=False)

    @property
    def lo(self) -> float:
        return self.interval.lo

    @property
    def hi(self) -> float:
        return self.interval.hi

    @property
    def tol(self) -> float:
        return self.gamma2.tol

    def verify(self, tol: float = 1e-8) -> bool:
        return self.gamma2.verify(self.gram, tol)

    def cut(self) -> np.ndarray:
        """Flat functional ``c`` with ``<c, u> = lo`` here and ``<c, v> <= ω2(v)`` everywhere."""
        J1, J2 = self.embeddings
        return (J1.T @ self.gamma2.dual @ J2).reshape(-1)


def omega2_norm(u, P: Body, Q: Body, tol: float = DEFAULT_TOL) -> Omega2Norm:
    u = as_tensor(u)
    _check_factors(u, P, Q)
    J1, s1 = _embedding(P)
    J2, s2 = _embedding(Q)
    if J1.shape[0] * J2.shape[0] > MAX_ENTRIES:
        raise DeskScaleError(
            f"desk-scale limit: {J1.shape[0]} x {J2.shape[0]} polar generators exceed {MAX_ENTRIES}"
        )
    G = J1 @ u.as_float() @ J2.T
    res = gamma2_norm(G, tol=tol, sides=(s1, s2))
    return Omega2Norm(res.interval, G, res, (J1, J2))


# --------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class NormReport:
    eps: EpsNorm
    pi: PiNorm
    omega2: Omega2Norm

    def sandwich_holds(self, tol: float = 1e-6) -> bool:
        return float(self.eps.value) <= self.omega2.hi + tol and self.omega2.lo <= float(self.pi.value) + tol

    def verify(self, u) -> bool:
        u = as_tensor(u)
        return (self.eps.verify(u) and self.pi.verify(u) and self.omega2.verify()
                and self.sandwich_holds())

    def to_dict(self) -> dict:
        g = self.omega2.gamma2
        return {
            "eps": format_rational(self.eps.value),
            "eps_pair": [[format_rational(a) for a in v] for v in self.eps.pair],
            "pi": format_rational(self.pi.value),
            "pi_terms": [[format_rational(c), a, b] for c, a, b in self.pi.terms],
            "pi_dual": [format_rational(a) for a in self.pi.dual],
            "omega2": [float(self.omega2.lo), float(self.omega2.hi)],
            "omega2_tol": self.omega2.tol,
            "omega2_factors": [g.left.tolist(), g.right.tolist()],
        }


def norm_report(u, P: Body, Q: Body, tol: float = DEFAULT_TOL) -> NormReport:
    u = as_tensor(u)
    return NormReport(eps_norm(u, P, Q), pi_norm(u, P, Q), omega2_norm(u, P, Q, tol))
