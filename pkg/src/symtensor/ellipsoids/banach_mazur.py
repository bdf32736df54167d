"""Banach–Mazur certificates ``Q ⊆ T P ⊆ λ Q`` and their tensor products."""
from __future__ import annotations

from dataclasses import dataclass

from ..convex.bodies import (
    Body,
    as_vpolytope,
    contains,
    linear_image,
    scaled,
)
from ..convex.rational import as_rational, kron_mat, mat
from ..tensor.products import eps_product, pi_product
from ..tensor.shape import EPS, PI, ProductKind


class InternalInconsistencyError(AssertionError):
    """A certificate built from verified inputs failed its own check."""


@dataclass(frozen=True)
class BanachMazurCertificate:
    """Witness that ``δ^BM(P, Q) <= lam``: ``Q ⊆ T P ⊆ lam Q``, checked exactly."""

    P: Body
    Q: Body
    T: tuple
    lam: object

    def image(self) -> Body:
        return linear_image(self.P, self.T)

    def verify(self) -> bool:
        TP = self.image()
        return bool(contains(TP, self.Q)) and bool(contains(scaled(self.Q, self.lam), TP))


def _max_gauge(outer: Body, points) -> object:
    return max(outer.gauge(p) for p in points)


def bm_certificate(P: Body, Q: Body, T) -> BanachMazurCertificate:
    """Rescale an invertible ``T`` so that ``Q ⊆ T P`` is tight and read off ``lam``."""
    T = mat(T)
    Pv, Qv = as_vpolytope(P), as_vpolytope(Q)
    TP = linear_image(Pv, T)
    s = _max_gauge(TP, Qv.generators)  # Q ⊆ s T P
    T2 = tuple(tuple(s * a for a in row) for row in T)
    lam = _max_gauge(Qv, linear_image(Pv, T2).generators)
    return BanachMazurCertificate(P, Q, T2, as_rational(lam))


def _product(kind: ProductKind, bodies):
    return pi_product(*bodies) if kind == PI else eps_product(*bodies)


def bm_product_certificate(certs, kind=PI) -> BanachMazurCertificate:
    """Compose factor certificates: ``S = T_1 ⊗ ... ⊗ T_l`` and ``λ = prod λ_i``."""
    kind = ProductKind.parse(kind)
    if kind not in (PI, EPS):
        raise ValueError("product certificates are implemented for pi and eps")
    certs = list(certs)
    for c in certs:
        if not c.verify():
            raise ValueError("factor certificate does not verify")
    S = kron_mat(*(c.T for c in certs))
    lam = as_rational(1)
    for c in certs:
        lam *= c.lam
    out = BanachMazurCertificate(_product(kind, [c.P for c in certs]),
                                 _product(kind, [c.Q for c in certs]), S, lam)
    if not out.verify():
        raise InternalInconsistencyError("product certificate failed verification")
    return out


__all__ = [
    "BanachMazurCertificate",
    "InternalInconsistencyError",
    "bm_certificate",
    "bm_product_certificate",
]
