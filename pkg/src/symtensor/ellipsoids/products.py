"""Löwner/John ellipsoids of tensor products versus Hilbertian products of the factors'."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..convex.bodies import Body, Ellipsoid
from ..tensor.products import eps_product, hilbert2_product, pi_product
from ..tensor.shape import EPS, PI, ProductKind
from .mvee import DEFAULT_TOL, john, loewner, relative_distance


@dataclass(frozen=True)
class ProductCheckReport:
    kind: str
    ellipsoid: str  # "loewner" or "john"
    product_shape: np.ndarray
    factor_shape: np.ndarray
    distance: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.distance <= self.tol

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ellipsoid": self.ellipsoid,
            "product_shape": self.product_shape.tolist(),
            "factor_shape": self.factor_shape.tolist(),
            "distance": self.distance,
            "tol": self.tol,
            "passed": self.passed,
        }


def loewner_john_product_check(P: Body, Q: Body, kind=PI, tol: float = 1e-3,
                               solver_tol: float = 1e-9) -> ProductCheckReport:
    """Compare the ellipsoid of ``P ⊗_kind Q`` with the ⊗2 product of the factors' ellipsoids.

    The Löwner comparison is made for ``pi`` and the John comparison for
    ``eps``; other kinds are refused.  Ellipsoid factors are their own
    Löwner and John ellipsoids, and then both sides are ``Q_1 ⊗ Q_2``.
    """
    kind = ProductKind.parse(kind)
    if kind not in (PI, EPS):
        raise ValueError("the product check is stated for pi (Löwner) and eps (John) only")
    if isinstance(P, Ellipsoid) and isinstance(Q, Ellipsoid):
        both = hilbert2_product(P, Q).shape
        which = "loewner" if kind == PI else "john"
        return ProductCheckReport(str(kind), which, both, both, 0.0, tol)
    if kind == PI:
        left = loewner(pi_product(P, Q), solver_tol).shape
        right = hilbert2_product(loewner(P, solver_tol).ellipsoid, loewner(Q, solver_tol).ellipsoid).shape
        which = "loewner"
    else:
        left = john(eps_product(P, Q), solver_tol).shape
        right = hilbert2_product(john(P, solver_tol), john(Q, solver_tol)).shape
        which = "john"
    return ProductCheckReport(str(kind), which, left, right, relative_distance(left, right), tol)


__all__ = ["ProductCheckReport", "loewner_john_product_check", "DEFAULT_TOL"]
