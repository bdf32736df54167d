"""Tensor products of 0-symmetric bodies, their duals, and a kind dispatcher."""
from __future__ import annotations

from itertools import product as cartesian

import numpy as np

from ..convex.bodies import (
    Body,
    Ellipsoid,
    HPolytope,
    Interval,
    OracleBody,
    RepresentationError,
    VPolytope,
    as_vpolytope,
    polar_generators,
    reduce_generators,
)
from ..convex.rational import kron_mat, kron_vec, to_float, to_float_matrix
from .hulls import eps_proj_product, pi_inj_product
from .shape import EPS, HILBERT2, OMEGA2, PI, ProductKind


def _check_order(bodies, kind: ProductKind) -> list:
    bodies = list(bodies)
    if len(bodies) < 1:
        raise ValueError("need at least one factor")
    if kind.order_two_only and len(bodies) != 2:
        raise ValueError(f"{kind.base} products are defined for exactly two factors")
    return bodies


def pi_product(*bodies: Body) -> VPolytope:
    """Projective product: hull of ``±g_1 ⊗ ... ⊗ g_l`` over factor generators, reduced."""
    factors = [as_vpolytope(b) for b in _check_order(bodies, PI)]
    gens = [kron_vec(*combo) for combo in cartesian(*(f.generators for f in factors))]
    raw = VPolytope(gens, provenance={"construction": "pi", "factor_dims": [f.dim for f in factors]})
    return reduce_generators(raw)


def eps_product(*bodies: Body) -> Body:
    """Injective product: ``{u : |<u, v_1 ⊗ ... ⊗ v_l>| <= 1}`` over polar generators.

    Polytope factors give an exact H-polytope equal to the polar of the
    projective product of the polars.  Two factors with an ellipsoid among
    them give an oracle body with a closed-form gauge.
    """
    bodies = _check_order(bodies, EPS)
    if any(isinstance(b, Ellipsoid) for b in bodies):
        if len(bodies) != 2 or any(isinstance(b, OracleBody) for b in bodies):
            raise RepresentationError("ellipsoid factors are supported in two-factor products only")
        return _eps_with_ellipsoid(*bodies)
    polars = [VPolytope(polar_generators(b)) for b in bodies]
    normals = [kron_vec(*combo) for combo in cartesian(*(p.generators for p in polars))]
    reduced = reduce_generators(VPolytope(normals))
    prov = {
        "construction": "eps",
        "factor_dims": [b.dim for b in bodies],
        "raw_normals": reduced.provenance["raw_generators"],
        "reduced_normals": reduced.provenance["reduced_generators"],
    }
    return HPolytope(reduced.generators, provenance=prov)


def _dual_side(body: Body):
    """Return ``("ellipsoid", Q^{1/2})`` or ``("polytope", polar generators as floats)``."""
    if isinstance(body, Ellipsoid):
        return "ellipsoid", body.root
    return "polytope", to_float_matrix(polar_generators(body))


def _eps_with_ellipsoid(P: Body, Q: Body) -> OracleBody:
    d1, d2 = P.dim, Q.dim
    side1, A = _dual_side(P)
    side2, B = _dual_side(Q)

    def gauge_fn(u):
        U = to_float(u).reshape(d1, d2)
        if side1 == "ellipsoid" and side2 == "ellipsoid":
            val = np.linalg.norm(A @ U @ B, 2)
        elif side1 == "ellipsoid":
            val = np.linalg.norm(A @ U @ B.T, axis=0).max()
        else:
            val = np.linalg.norm(A @ U @ B, axis=1).max()
        return Interval.around(float(val), 1e-11)

    return OracleBody(d1 * d2, gauge_fn, None, {"construction": "eps", "factors": [side1, side2]},
                      exact=False)


def hilbert2_product(*bodies: Ellipsoid) -> Ellipsoid:
    """Hilbertian product of ellipsoids: shape ``Q_1 ⊗ ... ⊗ Q_l``."""
    bodies = _check_order(bodies, HILBERT2)
    if not all(isinstance(b, Ellipsoid) for b in bodies):
        raise RepresentationError("hilbert2 products take ellipsoid factors")
    prov = {"construction": "hilbert2", "factor_dims": [b.dim for b in bodies]}
    if all(b.is_exact for b in bodies):
        return Ellipsoid(None, exact_shape=kron_mat(*(b.exact_shape for b in bodies)), provenance=prov)
    shape = bodies[0].shape
    for b in bodies[1:]:
        shape = np.kron(shape, b.shape)
    return Ellipsoid(shape, provenance=prov)


def dual_product(kind, bodies) -> Body:
    """``polar(kind-product of the polars)``."""
    kind = ProductKind.parse(kind)
    inner = tensor_product(kind, [b.polar() for b in bodies])
    out = inner.polar()
    if isinstance(out, OracleBody):
        out.provenance["construction"] = f"dual:{kind}"
    return out


def tensor_product(kind, bodies) -> Body:
    """Dispatch on a :class:`ProductKind` (or its string form, e.g. ``"dual:pi"``)."""
    kind = ProductKind.parse(kind)
    bodies = _check_order(bodies, kind)
    if kind.dual:
        body = dual_product(kind.dual_of(), bodies)
    elif kind.base == "pi":
        body = pi_product(*bodies)
    elif kind.base == "eps":
        body = eps_product(*bodies)
    elif kind.base == "hilbert2":
        body = hilbert2_product(*bodies)
    elif kind.base == "omega2":
        from ..norms.omega2 import omega2_product

        body = omega2_product(*bodies)
    elif kind.base == "pi_inj":
        body = pi_inj_product(*bodies)
    else:
        body = eps_proj_product(*bodies)
    if isinstance(body, OracleBody):
        _attach_recipe(body, kind, bodies)
    return body


def _attach_recipe(body: OracleBody, kind: ProductKind, bodies) -> None:
    from ..convex.io import body_to_dict

    try:
        factors = [body_to_dict(b) for b in bodies]
    except (RepresentationError, TypeError):
        return
    body.provenance["recipe"] = {"kind": str(kind), "factors": factors}


def build_from_recipe(recipe: dict) -> Body:
    from ..convex.io import body_from_dict

    return tensor_product(recipe["kind"], [body_from_dict(f) for f in recipe["factors"]])


__all__ = [
    "pi_product",
    "eps_product",
    "hilbert2_product",
    "dual_product",
    "tensor_product",
    "build_from_recipe",
    "pi_inj_product",
    "eps_proj_product",
]
