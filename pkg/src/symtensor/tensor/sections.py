"""Sections by subspaces and images under surjective maps."""
from __future__ import annotations

from ..convex.bodies import (
    Body,
    DegenerateBodyError,
    DimensionMismatchError,
    Ellipsoid,
    HPolytope,
    OracleBody,
    VPolytope,
    linear_image,
    reduce_generators,
)
from ..convex.lp import preimage_support
from ..convex.rational import matmul, matvec, rank, to_float_matrix, transpose, vec


def section_body(body: Body, basis) -> Body:
    """``body ∩ span(basis)`` in the coordinates of ``basis``.

    A point ``t`` stands for ``sum_i t_i b_i``, so the section gauge at ``t``
    is the ambient gauge at ``B t``.  Any independent basis works; an
    orthonormal one reproduces the induced inner product.
    """
    basis = [vec(b) for b in basis]
    if not basis or any(len(b) != body.dim for b in basis):
        raise DimensionMismatchError("basis vectors must live in the body's space")
    if rank(basis) < len(basis):
        raise DegenerateBodyError("section basis is linearly dependent")
    B = transpose(basis)  # dim x k
    k = len(basis)
    if isinstance(body, HPolytope):
        normals = [matvec(basis, a) for a in body.facet_normals]
        return HPolytope([a for a in normals if any(a)], k,
                         provenance={"construction": "section", "of": body.kind})
    if isinstance(body, Ellipsoid):
        if body.is_exact:
            shape = matmul(matmul(basis, body.exact_shape), B)
            return Ellipsoid(None, exact_shape=shape, provenance={"construction": "section"})
        Bf = to_float_matrix(B)
        return Ellipsoid(Bf.T @ body.shape @ Bf, provenance={"construction": "section"})
    support_fn = None
    if isinstance(body, VPolytope):
        gens = body.generators

        def support_fn(y):
            return preimage_support(B, gens, y)

    return OracleBody(k, lambda t: body.gauge(matvec(B, t)), support_fn,
                      {"construction": "section", "of": body.kind}, body.exact)


def image_body(body: VPolytope, T) -> VPolytope:
    """``T(body)`` for a surjective rational ``T``, with redundant generators removed."""
    if not isinstance(body, VPolytope):
        raise TypeError("image_body takes a V-polytope")
    image = reduce_generators(linear_image(body, T))
    image.provenance["construction"] = "image"
    return image


def coordinate_basis(dim: int, coords) -> list:
    """Standard basis vectors ``e_i`` for ``i`` in ``coords``."""
    return [tuple(int(j == i) for j in range(dim)) for i in coords]


def coordinate_projection(dim: int, coords) -> tuple:
    """Matrix of ``x -> (x_i)_{i in coords}``."""
    return tuple(tuple(int(j == i) for j in range(dim)) for i in coords)

