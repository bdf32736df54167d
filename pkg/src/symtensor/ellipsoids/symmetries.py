"""Symmetry groups of bodies and the dimension of their commutant.

A body has enough symmetries when only multiples of the identity commute with
all of its symmetries.  The commutant is the null space of the linear system
``S W - W S = 0`` (one block of equations per generator ``W``), solved over
the rationals so that "dimension 1" is an exact statement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..convex.bodies import Body, Ellipsoid, HPolytope, VPolytope
from ..convex.rational import as_rational, canonical_sign, identity, kron_mat, mat, matmul, matvec, rank, transpose


def _is_orthogonal(W) -> bool:
    return matmul(W, transpose(W)) == identity(len(W))


@dataclass(frozen=True)
class GroupGenerators:
    dim: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(mat(W) for W in self.generators)
        for W in gens:
            if len(W) != self.dim or any(len(r) != self.dim for r in W):
                raise ValueError("generator has the wrong size")
            if not _is_orthogonal(W):
                raise ValueError("generators must be orthogonal")
        object.__setattr__(self, "generators", gens)

    def preserves(self, body: Body) -> bool:
        """Each generator maps the body onto itself."""
        if body.dim != self.dim:
            return False
        if isinstance(body, Ellipsoid):
            Q = body.shape
            return all(np.allclose(np.asarray(W, float).T @ Q @ np.asarray(W, float), Q) for W in self.generators)
        if isinstance(body, VPolytope):
            vectors = body.generators
        elif isinstance(body, HPolytope):
            # W orthogonal: W^{-T} = W, so facet normals move like points
            vectors = body.facet_normals
        else:
            raise TypeError("symmetry check needs a polytope or an ellipsoid")
        # generators are stored one per ± pair
        ref = {canonical_sign(v) for v in vectors}
        return all({canonical_sign(matvec(W, v)) for v in vectors} == ref for W in self.generators)

    def order(self) -> int:
        return len(group_closure(self))


def _perm_matrix(perm) -> tuple:
    d = len(perm)
    return tuple(tuple(as_rational(1 if perm[i] == j else 0) for j in range(d)) for i in range(d))


def signed_permutation_group(d: int) -> GroupGenerators:
    """Generators of the hyperoctahedral group: a transposition, a sign flip and the d-cycle."""
    if d < 1:
        raise ValueError("d must be at least 1")
    flip = tuple(tuple(as_rational((-1 if i == 0 else 1) if i == j else 0) for j in range(d)) for i in range(d))
    gens = [flip]
    if d >= 2:
        gens.append(_perm_matrix([1, 0] + list(range(2, d))))
        gens.append(_perm_matrix([(i + 1) % d for i in range(d)]))
    unique = []
    for W in gens:
        if W not in unique and W != identity(d):
            unique.append(W)
    return GroupGenerators(d, tuple(unique))


def group_closure(group: GroupGenerators, limit: int = 100_000) -> set:
    """All products of generators (a finite group, so inverses come for free)."""
    seen = {identity(group.dim)}
    frontier = [identity(group.dim)]
    while frontier:
        nxt = []
        for A in frontier:
            for W in group.generators:
                B = matmul(A, W)
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        if len(seen) > limit:
            raise ValueError("group closure exceeded the size limit")
        frontier = nxt
    return seen


def kron_group(*groups: GroupGenerators) -> GroupGenerators:
    """Generators ``I ⊗ ... ⊗ w ⊗ ... ⊗ I`` of the product of the factor groups."""
    dims = [g.dim for g in groups]
    gens = []
    for k, g in enumerate(groups):
        for W in g.generators:
            factors = [W if i == k else identity(d) for i, d in enumerate(dims)]
            gens.append(kron_mat(*factors))
    return GroupGenerators(int(np.prod(dims)), tuple(gens))


def commutant_equations(group: GroupGenerators) -> list:
    """Rows of ``vec(S W - W S) = 0`` in the unknowns ``vec(S)`` (row-major)."""
    N = group.dim
    zero = as_rational(0)
    rows = []
    for W in group.generators:
        for i in range(N):
            for j in range(N):
                row = [zero] * (N * N)
                for k in range(N):
                    row[i * N + k] += W[k][j]  # (S W)_ij
                    row[k * N + j] -= W[i][k]  # (W S)_ij
                if any(row):
                    rows.append(tuple(row))
    return rows


def commutant_dimension(*groups: GroupGenerators) -> int:
    """Dimension of the matrices commuting with every element of ``G_1 ⊗ ... ⊗ G_l``."""
    if len(groups) == 1 and not isinstance(groups[0], GroupGenerators):
        groups = tuple(groups[0])
    group = groups[0] if len(groups) == 1 else kron_group(*groups)
    rows = commutant_equations(group)
    n = group.dim ** 2
    return n - (rank(rows) if rows else 0)


__all__ = [
    "GroupGenerators",
    "commutant_dimension",
    "commutant_equations",
    "group_closure",
    "kron_group",
    "signed_permutation_group",
]
