"""Vertex enumeration for 0-symmetric H-polytopes ``{x : |<a_i, x>| <= 1}``.

Brute force over d-subsets of normals and sign patterns, with a float
pre-filter and exact confirmation.  Meant for the small dimensions this
package works in, and refuses anything bigger than ``MAX_DIM``.
"""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from .rational import ONE, canonical_sign, dot, inverse, matvec, sign_vectors

MAX_DIM = 12
DEFAULT_BUDGET = 400_000


class DeskScaleError(ValueError):
    """Raised when a computation would exceed the desk-scale limits."""


def symmetric_vertices(normals, dim: int, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """Vertices of ``{x : |<a, x>| <= 1 for a in normals}``, one per antipodal pair.

    The result is sorted (descending lexicographic) so equal polytopes give
    equal vertex lists.
    """
    normals = [tuple(a) for a in normals]
    if dim > MAX_DIM:
        raise DeskScaleError(f"vertex enumeration refused in dimension {dim} > {MAX_DIM}")
    n = len(normals)
    work = comb(n, dim) * (1 << (dim - 1))
    if work > budget:
        raise DeskScaleError(
            f"vertex enumeration needs {work} candidate solves (> budget {budget})"
        )
    Af = np.array([[float(a) for a in row] for row in normals], dtype=float)
    scale = np.abs(Af).max(axis=1)
    signs = sign_vectors(dim)
    signs_f = np.array([[float(s) for s in sv] for sv in signs], dtype=float).T
    found = set()
    for subset in combinations(range(n), dim):
        sub = Af[list(subset)]
        try:
            cond = np.linalg.cond(sub)
        except np.linalg.LinAlgError:
            cond = np.inf
        exact_only = not np.isfinite(cond) or cond > 1e8
        if not exact_only:
            xs = np.linalg.solve(sub, signs_f)  # dim x 2^(dim-1)
            slack = np.abs(Af @ xs).max(axis=0)
            tol = 1e-7 * (1 + np.abs(xs).max(axis=0) * scale.max())
            candidates = [k for k in range(xs.shape[1]) if slack[k] <= 1 + tol[k]]
            if not candidates:
                continue
        else:
            candidates = range(len(signs))
        S = [normals[i] for i in subset]
        try:
            Sinv = inverse(S)
        except ValueError:
            continue
        for k in candidates:
            x = matvec(Sinv, signs[k])
            if all(abs(dot(a, x)) <= ONE for a in normals):
                found.add(canonical_sign(x))
    return sorted(found, reverse=True)
