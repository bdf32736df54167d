"""Seeded bodies, maps and sample points.  The seed alone determines every object."""
from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from ..convex.bodies import Ellipsoid, HPolytope, VPolytope
from ..convex.rational import identity, rank, vec

MAX_NUMERATOR = 5
MAX_DENOMINATOR = 4
_RETRIES = 1000


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for ``(seed, stream...)``, so items can be rebuilt one at a time."""
    return np.random.default_rng([int(seed), *(int(s) for s in stream)])


def rational(rng: np.random.Generator, num: int = MAX_NUMERATOR, den: int = MAX_DENOMINATOR):
    return mpq(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


def rational_vector(rng, d: int, nonzero: bool = True, **bounds) -> tuple:
    while True:
        v = vec(rational(rng, **bounds) for _ in range(d))
        if any(v) or not nonzero:
            return v


def rational_points(rng, d: int, count: int) -> list:
    return [rational_vector(rng, d) for _ in range(count)]


def builtin_ball(p: str, d: int):
    """``B_p^d`` for ``p`` in ``1``, ``2``, ``inf``."""
    p = str(p).lower()
    if d < 1:
        raise ValueError("d must be at least 1")
    if p == "1":
        return VPolytope(identity(d), provenance={"construction": "builtin", "p": "1"})
    if p in ("inf", "infinity", "∞"):
        return HPolytope(identity(d), provenance={"construction": "builtin", "p": "inf"})
    if p == "2":
        return Ellipsoid(None, exact_shape=identity(d), provenance={"construction": "builtin", "p": "2"})
    raise ValueError(f"p must be 1, 2 or inf, not {p!r}")


def _spanning_rows(rng, d: int, count: int) -> list:
    if count < d:
        raise ValueError(f"need at least {d} vectors to span R^{d}")
    for _ in range(_RETRIES):
        rows = [rational_vector(rng, d) for _ in range(count)]
        if rank(rows) == d:
            return rows
    raise RuntimeError("could not draw a spanning set")


def random_vpolytope(rng, d: int, gens: int) -> VPolytope:
    return VPolytope(_spanning_rows(rng, d, gens), d, provenance={"construction": "random-v"})


def random_hpolytope(rng, d: int, facets: int) -> HPolytope:
    return HPolytope(_spanning_rows(rng, d, facets), d, provenance={"construction": "random-h"})


def random_ellipsoid(rng, d: int) -> Ellipsoid:
    """``A^T A + I/4`` with a rational ``A``: exact and positive definite."""
    A = [rational_vector(rng, d, nonzero=False) for _ in range(d)]
    Q = [[sum((A[k][i] * A[k][j] for k in range(d)), mpq(0)) + (mpq(1, 4) if i == j else 0)
          for j in range(d)] for i in range(d)]
    return Ellipsoid(None, exact_shape=Q, provenance={"construction": "random-ellipsoid"})


def random_invertible(rng, d: int) -> tuple:
    for _ in range(_RETRIES):
        T = tuple(rational_vector(rng, d, nonzero=False, num=3, den=2) for _ in range(d))
        if rank(T) == d:
            return T
    raise RuntimeError("could not draw an invertible map")


def random_tensor(rng, m: int, n: int) -> tuple:
    return rational_vector(rng, m * n)


__all__ = [
    "builtin_ball",
    "random_ellipsoid",
    "random_hpolytope",
    "random_invertible",
    "random_tensor",
    "random_vpolytope",
    "rational",
    "rational_points",
    "rational_vector",
    "rng_for",
]
