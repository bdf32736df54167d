"""0-symmetric convex bodies and their gauge/support/polar calculus.

Four representations share one interface:

* :class:`VPolytope` -- ``conv{±g}`` over stored generators (one per antipodal pair),
* :class:`HPolytope` -- ``{x : |<a, x>| <= 1}`` over stored facet normals,
* :class:`Ellipsoid` -- ``{x : x^T Q x <= 1}`` with a floating SPD shape,
* :class:`OracleBody` -- a body known only through gauge (and optionally
  support) evaluators.

Polytope computations are exact rationals.  Ellipsoid values are floats wrapped
in an :class:`Interval` carrying a rounding allowance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .enumeration import DeskScaleError, symmetric_vertices
from .lp import L1Decomposition, LinProgram, l1_decomposition, lp_solve
from .rational import (
    ONE,
    ZERO,
    Rational,
    as_rational,
    canonical_sign,
    dot,
    inverse,
    matvec,
    rank,
    to_float,
    to_float_matrix,
    transpose,
    vec,
)

__all__ = [
    "Body",
    "VPolytope",
    "HPolytope",
    "Ellipsoid",
    "OracleBody",
    "Interval",
    "Containment",
    "DegenerateBodyError",
    "DimensionMismatchError",
    "RepresentationError",
    "DeskScaleError",
    "gauge",
    "support",
    "polar",
    "contains",
    "inclusion_factor",
    "reduce_generators",
    "linear_image",
    "scaled",
    "as_vpolytope",
    "as_hpolytope",
    "has_interior_origin",
]

ROUNDING = 1e-12


class DegenerateBodyError(ValueError):
    """The data does not describe a body with 0 in its interior."""


class DimensionMismatchError(ValueError):
    pass


class RepresentationError(ValueError):
    """The requested computation is not available for this representation."""


@dataclass(frozen=True)
class Interval:
    """Closed float interval ``[lo, hi]`` holding a numerically computed value."""

    lo: float
    hi: float

    @classmethod
    def around(cls, value: float, rel: float = ROUNDING) -> "Interval":
        pad = abs(value) * rel
        return cls(value - pad, value + pad)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= float(value) <= self.hi

    def __float__(self) -> float:
        return self.mid

    def scaled(self, c: float) -> "Interval":
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))


def _upper(value) -> float:
    return value.hi if isinstance(value, Interval) else float(value)


def _check_dim(body, x):
    if len(x) != body.dim:
        raise DimensionMismatchError(f"point of dimension {len(x)} for body of dimension {body.dim}")


class Body:
    """Common interface of every representation."""

    dim: int
    exact: bool = True
    kind: str = "body"

    def gauge(self, x):
        raise NotImplementedError

    def support(self, y):
        raise NotImplementedError

    def polar(self) -> "Body":
        raise NotImplementedError

    def contains_point(self, x) -> bool:
        """Membership via the Minkowski functional: ``x in P <=> g_P(x) <= 1``."""
        g = self.gauge(x)
        if isinstance(g, Interval):
            return g.lo <= 1
        return g <= 1


def _as_generator_tuple(vectors, what: str):
    out = []
    seen = set()
    dims = set()
    for v in vectors:
        v = canonical_sign(vec(v))
        dims.add(len(v))
        if not any(v):
            raise DegenerateBodyError(f"zero {what}")
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out), dims


@dataclass(frozen=True)
class VPolytope(Body):
    """``conv{±g : g in generators}``."""

    generators: tuple
    dim: int | None = None
    provenance: dict = field(default_factory=dict, compare=False, repr=False)

    kind = "vpolytope"

    def __post_init__(self):
        gens, dims = _as_generator_tuple(self.generators, "generator")
        if not gens:
            raise DegenerateBodyError("a V-polytope needs at least one generator")
        if len(dims) != 1:
            raise DimensionMismatchError("generators of different lengths")
        d = dims.pop()
        if self.dim is not None and self.dim != d:
            raise DimensionMismatchError(f"declared dim {self.dim} but generators have length {d}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "dim", d)
        if rank(gens) < d:
            raise DegenerateBodyError("generators do not span the space; 0 is not interior")

    def gauge(self, x):
        return self.gauge_certificate(x).value

    def gauge_certificate(self, x) -> L1Decomposition:
        x = vec(x)
        _check_dim(self, x)
        dec = l1_decomposition(self.generators, x)
        if dec is None:  # impossible for spanning generators
            raise DegenerateBodyError("point outside generator span")
        return dec

    def support(self, y):
        y = vec(y)
        _check_dim(self, y)
        return max(abs(dot(g, y)) for g in self.generators)

    def polar(self) -> "HPolytope":
        return HPolytope(self.generators, self.dim)

    @cached_property
    def facet_normals(self) -> tuple:
        """Facet normals ``a`` with ``P = {|<a, x>| <= 1}`` (vertex enumeration of the polar)."""
        return tuple(symmetric_vertices(self.generators, self.dim))

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_vertices(self) -> int:
        """Vertex count with both signs, assuming reduced generators."""
        return 2 * len(self.generators)


@dataclass(frozen=True)
class HPolytope(Body):
    """``{x : |<a, x>| <= 1 for a in facet_normals}``."""

    facet_normals: tuple
    dim: int | None = None
    provenance: dict = field(default_factory=dict, compare=False, repr=False)

    kind = "hpolytope"

    def __post_init__(self):
        normals, dims = _as_generator_tuple(self.facet_normals, "facet normal")
        if not normals:
            raise DegenerateBodyError("an H-polytope needs at least one facet normal")
        if len(dims) != 1:
            raise DimensionMismatchError("facet normals of different lengths")
        d = dims.pop()
        if self.dim is not None and self.dim != d:
            raise DimensionMismatchError(f"declared dim {self.dim} but normals have length {d}")
        object.__setattr__(self, "facet_normals", normals)
        object.__setattr__(self, "dim", d)
        if rank(normals) < d:
            raise DegenerateBodyError("facet normals do not span the space; body is unbounded")

    def gauge(self, x):
        x = vec(x)
        _check_dim(self, x)
        return max(abs(dot(a, x)) for a in self.facet_normals)

    def support(self, y):
        return self.support_certificate(y).value

    def support_certificate(self, y) -> L1Decomposition:
        y = vec(y)
        _check_dim(self, y)
        return l1_decomposition(self.facet_normals, y)

    def polar(self) -> VPolytope:
        return VPolytope(self.facet_normals, self.dim)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(symmetric_vertices(self.facet_normals, self.dim))

    @property
    def n_facets(self) -> int:
        """Facet count with both signs, assuming irredundant normals."""
        return 2 * len(self.facet_normals)


class Ellipsoid(Body):
    """``{x : x^T Q x <= 1}`` for a symmetric positive definite ``Q``.

    Pass rationals as ``exact_shape`` to keep an exact copy of ``Q``; polar
    then inverts exactly.
    """

    kind = "ellipsoid"
    exact = False

    def __init__(self, shape, exact_shape=None, provenance=None):
        if exact_shape is None and shape is not None and not isinstance(shape, np.ndarray):
            try:
                exact_shape = tuple(vec(r) for r in shape)
            except TypeError:
                exact_shape = None
        if exact_shape is not None:
            exact_shape = tuple(vec(r) for r in exact_shape)
            Q = to_float_matrix(exact_shape)
            if any(exact_shape[i][j] != exact_shape[j][i]
                   for i in range(len(exact_shape)) for j in range(i)):
                raise DegenerateBodyError("ellipsoid shape is not symmetric")
        else:
            Q = np.array(shape, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionMismatchError("ellipsoid shape must be square")
        scale = max(1.0, float(np.abs(Q).max()))
        if not np.allclose(Q, Q.T, atol=1e-12 * scale, rtol=0):
            raise DegenerateBodyError("ellipsoid shape is not symmetric")
        Q = 0.5 * (Q + Q.T)
        eig = np.linalg.eigvalsh(Q)
        if eig[0] <= 1e-12 * max(1.0, eig[-1]):
            raise DegenerateBodyError("ellipsoid shape is not positive definite")
        Q.setflags(write=False)
        self.shape = Q
        self.exact_shape = exact_shape
        self.dim = Q.shape[0]
        self.provenance = dict(provenance or {})

    def __repr__(self):
        return f"Ellipsoid(shape={self.shape.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, Ellipsoid) and np.array_equal(self.shape, other.shape)

    def __hash__(self):
        return hash(self.shape.tobytes())

    @property
    def is_exact(self) -> bool:
        return self.exact_shape is not None

    @cached_property
    def inverse_shape(self) -> np.ndarray:
        return np.linalg.inv(self.shape)

    @cached_property
    def root(self) -> np.ndarray:
        """Symmetric square root ``Q^{1/2}``; ``|Q^{1/2} x| = g(x)``."""
        w, V = np.linalg.eigh(self.shape)
        return (V * np.sqrt(w)) @ V.T

    def gauge(self, x) -> Interval:
        xf = _float_vec(x)
        _check_dim(self, xf)
        return Interval.around(math.sqrt(max(0.0, float(xf @ self.shape @ xf))))

    def support(self, y) -> Interval:
        yf = _float_vec(y)
        _check_dim(self, yf)
        return Interval.around(math.sqrt(max(0.0, float(yf @ self.inverse_shape @ yf))))

    def polar(self) -> "Ellipsoid":
        if self.exact_shape is not None:
            return Ellipsoid(None, exact_shape=inverse(self.exact_shape))
        return Ellipsoid(self.inverse_shape)


def _float_vec(x) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return x.astype(float)
    return np.array([float(a) for a in x], dtype=float)


class OracleBody(Body):
    """A body known through its gauge evaluator (and optionally its support).

    ``gauge_fn`` maps a rational point to an exact rational or an
    :class:`Interval`; ``support_fn`` does the same for the support function,
    which is the gauge of the polar.
    """

    kind = "oracle"

    def __init__(self, dim: int, gauge_fn: Callable, support_fn: Callable | None = None,
                 provenance: dict | None = None, exact: bool = True):
        self.dim = int(dim)
        self._gauge_fn = gauge_fn
        self._support_fn = support_fn
        self.provenance = dict(provenance or {})
        self.exact = exact

    def __repr__(self):
        return f"OracleBody(dim={self.dim}, provenance={self.provenance!r})"

    def gauge(self, x):
        x = vec(x)
        _check_dim(self, x)
        return self._gauge_fn(x)

    def support(self, y):
        if self._support_fn is None:
            raise RepresentationError("support function unavailable for this oracle body")
        y = vec(y)
        _check_dim(self, y)
        return self._support_fn(y)

    @property
    def has_support(self) -> bool:
        return self._support_fn is not None

    def polar(self) -> "OracleBody":
        if self._support_fn is None:
            raise RepresentationError("polar of an oracle body needs its support function")
        prov = {"construction": "polar", "of": self.provenance}
        return OracleBody(self.dim, self._support_fn, self._gauge_fn, prov, self.exact)

    def check_homogeneity(self, points) -> bool:
        """Sampled positive homogeneity and definiteness of the gauge."""
        for x in points:
            x = vec(x)
            g1 = self.gauge(x)
            g2 = self.gauge(tuple(2 * a for a in x))
            if isinstance(g1, Interval) or isinstance(g2, Interval):
                lo1, hi1 = (g1.lo, g1.hi) if isinstance(g1, Interval) else (float(g1),) * 2
                lo2, hi2 = (g2.lo, g2.hi) if isinstance(g2, Interval) else (float(g2),) * 2
                if 2 * lo1 > hi2 + 1e-9 * abs(hi2) or lo2 > 2 * hi1 + 1e-9 * abs(hi1):
                    return False
            elif g2 != 2 * g1:
                return False
            if any(x) != (_upper(g1) > 0):
                return False
        return _upper(self.gauge((ZERO,) * self.dim)) == 0


# --------------------------------------------------------------------------
# module-level operations


def gauge(body: Body, x):
    """Minkowski functional ``g_P(x) = inf{t > 0 : x in tP}``."""
    return body.gauge(x)


def support(body: Body, y):
    """``h_P(y) = max_{x in P} <x, y>``, equal to the gauge of the polar at ``y``."""
    return body.support(y)


def polar(body: Body) -> Body:
    return body.polar()


def as_vpolytope(body: Body) -> VPolytope:
    if isinstance(body, VPolytope):
        return body
    if isinstance(body, HPolytope):
        return VPolytope(body.vertices, body.dim)
    raise RepresentationError(f"{body.kind} has no exact V-representation")


def as_hpolytope(body: Body) -> HPolytope:
    if isinstance(body, HPolytope):
        return body
    if isinstance(body, VPolytope):
        return HPolytope(body.facet_normals, body.dim)
    raise RepresentationError(f"{body.kind} has no exact H-representation")


def polar_generators(body: Body) -> tuple:
    """Generators of the polar body: facet normals of ``body`` as a V-list."""
    if isinstance(body, HPolytope):
        return body.facet_normals
    if isinstance(body, VPolytope):
        return body.facet_normals
    raise RepresentationError(f"polar of {body.kind} has no V-representation")


def has_interior_origin(generators) -> bool:
    """LP test that ``0`` is interior to ``conv{±g}``: every ``±e_i`` has a finite gauge."""
    gens = [vec(g) for g in generators]
    d = len(gens[0])
    k = len(gens)
    for i in range(d):
        e = [ZERO] * d
        e[i] = ONE
        # feasibility of sum c_k g_k = e_i
        prog = LinProgram([ZERO] * k, [tuple(g[r] for g in gens) for r in range(d)],
                          ["="] * d, e, bounds=[(None, None)] * k)
        if lp_solve(prog).status != "optimal":
            return False
    return True


def reduce_generators(p: VPolytope) -> VPolytope:
    """Drop every generator lying in the hull of ``±`` the others (one LP each)."""
    kept = list(p.generators)
    i = 0
    while i < len(kept):
        g = kept[i]
        others = kept[:i] + kept[i + 1:]
        dec = l1_decomposition(others, g) if others else None
        if dec is not None and dec.value <= 1:
            kept.pop(i)
        else:
            i += 1
    prov = dict(p.provenance)
    prov.setdefault("raw_generators", len(p.generators))
    prov["reduced_generators"] = len(kept)
    return VPolytope(kept, p.dim, provenance=prov)


def scaled(body: Body, factor) -> Body:
    """``factor * body`` for a positive factor."""
    if isinstance(body, Ellipsoid):
        f = float(factor)
        return Ellipsoid(body.shape / (f * f))
    t = as_rational(factor)
    if t <= 0:
        raise ValueError("scaling factor must be positive")
    if isinstance(body, VPolytope):
        return VPolytope([tuple(t * a for a in g) for g in body.generators], body.dim)
    if isinstance(body, HPolytope):
        return HPolytope([tuple(a / t for a in n) for n in body.facet_normals], body.dim)
    if isinstance(body, OracleBody):
        sup = body._support_fn
        return OracleBody(
            body.dim,
            lambda x: _div(body._gauge_fn(x), t),
            None if sup is None else (lambda y: _mul(sup(y), t)),
            {"construction": "scaled", "factor": str(t), "of": body.provenance},
            body.exact,
        )
    raise TypeError(body)


def _div(v, t):
    return v.scaled(1 / float(t)) if isinstance(v, Interval) else v / t


def _mul(v, t):
    return v.scaled(float(t)) if isinstance(v, Interval) else v * t


def linear_image(body: Body, T) -> Body:
    """Image ``T(body)``.  V-polytopes need ``T`` surjective, others invertible."""
    if isinstance(body, Ellipsoid):
        Tf = np.array(T, dtype=float) if isinstance(T, np.ndarray) else to_float_matrix(T)
        Ti = np.linalg.inv(Tf)
        return Ellipsoid(Ti.T @ body.shape @ Ti)
    T = tuple(vec(r) for r in T)
    if any(len(r) != body.dim for r in T):
        raise DimensionMismatchError("map columns must equal body dimension")
    if isinstance(body, VPolytope):
        if rank(T) != len(T):
            raise DegenerateBodyError("map is not surjective")
        gens = [matvec(T, g) for g in body.generators]
        return VPolytope([g for g in gens if any(g)], len(T))
    if len(T) != body.dim:
        raise DegenerateBodyError("map must be square and invertible")
    Tinv = inverse(T)
    if isinstance(body, HPolytope):
        TinvT = transpose(Tinv)
        return HPolytope([matvec(TinvT, a) for a in body.facet_normals], body.dim)
    if isinstance(body, OracleBody):
        Tt = transpose(T)
        sup = body._support_fn
        return OracleBody(
            body.dim,
            lambda y: body._gauge_fn(matvec(Tinv, y)),
            None if sup is None else (lambda z: sup(matvec(Tt, z))),
            {"construction": "image", "of": body.provenance},
            body.exact,
        )
    raise TypeError(body)


# --------------------------------------------------------------------------
# containment


@dataclass(frozen=True)
class Containment:
    """Outcome of an inclusion test ``inner ⊆ outer``.

    ``factor`` is the smallest ``s`` with ``inner ⊆ s * outer``; ``witness`` is
    a point of ``inner`` whose outer gauge equals ``factor``.
    """

    holds: bool
    factor: object
    witness: tuple | None
    exact: bool
    sampled: bool = False

    def __bool__(self) -> bool:
        return self.holds

    @property
    def witness_gauge(self):
        return self.factor


def inclusion_factor(outer: Body, inner: Body, *, allow_sampling: bool = False,
                     samples: int = 200, seed: int = 0):
    """Return ``(factor, witness, exact, sampled)`` with ``inner ⊆ factor * outer`` tight."""
    if outer.dim != inner.dim:
        raise DimensionMismatchError("bodies live in different dimensions")
    if isinstance(inner, OracleBody):
        if not allow_sampling:
            raise RepresentationError(
                "undecidable representation: oracle inner body needs allow_sampling=True"
            )
        return _sampled_factor(outer, inner, samples, seed)
    if isinstance(inner, HPolytope) and isinstance(outer, HPolytope):
        best = None
        for b in outer.facet_normals:
            cert = inner.support_certificate(b)
            if best is None or cert.value > best[0]:
                best = (cert.value, cert.dual)
        return best[0], best[1], True, False
    if isinstance(inner, Ellipsoid):
        if isinstance(outer, Ellipsoid):
            R = outer.root
            M = R @ inner.inverse_shape @ R
            w, V = np.linalg.eigh(M)
            factor = math.sqrt(max(w[-1], 0.0))
            direction = np.linalg.solve(R, V[:, -1])
            x = direction / float(inner.gauge(direction))
            return factor, tuple(x), False, False
        if isinstance(outer, VPolytope):
            outer = as_hpolytope(outer)
        if isinstance(outer, HPolytope):
            best = None
            Qi = inner.inverse_shape
            for b in outer.facet_normals:
                bf = to_float(b)
                val = math.sqrt(float(bf @ Qi @ bf))
                if best is None or val > best[0]:
                    best = (val, tuple(Qi @ bf / val))
            return best[0], best[1], False, False
        raise RepresentationError("ellipsoid inside an oracle body is not decidable exactly")
    inner_v = as_vpolytope(inner)
    best = None
    for g in inner_v.generators:
        val = outer.gauge(g)
        if best is None or _upper(val) > _upper(best[0]):
            best = (val, g)
    exact = outer.exact and not isinstance(best[0], Interval)
    return best[0], best[1], exact, False


def _sampled_factor(outer, inner, samples, seed):
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(samples):
        x = vec(int(v) for v in rng.integers(-9, 10, size=inner.dim))
        if not any(x):
            continue
        gi = inner.gauge(x)
        go = outer.gauge(x)
        ratio = _upper(go) / max(float(gi.lo if isinstance(gi, Interval) else gi), 1e-300)
        if not isinstance(go, Interval) and not isinstance(gi, Interval):
            ratio = go / gi
        if best is None or _upper(ratio) > _upper(best[0]):
            best = (ratio, x)
    return best[0], best[1], False, True


def contains(outer: Body, inner: Body, *, tol: float = 1e-9, allow_sampling: bool = False,
             samples: int = 200, seed: int = 0) -> Containment:
    """Decide ``inner ⊆ outer``.

    Exact whenever both bodies are exact polytopes (or the outer is an exact
    oracle and the inner a polytope); float paths use ``tol``.
    """
    factor, witness, exact, sampled = inclusion_factor(
        outer, inner, allow_sampling=allow_sampling, samples=samples, seed=seed
    )
    if exact and isinstance(factor, Rational):
        holds = factor <= 1
    else:
        holds = _upper(factor) <= 1 + tol
    return Containment(holds, factor, witness, exact, sampled)
