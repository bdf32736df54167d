"""Individual property checks.  Each takes plain parameters (so it can run in a worker
process and be re-run alone) and returns an :class:`Outcome`."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..convex.bodies import Interval, as_vpolytope, contains, linear_image
from ..convex.rational import as_rational, kron_mat, kron_vec, matvec
from ..ellipsoids.banach_mazur import bm_certificate, bm_product_certificate
from ..ellipsoids.mvee import john, loewner, relative_distance
from ..ellipsoids.symmetries import commutant_dimension, signed_permutation_group
from ..norms.grothendieck import KG_UPPER, GrothendieckConfig, grothendieck_experiment
from ..norms.tensor_norms import TensorElement, eps_norm, omega2_norm, pi_norm
from ..tensor.hulls import eps_proj_product, pi_inj_product
from ..tensor.products import eps_product, hilbert2_product, pi_product
from ..tensor.shape import TensorShape
from ..tensor.sections import coordinate_basis, coordinate_projection, image_body, section_body
from .corpus import (
    builtin_ball,
    random_ellipsoid,
    random_hpolytope,
    random_invertible,
    random_tensor,
    random_vpolytope,
    rational_points,
    rng_for,
)


@dataclass
class Outcome:
    passed: bool
    exact: bool
    detail: dict = field(default_factory=dict)


def _mismatches(A, B, points) -> list:
    return [i for i, x in enumerate(points) if A.gauge(x) != B.gauge(x)]


def _first(points, idx, A, B) -> dict | None:
    if not idx:
        return None
    x = points[idx[0]]
    return {"point": list(x), "left": A.gauge(x), "right": B.gauge(x)}


def _contract(T, P, Q):
    """Scale ``T`` so that ``T P ⊆ Q`` with a point on the boundary."""
    s = max(Q.gauge(matvec(T, g)) for g in as_vpolytope(P).generators)
    return tuple(tuple(a / s for a in row) for row in T)


# -- polarity ---------------------------------------------------------------


def duality_pair(seed: int, index: int, d1: int = 2, d2: int = 3, points: int = 100,
                 max_gens: int = 5) -> Outcome:
    rng = rng_for(seed, 1, index)
    P = random_vpolytope(rng, d1, int(rng.integers(d1, max_gens + 1)))
    Q = random_vpolytope(rng, d2, int(rng.integers(d2, max_gens + 1)))
    xs = rational_points(rng, d1 * d2, points)
    Pp, Qp = P.polar(), Q.polar()
    pairs = {
        "polar_pi_vs_eps_of_polars": (pi_product(P, Q).polar(), eps_product(Pp, Qp)),
        "polar_eps_vs_pi_of_polars": (eps_product(P, Q).polar(), pi_product(Pp, Qp)),
    }
    detail = {"generators": [len(P.generators), len(Q.generators)]}
    ok = True
    for name, (A, B) in pairs.items():
        bad = _mismatches(A, B, xs)
        detail[name] = {"mismatches": len(bad), "first": _first(xs, bad, A, B)}
        ok = ok and not bad
    return Outcome(ok, True, detail)


# -- uniform property and linear invariance ---------------------------------


def uniform_pair(seed: int, index: int, d1: int = 2, d2: int = 3, points: int = 20) -> Outcome:
    rng = rng_for(seed, 8, index)
    P1 = random_vpolytope(rng, d1, int(rng.integers(d1, 5)))
    P2 = random_vpolytope(rng, d2, int(rng.integers(d2, 5)))
    Q1 = random_hpolytope(rng, d1, int(rng.integers(d1, 5)))
    Q2 = random_vpolytope(rng, d2, int(rng.integers(d2, 5)))
    T1, T2 = random_invertible(rng, d1), random_invertible(rng, d2)
    xs = rational_points(rng, d1 * d2, points)
    K = kron_mat(T1, T2)
    detail = {}
    ok = True
    for name, prod in (("pi", pi_product), ("eps", eps_product)):
        A = linear_image(prod(P1, P2), K)
        B = prod(linear_image(P1, T1), linear_image(P2, T2))
        bad = _mismatches(A, B, xs)
        detail[f"invariance_{name}"] = {"mismatches": len(bad), "first": _first(xs, bad, A, B)}
        ok = ok and not bad
    C1, C2 = _contract(T1, P1, Q1), _contract(T2, P2, Q2)
    factors_ok = bool(contains(Q1, linear_image(P1, C1))) and bool(contains(Q2, linear_image(P2, C2)))
    detail["factor_inclusions"] = factors_ok
    Kc = kron_mat(C1, C2)
    for name, prod in (("pi", pi_product), ("eps", eps_product)):
        c = contains(prod(Q1, Q2), linear_image(prod(P1, P2), Kc))
        detail[f"inclusion_{name}"] = {"holds": c.holds, "factor": c.factor, "exact": c.exact}
        ok = ok and c.holds and c.exact
    return Outcome(ok and factors_ok, True, detail)


def hilbert_invariance(seed: int, index: int, d1: int = 2, d2: int = 3, tol: float = 1e-9) -> Outcome:
    rng = rng_for(seed, 18, index)
    E1, E2 = random_ellipsoid(rng, d1), random_ellipsoid(rng, d2)
    T1, T2 = random_invertible(rng, d1), random_invertible(rng, d2)
    A = linear_image(hilbert2_product(E1, E2), kron_mat(T1, T2)).shape
    B = hilbert2_product(linear_image(E1, T1), linear_image(E2, T2)).shape
    dist = relative_distance(A, B)
    return Outcome(dist <= tol, False, {"relative_distance": dist, "tol": tol})


# -- sandwich ---------------------------------------------------------------


def sandwich_cube(seed: int, index: int, d: int = 3, tol: float = 1e-6) -> Outcome:
    rng = rng_for(seed, 2, index)
    u = TensorElement(TensorShape((d, d)), random_tensor(rng, d, d))
    C = builtin_ball("inf", d)
    e, p = eps_norm(u, C, C).value, pi_norm(u, C, C).value
    w = omega2_norm(u, C, C)
    lower = float(e) <= w.hi + tol
    upper = w.lo <= float(p) + tol
    return Outcome(lower and upper and e <= p, False,
                   {"u": list(u.entries), "eps": e, "pi": p, "omega2": [w.lo, w.hi],
                    "eps_le_omega2": lower, "omega2_le_pi": upper})


def hilbert_collapse(seed: int, index: int, d: int = 2, tol: float = 1e-4) -> Outcome:
    rng = rng_for(seed, 10, index)
    E, P = builtin_ball("2", d), builtin_ball("inf", d)
    u = TensorElement(TensorShape((d, d)), random_tensor(rng, d, d))
    w = omega2_norm(u, E, P)
    ref = eps_product(E, P).gauge(u.entries)
    ref = ref.mid if isinstance(ref, Interval) else float(ref)
    err = max(abs(w.hi - ref), abs(w.lo - ref))
    return Outcome(err <= tol, False, {"u": list(u.entries), "omega2": [w.lo, w.hi],
                                        "eps_ellipsoid": ref, "error": err})


# -- hulls, sections, quotients ---------------------------------------------


def hull_cubes(seed: int, which: str, points: int = 100) -> Outcome:
    rng = rng_for(seed, 4, 0 if which == "pi_inj" else 1)
    xs = rational_points(rng, 4, points)
    if which == "pi_inj":
        C = builtin_ball("inf", 2)
        A, B = pi_inj_product(C, C), pi_product(C, C)
    else:
        O = builtin_ball("1", 2)
        A, B = eps_proj_product(O, O), eps_product(O, O)
    gauge_bad = _mismatches(A, B, xs)
    support_bad = [i for i, x in enumerate(xs[:20]) if A.support(x) != B.support(x)]
    return Outcome(not gauge_bad and not support_bad, True,
                   {"gauge_mismatches": len(gauge_bad), "support_mismatches": len(support_bad),
                    "first": _first(xs, gauge_bad, A, B)})


def hull_sandwich(seed: int, index: int, kg: float = KG_UPPER, tol: float = 1e-4) -> Outcome:
    rng = rng_for(seed, 5, index)
    O = builtin_ball("1", 2)
    u = random_tensor(rng, 2, 2)
    g = pi_inj_product(O, O).gauge(u)
    w = omega2_norm(TensorElement(TensorShape((2, 2)), u), O, O)
    ok = w.lo - tol <= float(g) <= kg * w.hi + tol
    return Outcome(ok, False, {"u": list(u), "pi_inj": g, "omega2": [w.lo, w.hi]})


def _subsets(n: int):
    for k in range(1, n + 1):
        yield from combinations(range(n), k)


def section_pairs(d1: int = 2, d2: int = 3) -> list:
    return [(M, N) for M in _subsets(d1) for N in _subsets(d2)]


def sections_and_images(seed: int, M, N, d1: int = 2, d2: int = 3, points: int = 20) -> Outcome:
    rng = rng_for(seed, 9, *M, 7, *N)
    P, Q = builtin_ball("inf", d1), builtin_ball("inf", d2)
    B1, B2 = coordinate_basis(d1, M), coordinate_basis(d2, N)
    xs = rational_points(rng, len(M) * len(N), points)
    left = eps_product(section_body(P, B1), section_body(Q, B2))
    right = section_body(eps_product(P, Q), [kron_vec(b1, b2) for b1 in B1 for b2 in B2])
    sec_bad = _mismatches(left, right, xs)
    R1, R2 = coordinate_projection(d1, M), coordinate_projection(d2, N)
    Pv, Qv = as_vpolytope(P), as_vpolytope(Q)
    img = image_body(pi_product(Pv, Qv), kron_mat(R1, R2))
    quo = pi_product(image_body(Pv, R1), image_body(Qv, R2))
    img_bad = _mismatches(img, quo, xs)
    return Outcome(not sec_bad and not img_bad, True,
                   {"section_mismatches": len(sec_bad), "image_mismatches": len(img_bad),
                    "first_section": _first(xs, sec_bad, left, right),
                    "first_image": _first(xs, img_bad, img, quo)})


# -- ellipsoids -------------------------------------------------------------


def loewner_product(seed: int, tol: float = 1e-3, gap_tol: float = 1e-6,
                    max_iter: int = 100_000) -> Outcome:
    C = builtin_ball("inf", 2)
    res = loewner(pi_product(C, C), gap_tol, max_iter)
    factor = loewner(C, gap_tol, max_iter)
    right = hilbert2_product(factor.ellipsoid, factor.ellipsoid).shape
    dist = relative_distance(res.shape, right)
    analytic = relative_distance(right, np.eye(4) / 4)
    ok = dist <= tol and analytic <= tol and res.duality_gap <= gap_tol and res.iterations <= max_iter
    return Outcome(ok, False, {"distance": dist, "distance_to_quarter_identity": analytic,
                               "duality_gap": res.duality_gap, "iterations": res.iterations})


def john_product(seed: int, tol: float = 1e-3, gap_tol: float = 1e-6) -> Outcome:
    O = builtin_ball("1", 2)
    left = john(eps_product(O, O), gap_tol)
    factor = john(O, gap_tol)
    right = hilbert2_product(factor, factor).shape
    dist = relative_distance(left.shape, right)
    gap = left.provenance["duality_gap"]
    return Outcome(dist <= tol and gap <= gap_tol, False,
                   {"distance": dist, "factor_shape": factor.shape.tolist(), "duality_gap": gap})


def loewner_john_sandwich(seed: int, index: int, d: int = 3, gap_tol: float = 1e-7) -> Outcome:
    rng = rng_for(seed, 6, index)
    P = random_vpolytope(rng, d, int(rng.integers(d, d + 4)))
    low = loewner(P, gap_tol)
    jo = john(P, gap_tol)
    slack = math.sqrt(1 + max(low.duality_gap, jo.provenance["duality_gap"])) - 1 + 1e-9
    outer = contains(low.ellipsoid, P, tol=slack)
    inner = contains(P, jo, tol=slack)
    return Outcome(outer.holds and inner.holds, False,
                   {"loewner_factor": outer.factor, "john_factor": inner.factor,
                    "gap": low.duality_gap})


def bm_product(seed: int, index: int, d1: int = 2, d2: int = 2) -> Outcome:
    rng = rng_for(seed, 12, index)
    certs = []
    for d in (d1, d2):
        P = random_vpolytope(rng, d, int(rng.integers(d, d + 3)))
        Q = random_hpolytope(rng, d, int(rng.integers(d, d + 3)))
        certs.append(bm_certificate(P, Q, random_invertible(rng, d)))
    detail = {"factor_lambdas": [c.lam for c in certs]}
    ok = all(c.verify() for c in certs)
    for kind in ("pi", "eps"):
        prod = bm_product_certificate(certs, kind)
        detail[f"{kind}_lambda"] = prod.lam
        ok = ok and prod.lam == certs[0].lam * certs[1].lam
    return Outcome(ok, True, detail)


# -- symmetries -------------------------------------------------------------


def commutant(seed: int, dims) -> Outcome:
    groups = [signed_permutation_group(d) for d in dims]
    dim = commutant_dimension(*groups)
    preserved = all(g.preserves(builtin_ball(p, g.dim)) for g in groups for p in ("1", "inf"))
    return Outcome(dim == 1 and preserved, True,
                   {"commutant_dimension": dim, "orders": [g.order() for g in groups],
                    "preserves_cross_and_cube": preserved})


# -- Grothendieck -----------------------------------------------------------


def grothendieck(seed: int, m: int, n: int, samples: int = 500, kg: float = KG_UPPER,
                 tol: float = 1e-4) -> Outcome:
    rep = grothendieck_experiment(GrothendieckConfig(kg, samples, ((m, n),), seed, tol))
    return Outcome(rep.passed, False, {"max_ratio": rep.max_ratio, "witness": rep.witness,
                                       "violations": rep.violations[:5],
                                       "violation_count": len(rep.violations)})


def hadamard_witness(seed: int, tol: float = 1e-4) -> Outcome:
    C = builtin_ball("inf", 2)
    u = TensorElement.from_matrix([[1, 1], [1, -1]])
    p = pi_norm(u, C, C).value
    w = omega2_norm(u, C, C)
    root2 = math.sqrt(2)
    ratio = float(p) / w.interval.mid
    ok = p == as_rational(2) and abs(w.lo - root2) <= tol and abs(w.hi - root2) <= tol \
        and abs(ratio - root2) <= 2 * tol
    return Outcome(ok, False, {"pi": p, "omega2": [w.lo, w.hi], "ratio": ratio})
