"""Gauges, supports, polars, containment and the Body file format."""
import json
import math

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from symtensor.convex.bodies import (
    DegenerateBodyError,
    DimensionMismatchError,
    Ellipsoid,
    HPolytope,
    Interval,
    OracleBody,
    RepresentationError,
    VPolytope,
    as_hpolytope,
    as_vpolytope,
    contains,
    linear_image,
    reduce_generators,
    scaled,
)
from symtensor.convex.io import FORMAT, FormatError, body_from_dict, body_to_dict
from symtensor.convex.rational import identity, rank
from symtensor.harness.corpus import random_hpolytope, random_vpolytope, rng_for

from conftest import rational_vectors, rationals

SQUARE_V = VPolytope([(1, 1), (1, -1)])


def test_gauge_examples():
    assert HPolytope(identity(2)).gauge((2, 1)) == 2
    assert SQUARE_V.gauge((2, 0)) == 2
    assert Ellipsoid(np.diag([1.0, 4.0])).gauge((0, 1)).mid == pytest.approx(2)
    assert VPolytope([(2, 1), (1, 2)]).gauge((1, 1)) == mpq(2, 3)


def test_gauge_of_zero_and_dimension_mismatch():
    assert SQUARE_V.gauge((0, 0)) == 0
    with pytest.raises(DimensionMismatchError):
        SQUARE_V.gauge((1, 2, 3))


def test_polar_examples():
    cube = HPolytope(identity(2))
    cross = cube.polar()
    assert isinstance(cross, VPolytope) and cross.generators == identity(2)
    E = Ellipsoid(np.diag([1.0, 4.0])).polar()
    assert np.allclose(E.shape, np.diag([1.0, 0.25]))


def test_exact_ellipsoid_polar_stays_exact():
    E = Ellipsoid(None, exact_shape=[[1, 0], [0, 4]])
    assert E.polar().exact_shape == ((1, 0), (0, mpq(1, 4)))


def test_support_examples():
    assert VPolytope(identity(2)).support((3, -4)) == 4
    assert HPolytope(identity(2)).support((1, 1)) == 2
    y = np.array([3.0, -4.0])
    assert Ellipsoid(np.eye(2)).support(y).mid == pytest.approx(5.0)


def test_contains_examples():
    cube, cross = HPolytope(identity(2)), VPolytope(identity(2))
    assert contains(cube, cross)
    c = contains(cross, cube)
    assert not c.holds
    assert c.factor == 2 and set(map(abs, c.witness)) == {1}
    assert contains(SQUARE_V, SQUARE_V)


def test_contains_oracle_inner_needs_sampling_permission():
    oracle = OracleBody(2, lambda x: max(abs(a) for a in x), None, {"construction": "test"})
    with pytest.raises(RepresentationError, match="undecidable representation"):
        contains(HPolytope(identity(2)), oracle)
    c = contains(HPolytope(identity(2)), oracle, allow_sampling=True)
    assert c.sampled and c.holds


def test_reduce_generators_example():
    p = reduce_generators(VPolytope([(1, 0), (0, 1), (mpq(1, 2), mpq(1, 2))]))
    assert set(p.generators) == {(1, 0), (0, 1)}
    assert p.provenance["raw_generators"] == 3 and p.provenance["reduced_generators"] == 2


def test_non_spanning_generators_rejected():
    with pytest.raises(DegenerateBodyError):
        VPolytope([(1, 1), (2, 2)])
    with pytest.raises(DegenerateBodyError):
        HPolytope([(1, 0)], 2)


def test_non_positive_definite_ellipsoid_rejected():
    with pytest.raises(DegenerateBodyError):
        Ellipsoid(np.diag([1.0, 0.0]))
    with pytest.raises(DegenerateBodyError):
        Ellipsoid(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_antipodal_pairs_stored_once():
    p = VPolytope([(1, 0), (-1, 0), (0, 1)])
    assert len(p.generators) == 2 and p.n_vertices == 4
    assert HPolytope(identity(3)).n_facets == 6


# -- properties -------------------------------------------------------------


def _random_body(seed, kind):
    rng = rng_for(seed)
    if kind == "v":
        return random_vpolytope(rng, 2, int(rng.integers(2, 5)))
    return random_hpolytope(rng, 2, int(rng.integers(2, 5)))


bodies = st.builds(_random_body, st.integers(0, 10_000), st.sampled_from(["v", "h"]))


@given(bodies, rational_vectors(2), rationals())
def test_gauge_is_absolutely_homogeneous(P, x, lam):
    assert P.gauge(tuple(lam * a for a in x)) == abs(lam) * P.gauge(x)


@given(bodies, rational_vectors(2))
def test_membership_matches_gauge(P, x):
    g = P.gauge(x)
    assert g > 0
    assert P.contains_point(x) == (g <= 1)
    boundary = tuple(a / g for a in x)
    assert P.gauge(boundary) == 1


@given(bodies, rational_vectors(2))
def test_polar_gauge_is_support(P, y):
    assert P.polar().gauge(y) == P.support(y)


@given(bodies, st.lists(rational_vectors(2), min_size=1, max_size=10))
def test_bipolar_gauge_identity(P, xs):
    PP = P.polar().polar()
    assert all(PP.gauge(x) == P.gauge(x) for x in xs)


@given(bodies, st.lists(rational_vectors(2), min_size=1, max_size=10))
def test_representation_change_preserves_gauge(P, xs):
    V, H = as_vpolytope(P), as_hpolytope(P)
    assert all(V.gauge(x) == H.gauge(x) == P.gauge(x) for x in xs)


@given(bodies, st.lists(rational_vectors(2), min_size=1, max_size=10))
def test_reduction_preserves_gauge(P, xs):
    V = as_vpolytope(P)
    padded = VPolytope(list(V.generators) + [tuple(a / 2 for a in V.generators[0])])
    R = reduce_generators(padded)
    assert all(R.gauge(x) == V.gauge(x) for x in xs)


@given(bodies, rationals().filter(lambda q: q > 0), rational_vectors(2))
def test_scaling_divides_gauge(P, t, x):
    assert scaled(P, t).gauge(x) == P.gauge(x) / t


@given(bodies, st.tuples(rational_vectors(2, nonzero=False), rational_vectors(2, nonzero=False)), rational_vectors(2))
def test_linear_image_gauge(P, T, x):
    if rank(T) < 2:
        return
    from symtensor.convex.rational import inverse, matvec

    assert linear_image(P, T).gauge(x) == P.gauge(matvec(inverse(T), x))


def test_oracle_body_is_homogeneous_and_polar_swaps_functions():
    body = OracleBody(2, lambda x: max(abs(a) for a in x), lambda y: sum(abs(a) for a in y),
                      {"construction": "test"})
    x = (mpq(3), mpq(-1, 2))
    assert body.gauge(tuple(2 * a for a in x)) == 2 * body.gauge(x)
    assert body.polar().gauge(x) == body.support(x) == mpq(7, 2)


def test_interval_helpers():
    iv = Interval(1.0, 3.0)
    assert iv.mid == 2.0 and iv.width == 2.0 and 2.5 in iv
    assert iv.scaled(-1) == Interval(-3.0, -1.0)


# -- file format ------------------------------------------------------------


@pytest.mark.parametrize("body", [
    VPolytope([(1, mpq(1, 3)), (0, 1)]),
    HPolytope(identity(3)),
    Ellipsoid(None, exact_shape=[[2, 1], [1, 2]]),
    Ellipsoid(np.array([[1.0, 0.1], [0.1, math.pi]])),
])
def test_body_round_trip(body):
    d = json.loads(json.dumps(body_to_dict(body)))
    assert d["format"] == FORMAT
    assert body_from_dict(d) == body


def test_unknown_format_rejected():
    with pytest.raises(FormatError):
        body_from_dict({"format": "other/9", "kind": "vpolytope", "dim": 1, "data": [["1"]]})
    with pytest.raises(DimensionMismatchError):
        body_from_dict({"format": FORMAT, "kind": "vpolytope", "dim": 2, "data": [["1"]]})
    with pytest.raises(FormatError):
        body_from_dict({"format": FORMAT, "kind": "zonotope", "dim": 1, "data": [["1"]]})
