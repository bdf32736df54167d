"""Exact arithmetic helpers and the rational simplex."""
import itertools
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from symtensor.convex.lp import LinProgram, LPError, l1_decomposition, lp_solve, preimage_support
from symtensor.convex.rational import (
    canonical_sign,
    format_rational,
    inverse,
    kron_vec,
    matmul,
    nullspace,
    parse_rational,
    rank,
    sign_vectors,
)

from conftest import as_fraction, rational_vectors, rationals


@given(rationals(50, 50))
def test_rational_lowest_terms_and_round_trip(q):
    f = as_fraction(q)
    assert q.denominator > 0
    assert f.denominator == int(q.denominator)  # Fraction normalizes too
    assert parse_rational(format_rational(q)) == q


def test_parse_accepts_integers_fractions_and_decimals():
    assert parse_rational("3") == 3
    assert parse_rational("-6/4") == mpq(-3, 2)
    assert parse_rational("0.25") == mpq(1, 4)


def test_canonical_sign_makes_first_nonzero_positive():
    assert canonical_sign((0, -1, 2)) == (0, 1, -2)
    assert canonical_sign((0, 3, -1)) == (0, 3, -1)


def test_sign_vectors_one_per_pair():
    vs = sign_vectors(3)
    assert len(vs) == 4
    assert all(v[0] == 1 for v in vs)


def test_kron_vec_example():
    assert kron_vec((1, 1), (1, -1)) == (1, -1, 1, -1)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(rational_vectors(n, nonzero=False), min_size=n, max_size=n)))
def test_inverse_is_exact_when_full_rank(rows):
    n = len(rows)
    if rank(rows) < n:
        with pytest.raises(ValueError):
            inverse(rows)
        return
    prod = matmul(rows, inverse(rows))
    assert prod == tuple(tuple(mpq(int(i == j)) for j in range(n)) for i in range(n))


def test_nullspace_dimension_matches_rank():
    A = [(1, 2, 3), (2, 4, 6)]
    ns = nullspace(A)
    assert len(ns) == 3 - rank(A) == 2
    for v in ns:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


def _brute_force_l1(gens, x):
    """Minimum of sum |c| over basic solutions in the plane (Cramer's rule on generator pairs)."""
    x = [as_fraction(mpq(a)) for a in x]
    g = [[as_fraction(mpq(a)) for a in v] for v in gens]
    best = None
    for i, j in itertools.combinations(range(len(g)), 2):
        det = g[i][0] * g[j][1] - g[j][0] * g[i][1]
        if det == 0:
            continue
        a = (x[0] * g[j][1] - g[j][0] * x[1]) / det
        b = (g[i][0] * x[1] - x[0] * g[i][1]) / det
        val = abs(a) + abs(b)
        best = val if best is None else min(best, val)
    return best


def test_l1_gauge_matches_hand_enumeration():
    # generators (2,1),(1,2): x=(1,1) = 1/3 (2,1) + 1/3 (1,2)
    dec = l1_decomposition(((2, 1), (1, 2)), (1, 1))
    assert dec.value == mpq(2, 3)
    assert _brute_force_l1(((2, 1), (1, 2)), (1, 1)) == Fraction(2, 3)
    assert dec.verify(((2, 1), (1, 2)), (1, 1))


@given(st.lists(rational_vectors(2), min_size=2, max_size=5), rational_vectors(2))
def test_l1_decomposition_agrees_with_basic_solution_enumeration(gens, x):
    if rank(gens) < 2:
        return
    dec = l1_decomposition(gens, x)
    assert dec.verify(gens, x)
    assert as_fraction(dec.value) == _brute_force_l1(gens, x)


@given(st.lists(st.tuples(*[st.integers(-4, 4)] * 3), min_size=2, max_size=4),
       st.tuples(*[st.integers(-5, 5)] * 3), st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9)))
def test_lp_optimum_matches_float_solver_and_certificate_verifies(A, c, b):
    rhs = [b[i % 3] for i in range(len(A))]
    prog = LinProgram(c, A, ["<="] * len(A), rhs, bounds=[(0, 10)] * 3, maximize=True)
    res = lp_solve(prog)
    ref = linprog([-a for a in c], A_ub=A, b_ub=rhs, bounds=[(0, 10)] * 3,
                  method="highs")
    assert res.optimal
    assert res.verify(prog)
    assert float(res.value) == pytest.approx(-ref.fun, abs=1e-9)


def test_lp_reports_infeasible_and_unbounded():
    infeasible = LinProgram((1,), ((1,), (1,)), ("<=", ">="), (1, 2))
    assert lp_solve(infeasible).status == "infeasible"
    unbounded = LinProgram((1,), ((1,),), (">=",), (1,), maximize=True)
    res = lp_solve(unbounded)
    assert res.status == "unbounded"


def test_preimage_support_identity_map_is_l1_support():
    # max <y,u> with u in conv(±e_i) is max |y_i|
    assert preimage_support(((1, 0), (0, 1)), ((1, 0), (0, 1)), (3, -4)) == 4


def test_lp_error_is_runtime_error():
    assert issubclass(LPError, RuntimeError)
