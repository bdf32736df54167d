"""ε, π and ω2 tensor norms, the γ2 solver, and the Grothendieck experiment."""
import math

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from symtensor.convex.bodies import Ellipsoid, HPolytope, RepresentationError, VPolytope
from symtensor.convex.enumeration import DeskScaleError
from symtensor.convex.rational import identity, kron_vec
from symtensor.norms import (
    Gamma2ConvergenceError,
    TensorElement,
    as_tensor,
    eps_norm,
    gamma2_norm,
    norm_report,
    omega2_norm,
    pi_norm,
    t_u,
    u_t,
)
from symtensor.norms.grothendieck import GrothendieckConfig, grothendieck_experiment
from symtensor.tensor import eps_product, pi_product, sign_kronecker_generators

CUBE2, CROSS2, CUBE3 = HPolytope(identity(2)), VPolytope(identity(2)), HPolytope(identity(3))
I2 = [[1, 0], [0, 1]]
H2 = [[1, 1], [1, -1]]
E11 = [[1, 0], [0, 0]]

small_matrices = st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2) \
    .filter(lambda M: any(any(r) for r in M))
matrices3 = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3) \
    .filter(lambda M: any(any(r) for r in M))


def _float_pi_on_cubes(M):
    """Independent float oracle: l1 LP over sign-Kronecker generators with scipy."""
    m, n = len(M), len(M[0])
    G = np.array([[float(a) for a in g] for g in sign_kronecker_generators(m, n)]).T
    k = G.shape[1]
    res = linprog(np.ones(2 * k), A_eq=np.hstack([G, -G]), b_eq=np.array(M, float).reshape(-1),
                  bounds=[(0, None)] * (2 * k), method="highs")
    return res.fun


# -- ε ----------------------------------------------------------------------


@pytest.mark.parametrize("M, P, value", [(I2, CUBE2, 1), (H2, CUBE2, 1), (E11, CROSS2, 1)])
def test_eps_examples(M, P, value):
    e = eps_norm(as_tensor(M), P, P)
    assert e.value == value
    assert e.verify(as_tensor(M))


def test_eps_identity_pair_is_basis_pair():
    e = eps_norm(as_tensor(I2), CUBE2, CUBE2)
    assert {e.pair} <= {((1, 0), (1, 0)), ((0, 1), (0, 1))}


@given(matrices3)
def test_eps_on_cubes_is_max_entry(M):
    assert eps_norm(as_tensor(M), CUBE3, CUBE3).value == max(abs(a) for r in M for a in r)


def test_eps_rejects_ellipsoid_factor():
    with pytest.raises(RepresentationError):
        eps_norm(as_tensor(I2), Ellipsoid(np.eye(2)), CUBE2)


# -- π ----------------------------------------------------------------------


def test_pi_identity_on_cubes_with_half_half_decomposition():
    p = pi_norm(as_tensor(I2), CUBE2, CUBE2)
    assert p.value == 1
    assert sorted(c for c, _, _ in p.terms) == [mpq(1, 2), mpq(1, 2)]
    assert p.verify(as_tensor(I2))
    pieces = {kron_vec(p.left_generators[a], p.right_generators[b]) for _, a, b in p.terms}
    assert pieces == {(1, 1, 1, 1), (1, -1, -1, 1)}


def test_pi_hadamard_is_two_with_dual_certificate():
    p = pi_norm(as_tensor(H2), CUBE2, CUBE2)
    assert p.value == 2
    assert p.verify(as_tensor(H2))
    assert _float_pi_on_cubes(H2) == pytest.approx(2)


def test_pi_of_generator_is_one():
    assert pi_norm(as_tensor(E11), CROSS2, CROSS2).value == 1


@given(small_matrices)
def test_pi_matches_float_oracle_and_product_gauge(M):
    u = as_tensor(M)
    p = pi_norm(u, CUBE2, CUBE2)
    assert p.verify(u)
    assert float(p.value) == pytest.approx(_float_pi_on_cubes(M), rel=1e-9)
    assert p.value == pi_product(CUBE2, CUBE2).gauge(u.entries)
    assert eps_norm(u, CUBE2, CUBE2).value == eps_product(CUBE2, CUBE2).gauge(u.entries)


@given(small_matrices)
def test_eps_is_dual_of_pi_over_polars(M):
    u = as_tensor(M)
    dual_body = pi_product(CUBE2.polar(), CUBE2.polar())
    assert eps_norm(u, CUBE2, CUBE2).value == dual_body.support(u.entries)


def test_pi_budget_is_enforced():
    u = TensorElement((7, 7), [1] * 49)
    with pytest.raises(DeskScaleError):
        pi_norm(u, HPolytope(identity(7)), HPolytope(identity(7)), budget=100)


@given(small_matrices, st.integers(-4, 4))
def test_norms_are_absolutely_homogeneous(M, lam):
    u = as_tensor(M)
    v = as_tensor([[lam * a for a in r] for r in M])
    assert eps_norm(v, CUBE2, CUBE2).value == abs(lam) * eps_norm(u, CUBE2, CUBE2).value
    assert pi_norm(v, CUBE2, CUBE2).value == abs(lam) * pi_norm(u, CUBE2, CUBE2).value
    if lam:
        w, wu = omega2_norm(v, CUBE2, CUBE2), omega2_norm(u, CUBE2, CUBE2)
        assert w.lo <= abs(lam) * wu.hi * (1 + 1e-9) and abs(lam) * wu.lo <= w.hi * (1 + 1e-9)


# -- γ2 ---------------------------------------------------------------------


@pytest.mark.parametrize("M, value", [
    (np.outer([1, -1, 1], [1, 1, -1, 1]), 1.0),
    (np.eye(3), 1.0),
    (np.array(H2), math.sqrt(2)),
])
def test_gamma2_examples(M, value):
    r = gamma2_norm(M)
    assert r.lo - 1e-4 <= value <= r.hi + 1e-4
    assert r.hi - r.lo <= 1e-5 * r.lo
    assert r.verify(M)


@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=12, max_size=12))
def test_gamma2_certificates_bracket_random_matrices(entries):
    M = np.array(entries).reshape(3, 4)
    if np.abs(M).max() < 1e-3:
        return
    r = gamma2_norm(M)
    assert r.verify(M)
    assert r.lo <= r.hi
    # γ2 lies between the max entry and the trace-class bound
    assert np.abs(M).max() <= r.hi * (1 + 1e-9)
    assert r.lo <= np.linalg.norm(M, "nuc") + 1e-9


def test_gamma2_dual_cut_is_valid_on_other_matrices():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 3))
    D = gamma2_norm(M).dual
    for _ in range(20):
        N = rng.standard_normal((3, 3))
        assert float(np.sum(D * N)) <= gamma2_norm(N).hi + 1e-9


def test_gamma2_size_limit_and_zero_matrix():
    with pytest.raises(DeskScaleError):
        gamma2_norm(np.ones((17, 17)))
    r = gamma2_norm(np.zeros((2, 3)))
    assert (r.lo, r.hi) == (0.0, 0.0)


def test_gamma2_iteration_cap_reports_best_interval():
    with pytest.raises(Gamma2ConvergenceError) as info:
        gamma2_norm(np.array(H2, float), max_iter=1)
    assert info.value.result.lo <= math.sqrt(2) <= info.value.result.hi


def test_gamma2_matches_cvxpy_oracle():
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(4)
    for _ in range(3):
        M = rng.standard_normal((3, 4))
        W = cp.Variable((7, 7), symmetric=True)
        t = cp.Variable()
        cons = [W >> 0, W[:3, 3:] == M, cp.diag(W) <= t]
        cp.Problem(cp.Minimize(t), cons).solve()
        r = gamma2_norm(M)
        assert r.lo - 1e-4 <= t.value <= r.hi + 1e-4


# -- ω2 ---------------------------------------------------------------------


@given(small_matrices)
def test_omega2_on_cubes_is_gamma2(M):
    w = omega2_norm(as_tensor(M), CUBE2, CUBE2)
    g = gamma2_norm(np.array(M, float))
    assert abs(w.lo - g.lo) <= 1e-5 * g.hi and abs(w.hi - g.hi) <= 1e-5 * g.hi


@given(matrices3)
def test_crossnorm_sandwich_on_cubes(M):
    rep = norm_report(as_tensor(M), CUBE3, CUBE3)
    assert rep.sandwich_holds(1e-6)
    assert rep.verify(as_tensor(M))


def test_omega2_hilbert_factor_equals_eps_with_ellipsoid():
    E = Ellipsoid(np.eye(2))
    for M in ([[1, 2], [0, -1]], H2, [[3, 0], [1, 1]]):
        u = as_tensor(M)
        w = omega2_norm(u, E, CUBE2)
        ref = eps_product(E, CUBE2).gauge(u.entries).mid
        assert abs(w.hi - ref) <= 1e-4 and abs(w.lo - ref) <= 1e-4


def test_omega2_cut_is_a_valid_lower_functional():
    u = as_tensor([[2, -1], [1, 3]])
    w = omega2_norm(u, CROSS2, CUBE2)
    cut = w.cut()
    assert float(cut @ np.array([2, -1, 1, 3], float)) == pytest.approx(w.lo, rel=1e-8)
    for M in ([[1, 0], [0, 1]], [[0, 1], [-2, 1]]):
        assert float(cut @ np.array(M, float).reshape(-1)) <= omega2_norm(as_tensor(M), CROSS2, CUBE2).hi + 1e-9


def test_reshapes_are_inverse():
    u = as_tensor([[1, 2, 3], [4, 5, 6]])
    assert u_t(t_u(u)) == u
    assert t_u(u) == ((1, 2, 3), (4, 5, 6))


def test_norm_report_serializes():
    d = norm_report(as_tensor(H2), CUBE2, CUBE2).to_dict()
    assert d["eps"] == "1" and d["pi"] == "2"
    assert d["omega2"][0] <= math.sqrt(2) <= d["omega2"][1]


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any))
def test_all_norms_agree_on_decomposables(x, y):
    u = TensorElement((2, 2), kron_vec(x, y))
    target = max(map(abs, x)) * max(map(abs, y))
    assert eps_norm(u, CUBE2, CUBE2).value == target == pi_norm(u, CUBE2, CUBE2).value
    w = omega2_norm(u, CUBE2, CUBE2)
    assert w.lo - 1e-6 <= target <= w.hi + 1e-6


# -- Grothendieck -----------------------------------------------------------


def test_grothendieck_config_validation():
    with pytest.raises(ValueError):
        GrothendieckConfig(kg_upper=1.0)
    with pytest.raises(ValueError):
        GrothendieckConfig(samples=0)


def test_small_grothendieck_experiment_is_deterministic():
    cfg = GrothendieckConfig(samples=20, seed=3)
    a, b = grothendieck_experiment(cfg), grothendieck_experiment(cfg)
    assert a.passed and a.to_dict() == b.to_dict()
    assert 1 <= a.max_ratio <= cfg.kg_upper
    assert a.to_csv().splitlines()[0].startswith("m,n,u,eps,pi")
