"""The ω2 product body and the support function of its unit ball."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from ..convex.bodies import Body, Ellipsoid, Interval, OracleBody, RepresentationError, polar_generators
from ..convex.rational import kron_vec, to_float
from ..tensor.shape import TensorShape
from .gamma2 import DEFAULT_TOL
from .tensor_norms import TensorElement, omega2_norm

SUPPORT_TOL = 1e-6
MAX_CUTS = 500


class SupportConvergenceError(RuntimeError):
    def __init__(self, message, interval: Interval):
        super().__init__(message)
        self.interval = interval


def omega2_support(P: Body, Q: Body, y, tol: float = SUPPORT_TOL, max_cuts: int = MAX_CUTS) -> Interval:
    """``max <y, u>`` over ``{u : ω2(u) <= 1}`` by Kelley's cutting planes.

    Every γ2 evaluation yields a linear functional below ω2 (the dual
    certificate), so the LP over collected cuts is an outer relaxation and its
    value an upper bound.  Scaling the LP optimizer into the body gives the
    lower bound.  The first cuts are the ε constraints ``|<u, v ⊗ w>| <= 1``.
    """
    if isinstance(P, (Ellipsoid, OracleBody)) or isinstance(Q, (Ellipsoid, OracleBody)):
        raise RepresentationError("omega2 support is implemented for polytope factors")
    shape = TensorShape((P.dim, Q.dim))
    yf = to_float(y)
    cuts = [to_float(kron_vec(v, w)) for v in polar_generators(P) for w in polar_generators(Q)]
    lower, upper = 0.0, np.inf
    for _ in range(max_cuts):
        A = np.array(cuts)
        res = linprog(-yf, A_ub=np.vstack([A, -A]), b_ub=np.ones(2 * len(cuts)),
                      bounds=[(None, None)] * len(yf), method="highs")
        if res.status != 0:
            raise RuntimeError(f"cutting-plane LP failed: {res.message}")
        upper = min(upper, -res.fun)
        u = res.x
        w = omega2_norm(TensorElement(shape, u), P, Q)
        if w.hi > 0:
            lower = max(lower, float(yf @ u) / w.hi)
        if upper - lower <= tol * max(upper, 1e-300):
            return Interval(lower, upper)
        cuts.append(w.cut())
    raise SupportConvergenceError(
        f"omega2 support not within {tol:g} after {max_cuts} cuts: [{lower}, {upper}]",
        Interval(lower, upper),
    )


def omega2_product(P: Body, Q: Body, tol: float = DEFAULT_TOL) -> OracleBody:
    """Unit ball of ω2 on ``(R^{d1}, g_P) ⊗ (R^{d2}, g_Q)``.

    The gauge is the γ2 interval; the support function (and hence the polar,
    used by the dual product) is available for polytope factors.
    """
    shape = TensorShape((P.dim, Q.dim))

    def gauge_fn(u):
        return omega2_norm(TensorElement(shape, u), P, Q, tol).interval

    support_fn = None
    if not any(isinstance(b, (Ellipsoid, OracleBody)) for b in (P, Q)):
        def support_fn(y):
            return omega2_support(P, Q, y)

    return OracleBody(shape.total_dim, gauge_fn, support_fn, {"construction": "omega2"}, exact=False)

