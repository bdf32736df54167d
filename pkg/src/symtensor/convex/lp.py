"""Exact linear programming over the rationals.

A dense tableau simplex with Bland's rule.  Bland's rule never cycles, so the
loop terminates without any anti-cycling bookkeeping, and the pivot sequence is
deterministic, which keeps every returned certificate reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .rational import (
    ONE,
    ZERO,
    as_rational,
    dot,
    independent_rows_cols,
    solve,
    transpose,
    vec,
)

SENSES = ("<=", ">=", "=")


class LPError(RuntimeError):
    """Internal inconsistency of the simplex engine (never expected)."""


@dataclass(frozen=True)
class LinProgram:
    """``min/max c.x  s.t.  A x (<=|>=|=) b,  lo <= x <= hi``.

    ``bounds`` defaults to ``x >= 0``; use ``None`` for an absent bound.
    """

    objective: tuple
    matrix: tuple
    senses: tuple
    rhs: tuple
    bounds: tuple | None = None
    maximize: bool = False

    def __post_init__(self):
        c = vec(self.objective)
        A = tuple(vec(r) for r in self.matrix)
        b = vec(self.rhs)
        senses = tuple(self.senses)
        n = len(c)
        if any(len(r) != n for r in A):
            raise ValueError("constraint rows must match objective length")
        if len(senses) != len(A) or len(b) != len(A):
            raise ValueError("senses/rhs must match number of constraint rows")
        bad = [s for s in senses if s not in SENSES]
        if bad:
            raise ValueError(f"unknown constraint sense {bad[0]!r}")
        if self.bounds is None:
            bounds = tuple((ZERO, None) for _ in range(n))
        else:
            if len(self.bounds) != n:
                raise ValueError("bounds must match number of variables")
            bounds = tuple(
                (None if lo is None else as_rational(lo), None if hi is None else as_rational(hi))
                for lo, hi in self.bounds
            )
            for lo, hi in bounds:
                if lo is not None and hi is not None and lo > hi:
                    raise ValueError("empty variable bound")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class BasisCertificate:
    """Optimal basis of the standard form ``min c.s, A s = b, s >= 0``.

    Re-verifiable from scratch: the basic solution must be nonnegative and the
    reduced costs ``c - A^T y`` (with ``B^T y = c_B``) nonnegative.
    """

    A: tuple
    b: tuple
    c: tuple
    basis: tuple

    def solution(self):
        B = tuple(tuple(row[j] for j in self.basis) for row in self.A)
        xb = solve(B, self.b)
        y = solve(transpose(B), tuple(self.c[j] for j in self.basis))
        return xb, y

    def verify(self) -> bool:
        if len(self.basis) != len(self.A):
            return False
        xb, y = self.solution()
        if xb is None or any(v < 0 for v in xb):
            return False
        cols = transpose(self.A) if self.A else ()
        return all(self.c[j] - dot(col, y) >= 0 for j, col in enumerate(cols))


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    value: object = None
    certificate: BasisCertificate | None = None
    ray: tuple | None = None
    farkas: tuple | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def verify(self, prog: LinProgram) -> bool:
        """Re-check the result against ``prog`` by direct substitution."""
        if self.status == "optimal":
            x = self.x
            for row, sense, bi in zip(prog.matrix, prog.senses, prog.rhs):
                lhs = dot(row, x)
                if (sense == "<=" and lhs > bi) or (sense == ">=" and lhs < bi) or (
                    sense == "=" and lhs != bi
                ):
                    return False
            for xi, (lo, hi) in zip(x, prog.bounds):
                if (lo is not None and xi < lo) or (hi is not None and xi > hi):
                    return False
            if dot(prog.objective, x) != self.value:
                return False
            return self.certificate is None or self.certificate.verify()
        if self.status == "unbounded":
            d = self.ray
            gain = dot(prog.objective, d)
            if (gain <= 0) if prog.maximize else (gain >= 0):
                return False
            for row, sense in zip(prog.matrix, prog.senses):
                lhs = dot(row, d)
                if (sense == "<=" and lhs > 0) or (sense == ">=" and lhs < 0) or (
                    sense == "=" and lhs != 0
                ):
                    return False
            return all(
                (lo is None or di >= 0) and (hi is None or di <= 0)
                for di, (lo, hi) in zip(d, prog.bounds)
            )
        if self.status == "infeasible":
            return self.farkas is not None
        return False


# --------------------------------------------------------------------------
# tableau kernel


@dataclass
class _Tableau:
    rows: list  # each row: coefficients + [rhs]
    basis: list
    z: list = field(default_factory=list)  # reduced costs + [-objective]
    iterations: int = 0

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        if piv != 1:
            row = [a / piv for a in row]
            self.rows[i] = row
        for k, other in enumerate(self.rows):
            if k != i:
                f = other[j]
                if f:
                    self.rows[k] = [a - f * b for a, b in zip(other, row)]
        f = self.z[j] if self.z else 0
        if f:
            self.z = [a - f * b for a, b in zip(self.z, row)]
        self.basis[i] = j
        self.iterations += 1

    def price(self, cost: list) -> None:
        z = list(cost) + [ZERO]
        for i, row in enumerate(self.rows):
            cb = cost[self.basis[i]]
            if cb:
                z = [a - cb * b for a, b in zip(z, row)]
        self.z = z

    def run(self, ncols: int, max_iter: int = 1_000_000) -> tuple[str, int | None]:
        """Bland's-rule primal simplex; returns ("optimal"|"unbounded", entering col)."""
        z = None
        for _ in range(max_iter):
            z = self.z
            j = next((c for c in range(ncols) if z[c] < 0), None)
            if j is None:
                return "optimal", None
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded", j
            self.pivot(best[1], j)
        raise LPError("simplex iteration cap reached; Bland's rule should not cycle")

    def primal(self, ncols: int) -> list:
        x = [ZERO] * ncols
        for i, j in enumerate(self.basis):
            if j < ncols:
                x[j] = self.rows[i][-1]
        return x


def _standardize(prog: LinProgram):
    """Rewrite ``prog`` as ``min c.s, A s = b, s >= 0`` with ``b >= 0``.

    Returns the standard data plus the map back to original variables.
    """
    var_map = []  # per original variable: (offset, [(std col, coef)])
    ncols = 0
    extra_rows = []  # upper-bound rows on shifted variables: (col, bound)
    for lo, hi in prog.bounds:
        if lo is not None:
            var_map.append((lo, [(ncols, ONE)]))
            if hi is not None:
                extra_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            var_map.append((hi, [(ncols, -ONE)]))
            ncols += 1
        else:
            var_map.append((ZERO, [(ncols, ONE), (ncols + 1, -ONE)]))
            ncols += 2
    n_struct = ncols

    rows, senses, rhs = [], [], []
    for a, sense, bi in zip(prog.matrix, prog.senses, prog.rhs):
        row = [ZERO] * n_struct
        shift = ZERO
        for j, aj in enumerate(a):
            if not aj:
                continue
            off, parts = var_map[j]
            shift += aj * off
            for col, coef in parts:
                row[col] += aj * coef
        rows.append(row)
        senses.append(sense)
        rhs.append(bi - shift)
    for col, bound in extra_rows:
        row = [ZERO] * n_struct
        row[col] = ONE
        rows.append(row)
        senses.append("<=")
        rhs.append(bound)

    n_slack = sum(1 for s in senses if s != "=")
    total = n_struct + n_slack
    A, b, natural = [], [], []
    k = n_struct
    for row, sense, bi in zip(rows, senses, rhs):
        full = row + [ZERO] * n_slack
        slack_col = None
        if sense != "=":
            full[k] = ONE if sense == "<=" else -ONE
            slack_col = k
            k += 1
        if bi < 0:
            full = [-a for a in full]
            bi = -bi
        A.append(full)
        b.append(bi)
        natural.append(slack_col if slack_col is not None and full[slack_col] == 1 else None)

    sign = -ONE if prog.maximize else ONE
    c = [ZERO] * total
    const = ZERO
    for j, cj in enumerate(prog.objective):
        off, parts = var_map[j]
        const += cj * off
        for col, coef in parts:
            c[col] += sign * cj * coef
    return A, b, c, natural, var_map, const


def _recover(var_map, s):
    return tuple(off + sum(coef * s[col] for col, coef in parts) for off, parts in var_map)


def lp_solve(prog: LinProgram) -> LPResult:
    """Solve ``prog`` exactly.

    Returns an optimal basic solution with a :class:`BasisCertificate`, an
    unbounded ray, or an infeasibility (Farkas) vector.
    """
    A, b, c, natural, var_map, const = _standardize(prog)
    m = len(A)
    n = len(c)

    if m == 0:
        if any(cj < 0 for cj in c):
            j = next(j for j, cj in enumerate(c) if cj < 0)
            d = [ZERO] * n
            d[j] = ONE
            return LPResult("unbounded", ray=_recover([(ZERO, p) for _, p in var_map], d))
        x = _recover(var_map, [ZERO] * n)
        return LPResult("optimal", x=x, value=dot(prog.objective, x),
                        certificate=BasisCertificate((), (), tuple(c), ()))

    # phase 1 with artificials only where no natural slack basis exists
    art_rows = [i for i in range(m) if natural[i] is None]
    n_art = len(art_rows)
    rows = []
    basis = []
    art_of = {}
    for i in range(m):
        art = [ZERO] * n_art
        if natural[i] is None:
            a_idx = art_rows.index(i)
            art[a_idx] = ONE
            art_of[i] = n + a_idx
            basis.append(n + a_idx)
        else:
            basis.append(natural[i])
        rows.append(list(A[i]) + art + [b[i]])
    tab = _Tableau(rows, basis)
    ncols = n + n_art

    if n_art:
        tab.price([ZERO] * n + [ONE] * n_art)
        status, _ = tab.run(ncols)
        if status != "optimal":
            raise LPError("phase 1 cannot be unbounded")
        if -tab.z[-1] > 0:
            B = tuple(tuple(row[j] for j in tab.basis) for row in tab.rows)
            cb = tuple(ONE if j >= n else ZERO for j in tab.basis)
            # duals of the phase-1 program in terms of the original std rows
            Astd_art = [list(A[i]) + ([ONE if art_of.get(i) == n + a else ZERO for a in range(n_art)])
                        for i in range(m)]
            Bfull = tuple(tuple(Astd_art[i][j] for j in tab.basis) for i in range(m))
            y = solve(transpose(Bfull), cb)
            return LPResult("infeasible", farkas=y, iterations=tab.iterations)
        # drive artificials out of the basis
        keep = []
        for i in range(m):
            if tab.basis[i] >= n:
                j = next((j for j in range(n) if tab.rows[i][j]), None)
                if j is None:
                    continue  # redundant row
                tab.pivot(i, j)
            keep.append(i)
        tab.rows = [tab.rows[i][:n] + [tab.rows[i][-1]] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        A_cert = tuple(tuple(A[i]) for i in keep)
        b_cert = tuple(b[i] for i in keep)
    else:
        A_cert = tuple(tuple(r) for r in A)
        b_cert = tuple(b)

    tab.price(c)
    status, j = tab.run(n)
    if status == "unbounded":
        d = [ZERO] * n
        d[j] = ONE
        for i, bj in enumerate(tab.basis):
            d[bj] = -tab.rows[i][j]
        ray = _recover([(ZERO, p) for _, p in var_map], d)
        return LPResult("unbounded", ray=ray, iterations=tab.iterations)
    s = tab.primal(n)
    x = _recover(var_map, s)
    cert = BasisCertificate(A_cert, b_cert, tuple(c), tuple(tab.basis))
    return LPResult("optimal", x=x, value=dot(prog.objective, x), certificate=cert,
                    iterations=tab.iterations)


# --------------------------------------------------------------------------
# l1 decomposition: the gauge LP of a symmetric V-polytope


@dataclass(frozen=True)
class L1Decomposition:
    """``x = sum_k coefficients[k] * g_k`` with ``sum |coefficients|`` minimal.

    ``dual`` satisfies ``|<g_k, dual>| <= 1`` for every k and
    ``<x, dual> = value``; it certifies optimality when the generators span.
    """

    value: object
    coefficients: tuple
    dual: tuple
    iterations: int

    def verify(self, generators, x) -> bool:
        d = len(x)
        recon = tuple(sum((c * g[i] for c, g in zip(self.coefficients, generators) if c), ZERO)
                      for i in range(d))
        if recon != tuple(x):
            return False
        if sum(abs(c) for c in self.coefficients) != self.value:
            return False
        if dot(x, self.dual) != self.value:
            return False
        return all(abs(dot(g, self.dual)) <= 1 for g in generators)


def l1_decomposition(generators, x) -> L1Decomposition | None:
    """Minimize ``sum |c_k|`` subject to ``sum c_k g_k = x``.

    Returns ``None`` when ``x`` is outside the span of the generators.  The
    simplex starts from a basis of independent generators with signs flipped
    to make it primal feasible, so no phase 1 is needed.
    """
    gens = [vec(g) for g in generators]
    x = vec(x)
    k = len(gens)
    if not any(x):
        return L1Decomposition(ZERO, (ZERO,) * k, (ZERO,) * len(x), 0)
    if k == 0:
        return None
    G = transpose(gens)  # d x k
    row_idx, col_idx = independent_rows_cols(G)
    r = len(row_idx)
    rows = []
    for i in row_idx:
        gi = G[i]
        rows.append(list(gi) + [-a for a in gi] + [x[i]])
    tab = _Tableau(rows, [None] * r)
    for t, j in enumerate(col_idx):
        i = next(i for i in range(t, r) if tab.rows[i][j])
        tab.rows[t], tab.rows[i] = tab.rows[i], tab.rows[t]
        tab.pivot(t, j)
    for i in range(r):
        if tab.rows[i][-1] < 0:
            tab.rows[i] = [-a for a in tab.rows[i]]
            j = tab.basis[i]
            tab.basis[i] = j + k if j < k else j - k
    ncols = 2 * k
    tab.iterations = 0
    tab.price([ONE] * ncols)
    status, _ = tab.run(ncols)
    if status != "optimal":
        raise LPError("l1 decomposition cannot be unbounded")
    s = tab.primal(ncols)
    coeffs = tuple(s[j] - s[j + k] for j in range(k))
    d = len(x)
    recon = [ZERO] * d
    for c, g in zip(coeffs, gens):
        if c:
            for i in range(d):
                if g[i]:
                    recon[i] += c * g[i]
    if tuple(recon) != x:
        return None
    B = tuple(tuple(G[i][j] if j < k else -G[i][j - k] for j in tab.basis) for i in row_idx)
    y_r = solve(transpose(B), (ONE,) * r)
    y = [ZERO] * d
    for i, v in zip(row_idx, y_r):
        y[i] = v
    value = -tab.z[-1]
    return L1Decomposition(value, coeffs, tuple(y), tab.iterations)


def preimage_support(A, generators, y):
    """``max <y, u>`` over ``{u : A u in conv(±generators)}``.

    This is the support function of a linear preimage (a section when ``A``
    is injective).  Variables: ``u`` free, ``c = c+ - c-`` with
    ``sum (c+ + c-) <= 1``.
    """
    A = [tuple(r) for r in A]
    gens = [tuple(g) for g in generators]
    D, K = len(y), len(gens)
    rows, senses, rhs = [], [], []
    for i, arow in enumerate(A):
        rows.append(list(arow) + [-g[i] for g in gens] + [g[i] for g in gens])
        senses.append("=")
        rhs.append(ZERO)
    rows.append([ZERO] * D + [ONE] * (2 * K))
    senses.append("<=")
    rhs.append(ONE)
    bounds = [(None, None)] * D + [(ZERO, None)] * (2 * K)
    res = lp_solve(LinProgram(list(y) + [ZERO] * (2 * K), rows, senses, rhs, bounds, maximize=True))
    if res.status != "optimal":
        raise LPError(f"preimage support LP ended {res.status}; map is not injective on the body")
    return res.value
