"""Exact rational scalars and small dense linear algebra over them.

Vectors are tuples of ``mpq`` and matrices are tuples of row tuples.  Everything
here is exact; nothing rounds.
"""
from __future__ import annotations

import math
import numbers
from fractions import Fraction
from itertools import product as _cartesian

import numpy as np
from gmpy2 import mpq

Rational = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def as_rational(value) -> Rational:
    """Convert ``value`` to an exact rational.

    Strings may be ``"p/q"``, integers or finite decimals (``"0.25"``).  Floats
    are converted exactly from their binary value.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, numbers.Integral):
        return mpq(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return mpq(float(value))
    if isinstance(value, numbers.Rational):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Rational:
    try:
        return mpq(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def format_rational(q) -> str:
    return str(as_rational(q))


def vec(values) -> tuple:
    return tuple(as_rational(v) for v in values)


def mat(rows) -> tuple:
    rows = tuple(vec(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def to_float(v) -> np.ndarray:
    return np.array([float(a) for a in v], dtype=float)


def to_float_matrix(A) -> np.ndarray:
    return np.array([[float(a) for a in row] for row in A], dtype=float).reshape(len(A), -1)


def dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def matvec(A, x) -> tuple:
    return tuple(dot(row, x) for row in A)


def transpose(A) -> tuple:
    return tuple(zip(*A))


def matmul(A, B) -> tuple:
    cols = transpose(B)
    return tuple(tuple(dot(row, c) for c in cols) for row in A)


def scale(v, c) -> tuple:
    return tuple(c * a for a in v)


def is_zero(v) -> bool:
    return not any(v)


def canonical_sign(v) -> tuple:
    """Representative of ``{v, -v}`` whose first nonzero entry is positive."""
    for a in v:
        if a:
            return tuple(v) if a > 0 else tuple(-b for b in v)
    return tuple(v)


def identity(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def kron_vec(*vectors) -> tuple:
    """Row-major Kronecker product of rational vectors."""
    out = (ONE,)
    for v in vectors:
        out = tuple(a * b for a in out for b in v)
    return out


def kron_mat(*matrices) -> tuple:
    out = ((ONE,),)
    for M in matrices:
        out = tuple(
            tuple(a * b for a in row_out for b in row_m)
            for row_out in out
            for row_m in M
        )
    return out


def sign_vectors(d: int, canonical: bool = True) -> list[tuple]:
    """All ``(±1, ..., ±1)`` in dimension ``d``; one per antipodal pair if canonical."""
    signs = (ONE, -ONE)
    if canonical:
        return [(ONE,) + rest for rest in _cartesian(signs, repeat=d - 1)]
    return list(_cartesian(signs, repeat=d))


def _reduce(rows, ncols):
    """Gauss-Jordan elimination in place; returns list of (row, pivot column)."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [a / piv for a in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append((r, c))
        r += 1
    return pivots


def rank(A) -> int:
    if not A:
        return 0
    rows = [list(map(as_rational, r)) for r in A]
    return len(_reduce(rows, len(rows[0])))


def solve(A, b):
    """Unique solution of the square system ``A x = b`` or ``None`` if singular."""
    n = len(A)
    rows = [list(map(as_rational, A[i])) + [as_rational(b[i])] for i in range(n)]
    pivots = _reduce(rows, n)
    if len(pivots) < n:
        return None
    return tuple(rows[i][n] for i in range(n))


def inverse(A):
    n = len(A)
    rows = [list(map(as_rational, A[i])) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    pivots = _reduce(rows, n)
    if len(pivots) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def nullspace(A, ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : A x = 0}``."""
    if ncols is None:
        ncols = len(A[0])
    rows = [list(map(as_rational, r)) for r in A]
    pivots = _reduce(rows, ncols) if rows else []
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        x = [ZERO] * ncols
        x[free] = ONE
        for c, r in pivot_cols.items():
            x[c] = -rows[r][free]
        basis.append(tuple(x))
    return basis


def independent_rows_cols(A):
    """Index sets ``(rows, cols)`` such that ``A[rows][:, cols]`` is nonsingular of size rank(A)."""
    if not A:
        return [], []
    ncols = len(A[0])
    rows = [list(map(as_rational, r)) for r in A]
    order = list(range(len(rows)))
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        order[r], order[pr] = order[pr], order[r]
        prow = rows[r]
        piv = prow[c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return sorted(order[:r]), pivots
