"""Tensor shapes, the row-major Kronecker index map, and product kinds."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from ..convex.rational import dot, kron_mat, kron_vec, mat, vec


@dataclass(frozen=True)
class TensorShape:
    """Factor dimensions ``(d_1, ..., d_l)`` of ``R^{d_1} ⊗ ... ⊗ R^{d_l}``.

    Flat coordinates follow the row-major order, so the last factor varies
    fastest; this is the order used by :func:`kron`.
    """

    factor_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("factor dimensions must be positive")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def order(self) -> int:
        return len(self.factor_dims)

    @property
    def total_dim(self) -> int:
        return prod(self.factor_dims)

    def flat_index(self, index) -> int:
        if len(index) != self.order:
            raise ValueError("multi-index has wrong length")
        flat = 0
        for i, d in zip(index, self.factor_dims):
            if not 0 <= i < d:
                raise IndexError(index)
            flat = flat * d + i
        return flat

    def multi_index(self, flat: int) -> tuple:
        if not 0 <= flat < self.total_dim:
            raise IndexError(flat)
        out = []
        for d in reversed(self.factor_dims):
            flat, r = divmod(flat, d)
            out.append(r)
        return tuple(reversed(out))

    def kron(self, *vectors) -> tuple:
        if len(vectors) != self.order or any(len(v) != d for v, d in zip(vectors, self.factor_dims)):
            raise ValueError(f"factors do not match shape {self.factor_dims}")
        return kron_vec(*(vec(v) for v in vectors))


def _is_matrix(x) -> bool:
    if isinstance(x, np.ndarray):
        return x.ndim == 2
    return len(x) > 0 and hasattr(x[0], "__len__")


def kron(*factors):
    """Kronecker product of vectors or of matrices, one per factor.

    Rational inputs give exact tuples; any numpy input gives a numpy array.
    """
    if not factors:
        raise ValueError("need at least one factor")
    if any(isinstance(f, np.ndarray) for f in factors):
        out = np.ones((1, 1)) if _is_matrix(factors[0]) else np.ones(1)
        for f in factors:
            out = np.kron(out, np.asarray(f, dtype=float))
        return out
    if all(_is_matrix(f) for f in factors):
        return kron_mat(*(mat(f) for f in factors))
    if any(_is_matrix(f) for f in factors):
        raise ValueError("cannot mix vectors and matrices")
    return kron_vec(*(vec(f) for f in factors))


def inner_h(x, y):
    """Hilbert tensor inner product: the standard one on flat coordinates."""
    return dot(vec(x), vec(y))


_BASES = ("pi", "eps", "hilbert2", "omega2", "pi_inj", "eps_proj")
_ORDER_TWO = {"omega2", "pi_inj", "eps_proj"}


@dataclass(frozen=True)
class ProductKind:
    """A tensor product kind, possibly dualized once.

    ``ProductKind.parse("dual:pi")`` is the dual of the projective product;
    dualizing twice gives back the original kind.
    """

    base: str
    dual: bool = False

    def __post_init__(self):
        if self.base not in _BASES:
            raise ValueError(f"unknown product kind {self.base!r}")

    @classmethod
    def parse(cls, text) -> "ProductKind":
        if isinstance(text, ProductKind):
            return text
        dual = False
        while text.startswith("dual:"):
            dual = not dual
            text = text[len("dual:"):]
        return cls(text, dual)

    def dual_of(self) -> "ProductKind":
        return ProductKind(self.base, not self.dual)

    @property
    def order_two_only(self) -> bool:
        return self.base in _ORDER_TWO

    def __str__(self):
        return ("dual:" if self.dual else "") + self.base


PI = ProductKind("pi")
EPS = ProductKind("eps")
HILBERT2 = ProductKind("hilbert2")
OMEGA2 = ProductKind("omega2")
PI_INJ = ProductKind("pi_inj")
EPS_PROJ = ProductKind("eps_proj")
