"""Exact and certified computations with tensor products of 0-symmetric convex bodies."""
from .convex import (
    FORMAT,
    Ellipsoid,
    HPolytope,
    Interval,
    OracleBody,
    VPolytope,
    contains,
    polar,
    read_body,
    write_body,
)
from .ellipsoids import commutant_dimension, john, loewner, signed_permutation_group
from .norms import eps_norm, gamma2_norm, norm_report, omega2_norm, pi_norm
from .tensor import ProductKind, dual_product, eps_product, hilbert2_product, pi_product, tensor_product

__version__ = "0.1.0"
