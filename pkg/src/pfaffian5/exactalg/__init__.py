"""Exact rings, sparse polynomials in x1..x5, and small exact matrices."""

from .matrix import ExactMatrix, det_adj, rank_over
from .poly import (
    NVARS,
    MultiPoly,
    common_ring,
    evaluate,
    partial_derivative,
    poly_arith,
    substitute_linear,
    variables,
)
from .rings import (
    GF,
    QQ,
    ZZ,
    FFElement,
    FiniteField,
    Ring,
    RingMismatchError,
    conway_polynomial,
    factor_prime_power,
    is_prime,
    ring_from_name,
    valuation,
)

__all__ = [
    "ExactMatrix", "det_adj", "rank_over", "NVARS", "MultiPoly", "common_ring", "evaluate",
    "partial_derivative", "poly_arith", "substitute_linear", "variables", "GF", "QQ", "ZZ",
    "FFElement", "FiniteField", "Ring", "RingMismatchError", "conway_polynomial",
    "factor_prime_power", "is_prime", "ring_from_name", "valuation",
]
