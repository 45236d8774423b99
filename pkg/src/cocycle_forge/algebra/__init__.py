"""Exact coefficient arithmetic used by every other module."""
from .rings import GaloisRing, FiniteField, IntegerRing, ZZ, field_from_q, residue_map, naive_lift
from .poly import Poly, RatFunc, FunctionField
from .series import (TruncatedSeries, LaurentRing, DEFAULT_PRECISION, div_to,
                     series_residue, series_lift)
from .matrix import Matrix2, PolyMatrix
from .linalg import (kernel_over_field, row_reduce, rank, smith_normal_form, invariant_factors,
                     integer_kernel, integer_matrix, SpanBuilder, integer_det, gr_kernel,
                     gr_valuation)

__all__ = [
    "GaloisRing", "FiniteField", "IntegerRing", "ZZ", "field_from_q", "residue_map", "naive_lift",
    "Poly", "RatFunc", "FunctionField", "TruncatedSeries", "LaurentRing", "DEFAULT_PRECISION",
    "div_to", "series_residue", "series_lift", "Matrix2", "PolyMatrix", "kernel_over_field",
    "row_reduce", "rank", "smith_normal_form", "invariant_factors", "integer_kernel",
    "integer_matrix", "SpanBuilder", "integer_det", "gr_kernel", "gr_valuation",
]
