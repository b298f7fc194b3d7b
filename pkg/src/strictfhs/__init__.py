"""Frequency-hopping sequence sets with strictly optimal partial Hamming correlation."""

from .errors import FHSError, InternalError, InvalidInput
from .fhs import (
    FHSSet,
    VerificationReport,
    bound_partial,
    check_strict_optimality,
    fhs_from_bncdp,
    fhs_to_bncdp,
    max_partial,
    partial_hamming,
    peng_fan_lambda,
)
from .galois import FiniteField, field_create, field_of_order
from .packing import NestedFamily, Packing, compute_di, verify_nested, verify_packing
from .pipeline import FAMILIES, FamilyRequest, assemble, emit_parameter_table, validate

__version__ = "0.1.0"

__all__ = [
    "FHSError", "InternalError", "InvalidInput",
    "FHSSet", "VerificationReport", "bound_partial", "check_strict_optimality",
    "fhs_from_bncdp", "fhs_to_bncdp", "max_partial", "partial_hamming", "peng_fan_lambda",
    "FiniteField", "field_create", "field_of_order",
    "NestedFamily", "Packing", "compute_di", "verify_nested", "verify_packing",
    "FAMILIES", "FamilyRequest", "assemble", "emit_parameter_table", "validate",
]
