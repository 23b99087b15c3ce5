"""Schur multipliers of nilpotent Lie p-rings from triangular presentations."""

from .casesplit import CaseTree, branch_candidates, split
from .multmat import basis_index, build_matrix
from .presentation import (
    Presentation,
    check_consistency,
    evaluate_concrete,
    least_primitive_root,
    load,
    load_fixture,
    parse,
    specialise,
)
from .smith import Budget, SchurResult, schur_concrete, schur_from_divisors, snf_integer, snf_symbolic
from .symring import Polynomial, parse_poly
from .verify import differential_check, zero_set

__all__ = [
    "Budget", "CaseTree", "Polynomial", "Presentation", "SchurResult", "basis_index",
    "branch_candidates", "build_matrix", "check_consistency", "differential_check",
    "evaluate_concrete", "least_primitive_root", "load", "load_fixture", "parse", "parse_poly",
    "schur_concrete", "schur_from_divisors", "snf_integer", "snf_symbolic", "specialise",
    "split", "zero_set",
]
