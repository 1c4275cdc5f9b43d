"""Builders turning the register-logic and parity constructions into
executable measurement patterns."""

from .diagonal import (
    DiagonalSpec,
    build_brl_pattern,
    diagonal_matrix,
    pattern_from_gflow,
    walsh_coefficients,
)
from .parity import (
    build_alternating_series,
    build_beveled_cluster,
    reduce_triangular_to_lhz,
)
from .unit_cell import (
    GATE_ROWS,
    compile_unit_cell_circuit,
    single_cell_pattern,
    unit_cell_labeled_graph,
    unit_cell_pauli_flow,
)
from .xz import (
    build_xz_triangular_gadgets,
    reduce_hexagonal_to_xz,
    thorn_pattern,
)

__all__ = [
    "DiagonalSpec",
    "walsh_coefficients",
    "diagonal_matrix",
    "build_brl_pattern",
    "pattern_from_gflow",
    "reduce_triangular_to_lhz",
    "build_beveled_cluster",
    "build_alternating_series",
    "GATE_ROWS",
    "unit_cell_labeled_graph",
    "unit_cell_pauli_flow",
    "single_cell_pattern",
    "compile_unit_cell_circuit",
    "reduce_hexagonal_to_xz",
    "thorn_pattern",
    "build_xz_triangular_gadgets",
]
