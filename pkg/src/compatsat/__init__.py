"""Pairwise compatibility-matrix decision procedure for CNF, with a brute-force oracle."""

from .cnf import (
    MAX_WIDTH,
    Clause,
    Formula,
    Literal,
    TruthTable,
    is_model,
    row_assignment,
    row_index,
    rows_compatible,
    truth_table,
)
from .dimacs import emit_dimacs, parse_dimacs, read_dimacs
from .engine import (
    BoxState,
    CompatMatrix,
    Outcome,
    Verdict,
    backward_closure,
    bool_mat_mul,
    compat_matrix,
    decide,
    deplete_step,
    extract_model,
    init_box,
    reorder_for_core,
    scan_false,
    transpose,
    unsat_core_candidate,
)
from .generate import GenSpec, paper_example, random_ksat
from .oracle import OracleResult, Status, enumerate_solve, solve_subformula

__version__ = "0.1.0"
