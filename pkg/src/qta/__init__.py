"""Numerical semantics of quantum Turing automata.

Feedback (trace) on isometries via the Moore-Penrose Schur complement, the
traced monoidal category of directed quantum Turing automata, and the
self-dual Int construction that makes them bidirectional, together with a
seeded property-test harness for the categorical laws.
"""

from .linalg import (
    ISOMETRY_TOL,
    IsometryError,
    Operator,
    RANK_TOL,
    ShapeError,
    SpaceDims,
    adjoint,
    block_perm,
    compose_then,
    distribute,
    dsum,
    identity,
    isometry_defect,
    kernel_on_top,
    kron,
    mp_inverse,
    neumann_partial,
    op_distance,
    random_isometry,
    sum_swap,
    tensor_swap,
    unitary_defect,
    zeros,
)
from .trace import (
    BlockMap,
    ConvergenceReport,
    FactorizationError,
    kernel_image_trace,
    kleene_feedback,
    scalar_star,
    schur_feedback,
    split_blocks,
)
from .dqta import (
    COMPOSITE_TOL,
    DQTA_TOL,
    Dqta,
    UnitaryDqta,
    cascade,
    dagger_dqta,
    feedback_dqta,
    iso_witness_check,
    make_dqta,
    make_unitary_dqta,
    turing_tensor,
    unit_automata,
)
from .intcat import (
    Int0Morphism,
    Qta,
    as_int0,
    bidirectionalize,
    canonical_trace,
    functor_image,
    int_compose,
    int_dagger,
    int_identity,
    int_symmetry,
    int_tensor,
    int_units,
    make_qta,
    name_of,
    unname,
)
from .axioms import (
    EXPECTED_FAIL,
    LAW_GROUPS,
    CheckConfig,
    LawReport,
    check_equivalences,
    check_int0_laws,
    check_trace_axioms,
    conway_counterexample,
    instance_seed,
    run_checks,
    serialize_reports,
    suite_passed,
)
from .cli import (
    AutomatonFile,
    SimulationTrace,
    build_cell,
    cell_labels,
    chain_cells,
    parse_automaton,
    run_command,
    simulate,
    write_automaton,
)

__all__ = [
    "ISOMETRY_TOL",
    "IsometryError",
    "Operator",
    "RANK_TOL",
    "ShapeError",
    "SpaceDims",
    "adjoint",
    "block_perm",
    "compose_then",
    "distribute",
    "dsum",
    "identity",
    "isometry_defect",
    "kernel_on_top",
    "kron",
    "mp_inverse",
    "neumann_partial",
    "op_distance",
    "random_isometry",
    "sum_swap",
    "tensor_swap",
    "unitary_defect",
    "zeros",
    "BlockMap",
    "ConvergenceReport",
    "FactorizationError",
    "kernel_image_trace",
    "kleene_feedback",
    "scalar_star",
    "schur_feedback",
    "split_blocks",
    "COMPOSITE_TOL",
    "DQTA_TOL",
    "Dqta",
    "UnitaryDqta",
    "cascade",
    "dagger_dqta",
    "feedback_dqta",
    "iso_witness_check",
    "make_dqta",
    "make_unitary_dqta",
    "turing_tensor",
    "unit_automata",
    "Int0Morphism",
    "Qta",
    "as_int0",
    "bidirectionalize",
    "canonical_trace",
    "functor_image",
    "int_compose",
    "int_dagger",
    "int_identity",
    "int_symmetry",
    "int_tensor",
    "int_units",
    "make_qta",
    "name_of",
    "unname",
    "EXPECTED_FAIL",
    "LAW_GROUPS",
    "CheckConfig",
    "LawReport",
    "check_equivalences",
    "check_int0_laws",
    "check_trace_axioms",
    "conway_counterexample",
    "instance_seed",
    "run_checks",
    "serialize_reports",
    "suite_passed",
    "AutomatonFile",
    "SimulationTrace",
    "build_cell",
    "cell_labels",
    "chain_cells",
    "parse_automaton",
    "run_command",
    "simulate",
    "write_automaton",
]
