"""Canonical-form analysis and LOCC-inversion toolkit for two-qubit gates."""

from .channel import (
    InducedChannel,
    QubitState,
    UnitalityMatrix,
    exists_unital_input,
    induced_kraus,
    is_random_unitary_channel,
    min_unitality_defect,
    unitality_matrix_brute,
    unitality_matrix_closed_form,
)
from .kak import (
    GateClass,
    KcDecomposition,
    WeylPoint,
    as_two_qubit_unitary,
    canonicalize,
    classify,
    decompose,
    kc_number,
    makhlin_invariants,
    reconstruct,
    weyl_annotation,
)
from .linalg import eig_symmetric_unitary, kron_factor_su2, svd4
from .locc import (
    InversionReport,
    OneWayLoccProtocol,
    QuadState,
    Scenario,
    SearchResult,
    canonical_input,
    decide_partial_invertibility,
    maximally_entangled_amplitudes,
    product_quad_state,
    reduce_reference,
    search_restricted_protocols,
    simulate_protocol,
    synthesize_protocol,
    verify_maximal_entanglement_after_U,
)
from .schmidt import OperatorSchmidt, operator_schmidt, operator_schmidt_number
from .synth import (
    ControlledPhaseFactor,
    Factorization,
    build_canonical,
    check_composition_bounds,
    factor_into_controlled,
    verify_two_controlled_product,
)

__version__ = "0.1.0"

__all__ = [
    "GateClass",
    "KcDecomposition",
    "WeylPoint",
    "as_two_qubit_unitary",
    "canonicalize",
    "classify",
    "decompose",
    "kc_number",
    "makhlin_invariants",
    "reconstruct",
    "weyl_annotation",
    "OperatorSchmidt",
    "operator_schmidt",
    "operator_schmidt_number",
    "InducedChannel",
    "QubitState",
    "UnitalityMatrix",
    "exists_unital_input",
    "induced_kraus",
    "is_random_unitary_channel",
    "min_unitality_defect",
    "unitality_matrix_brute",
    "unitality_matrix_closed_form",
    "InversionReport",
    "OneWayLoccProtocol",
    "QuadState",
    "Scenario",
    "SearchResult",
    "canonical_input",
    "decide_partial_invertibility",
    "maximally_entangled_amplitudes",
    "product_quad_state",
    "reduce_reference",
    "search_restricted_protocols",
    "simulate_protocol",
    "synthesize_protocol",
    "verify_maximal_entanglement_after_U",
    "ControlledPhaseFactor",
    "Factorization",
    "build_canonical",
    "check_composition_bounds",
    "factor_into_controlled",
    "verify_two_controlled_product",
    "eig_symmetric_unitary",
    "kron_factor_su2",
    "svd4",
]
