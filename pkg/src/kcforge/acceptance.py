"""Property-based verification suite behind the `verify` command.

Each criterion draws its own deterministic generator from the suite seed,
runs at the sample counts and tolerances fixed below, and reports one
pass/fail line.  The same functions back tests/test_acceptance.py.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import channel, locc, sampling, schmidt, synth
from .gates import controlled_phase
from .kak import decompose, kc_number
from .linalg import frobenius
from .locc import Scenario

DEFAULT_SEED = 20250811


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: str
    seconds: float


def format_line(result):
    status = "PASS" if result.passed else "FAIL"
    return (
        f"{status}  criterion {result.number:>2}: {result.title} "
        f"[{result.details}] ({result.seconds:.2f}s)"
    )


def _rng(seed, number):
    return np.random.default_rng([seed, number])


def _n(samples, default):
    return default if samples is None else samples


def _criterion_round_trip(seed, samples):
    rng = _rng(seed, 1)
    n = _n(samples, 1000)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        u = sampling.haar_unitary(4, rng)
        worst = max(worst, frobenius(decompose(u).reconstruct() - u))
    elapsed = time.perf_counter() - started
    passed = worst < 1e-8 and elapsed < 10.0
    return passed, f"n={n} worst residual {worst:.2e}, {elapsed:.2f}s"


def _criterion_weyl_invariance(seed, samples):
    rng = _rng(seed, 2)
    n = _n(samples, 500)
    worst = 0.0
    for _ in range(n):
        u = sampling.haar_unitary(4, rng)
        left = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
        right = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
        base = decompose(u).weyl.as_array()
        dressed = decompose(left @ u @ right).weyl.as_array()
        worst = max(worst, float(np.max(np.abs(base - dressed))))
    return worst < 1e-8, f"n={n} worst coefficient shift {worst:.2e}"


_TABLE = {0: 1, 1: 2, 2: 4, 3: 4}


def _criterion_table(seed, samples):
    rng = _rng(seed, 3)
    per_class = _n(samples, 100)
    seen = set()
    for count in range(4):
        for _ in range(per_class):
            u = sampling.random_gate_in_class(rng, count)
            pair = (kc_number(decompose(u)), schmidt.operator_schmidt_number(u))
            seen.add(pair)
            if pair != (count, _TABLE[count]):
                return False, f"class {count} produced pair {pair}"
    return seen == {(0, 1), (1, 2), (2, 4), (3, 4)}, f"pairs observed {sorted(seen)}"


def _criterion_g_formula(seed, samples):
    rng = _rng(seed, 4)
    n = _n(samples, 1000)
    worst = 0.0
    for _ in range(n):
        angles = np.sort(rng.uniform(0, np.pi / 4, 3))[::-1]
        angles[2] *= rng.choice([-1.0, 1.0])
        phi = channel.QubitState.from_vector(sampling.random_qubit_vector(rng))
        closed = channel.unitality_matrix_closed_form(tuple(angles), phi)
        brute = channel.unitality_matrix_brute(synth.build_canonical(angles), phi)
        worst = max(worst, float(np.max(np.abs(closed.matrix - brute.matrix))))
    return worst < 1e-12, f"n={n} worst entry gap {worst:.2e}"


def _criterion_one_ref_positive(seed, samples):
    rng = _rng(seed, 5)
    n = _n(samples, 200)
    worst = 1.0
    for i in range(n):
        u = sampling.random_gate_in_class(rng, i % 3)
        protocol = locc.synthesize_protocol(u, Scenario.ONLY_A_REF_ENTANGLED)
        maximal = locc.canonical_input(Scenario.ONLY_A_REF_ENTANGLED, protocol.ancilla)
        worst = min(
            worst,
            locc.simulate_protocol(maximal, u, protocol, Scenario.ONLY_A_REF_ENTANGLED).fidelity,
        )
        ref_dim = int(rng.integers(2, 6))
        pair = sampling.random_entangled_pair(rng, ref_dim)
        loose = locc.product_quad_state(pair, protocol.ancilla.vector.reshape(2, 1))
        worst = min(
            worst,
            locc.simulate_protocol(loose, u, protocol, Scenario.ONLY_A_REF_ENTANGLED).fidelity,
        )
        reduced, _ = locc.reduce_reference(loose, "a")
        worst = min(
            worst,
            locc.simulate_protocol(reduced, u, protocol, Scenario.ONLY_A_REF_ENTANGLED).fidelity,
        )
    return worst >= 1 - 1e-8, f"n={n} lowest fidelity {worst:.12f}"


def _criterion_one_ref_negative(seed, samples):
    rng = _rng(seed, 6)
    n = _n(samples, 50)
    min_defect = np.inf
    max_fidelity = 0.0
    for _ in range(n):
        u = sampling.random_gate_in_class(rng, 3, low=0.1, high=np.pi / 4 - 0.1)
        defect, _ = channel.min_unitality_defect(u)
        min_defect = min(min_defect, defect)
        result = locc.search_restricted_protocols(u, Scenario.ONLY_A_REF_ENTANGLED)
        max_fidelity = max(max_fidelity, result.fidelity, result.bound)
    passed = min_defect > 1e-6 and max_fidelity < 1 - 1e-3
    return passed, f"n={n} min defect {min_defect:.2e}, best fidelity {max_fidelity:.6f}"


def _criterion_both_refs_positive(seed, samples):
    rng = _rng(seed, 7)
    n = _n(samples, 200)
    worst_fidelity = 1.0
    worst_residual = 0.0
    for _ in range(n):
        theta = rng.uniform(0.2, 2 * np.pi - 0.2)
        left = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
        right = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
        u = left @ controlled_phase(theta) @ right
        protocol = locc.synthesize_protocol(u, Scenario.BOTH_REFS_ENTANGLED)
        for state in (
            locc.canonical_input(Scenario.BOTH_REFS_ENTANGLED),
            locc.product_quad_state(
                sampling.random_entangled_pair(rng, int(rng.integers(2, 5))),
                sampling.random_entangled_pair(rng, int(rng.integers(2, 5))),
            ),
        ):
            report = locc.simulate_protocol(state, u, protocol, Scenario.BOTH_REFS_ENTANGLED)
            worst_fidelity = min(worst_fidelity, report.fidelity)
            worst_residual = max(worst_residual, report.residual)
    passed = worst_fidelity >= 1 - 1e-8 and worst_residual < 1e-8
    return passed, f"n={n} lowest fidelity {worst_fidelity:.12f}, worst residual {worst_residual:.2e}"


def _criterion_both_refs_negative(seed, samples):
    rng = _rng(seed, 8)
    n = _n(samples, 50)
    max_fidelity = 0.0
    for _ in range(n):
        u = sampling.random_gate_in_class(rng, 2, low=0.1, high=np.pi / 4 - 0.1)
        result = locc.search_restricted_protocols(u, Scenario.BOTH_REFS_ENTANGLED)
        max_fidelity = max(max_fidelity, result.fidelity, result.bound)
    return max_fidelity < 1 - 1e-3, f"n={n} best fidelity {max_fidelity:.6f}"


def _random_controlled(rng):
    theta = rng.uniform(0.2, 2 * np.pi - 0.2)
    left = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
    right = np.kron(sampling.haar_unitary(2, rng), sampling.haar_unitary(2, rng))
    return left @ controlled_phase(theta) @ right


def _criterion_controlled_products(seed, samples):
    rng = _rng(seed, 9)
    n = _n(samples, 500)
    worst_residual = 0.0
    for _ in range(n):
        product = _random_controlled(rng) @ _random_controlled(rng)
        count = kc_number(decompose(product))
        if count > 2:
            return False, f"controlled product reached count {count}"
        factorization = synth.factor_into_controlled(product)
        if len(factorization.factors) != count:
            return False, f"count {count} factored into {len(factorization.factors)}"
        worst_residual = max(
            worst_residual, frobenius(factorization.reconstruct() - product)
        )
    extra = max(1, n // 10)
    for count in (1, 3):
        for _ in range(extra):
            u = sampling.random_gate_in_class(rng, count)
            factorization = synth.factor_into_controlled(u)
            if len(factorization.factors) != count:
                return False, f"class {count} factored into {len(factorization.factors)}"
            worst_residual = max(
                worst_residual, frobenius(factorization.reconstruct() - u)
            )
    passed = worst_residual < 1e-8
    return passed, f"n={n}+2x{extra} worst reconstruction {worst_residual:.2e}"


def _criterion_composition_bounds(seed, samples):
    rng = _rng(seed, 10)
    n = _n(samples, 500)
    cells = [(i, j) for i in range(4) for j in range(4)]
    for index in range(n):
        k_u, k_v = cells[index % len(cells)]
        u = sampling.random_gate_in_class(rng, k_u)
        v = sampling.random_gate_in_class(rng, k_v)
        check = synth.check_composition_bounds(u, v)
        if (check.k_u, check.k_v) != (k_u, k_v):
            return False, f"stratified counts drifted: {check}"
        if not check.holds:
            return False, f"bounds or adjoint invariance failed: {check}"
    return True, f"n={n} over all {len(cells)} (k_u, k_v) cells"


def _criterion_reference_marginal(seed, samples):
    rng = _rng(seed, 11)
    n = _n(samples, 200)
    for _ in range(n):
        u = sampling.haar_unitary(4, rng)
        phi = channel.QubitState.from_vector(sampling.random_qubit_vector(rng))
        if not locc.verify_maximal_entanglement_after_U(u, phi, atol=1e-10):
            return False, "reference marginal deviated from I/2"
    return True, f"n={n} reference marginals at I/2 within 1e-10"


_CRITERIA = (
    (1, "decompose/reconstruct round trip on Haar gates", _criterion_round_trip),
    (2, "Weyl point invariance under local dressing", _criterion_weyl_invariance),
    (3, "interaction count vs operator Schmidt number table", _criterion_table),
    (4, "closed-form vs brute-force channel unitality matrix", _criterion_g_formula),
    (5, "single-reference inversion protocols (positive)", _criterion_one_ref_positive),
    (6, "single-reference falsifier on 3-axis gates (negative)", _criterion_one_ref_negative),
    (7, "both-reference inversion protocols (positive)", _criterion_both_refs_positive),
    (8, "both-reference falsifier on 2-axis gates (negative)", _criterion_both_refs_negative),
    (9, "controlled-phase products and factor counts", _criterion_controlled_products),
    (10, "composition bounds and adjoint invariance", _criterion_composition_bounds),
    (11, "reference-cut marginal is maximally mixed", _criterion_reference_marginal),
)


def criterion_numbers():
    return tuple(number for number, _, _ in _CRITERIA)


def run_criterion(number, seed=DEFAULT_SEED, samples=None):
    for num, title, fn in _CRITERIA:
        if num == number:
            started = time.perf_counter()
            try:
                passed, details = fn(seed, samples)
            except Exception as exc:  # a raised check is a failed check
                passed, details = False, f"raised {type(exc).__name__}: {exc}"
            return CriterionResult(num, title, passed, details, time.perf_counter() - started)
    raise ValueError(f"no criterion {number}")


def run_all(seed=DEFAULT_SEED, samples=None, numbers=None):
    selected = numbers if numbers is not None else criterion_numbers()
    return [run_criterion(number, seed, samples) for number in selected]
