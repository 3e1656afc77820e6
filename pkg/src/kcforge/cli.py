"""Command-line surface: gate parsing, analysis commands, JSON reports.

Exit codes: 0 success, 1 verification found violations, 2 invalid input
(malformed gate spec, non-unitary matrix), 3 internal numerical failure.
"""

import argparse
import json
import os
import re
import sys

import numpy as np

from . import acceptance, locc, schmidt, synth
from .errors import (
    ConvergenceError,
    DegenerateCountError,
    GateSpecParseError,
    InconsistentCriteriaError,
    KcforgeError,
    NotInvertibleError,
    NotUnitaryError,
    NumericalDegeneracyError,
    SearchFailureError,
)
from .gates import CNOT, CNOT_BA, CZ, ISWAP, SWAP, controlled_phase
from .kak import (
    as_two_qubit_unitary,
    classify,
    decompose,
    kc_number,
    makhlin_invariants,
    weyl_annotation,
)
from .linalg import DEFAULT_ATOL, frobenius
from .locc import Scenario

_NAMED_GATES = {
    "I": np.eye(4, dtype=complex),
    "CNOT": CNOT,
    "CNOT_BA": CNOT_BA,
    "CZ": CZ,
    "SWAP": SWAP,
    "ISWAP": ISWAP,
}

_SCENARIOS = {
    "both": Scenario.BOTH_REFS_ENTANGLED,
    "a-only": Scenario.ONLY_A_REF_ENTANGLED,
    "none": Scenario.NO_REFS_ENTANGLED,
}

_ANGLE_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*\*?\s*)?"
    r"(?P<pi>pi)?\s*"
    r"(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$",
    re.IGNORECASE,
)


def _parse_angle(text, offset):
    """Radian literal or pi-expression such as 0.3, pi/4, -3*pi/2."""
    match = _ANGLE_RE.match(text)
    if not match or (match.group("num") is None and match.group("pi") is None):
        raise GateSpecParseError(f"expected an angle, got {text!r}", offset + 1)
    value = float(match.group("num")) if match.group("num") else 1.0
    if match.group("pi"):
        value *= np.pi
    if match.group("den"):
        value /= float(match.group("den"))
    if match.group("sign") == "-":
        value = -value
    return value


def parse_gate_spec(text):
    """Resolve a gate specification string to a validated 4x4 unitary.

    Accepts the named gates I, CNOT, CNOT_BA, CZ, SWAP, ISWAP, the
    parametric CP(theta), and CANONICAL(ax, ay, az) with angles given as
    radian literals or pi-expressions.

    Raises:
        GateSpecParseError: with the 1-based column of the problem.
    """
    spec = text.strip()
    if not spec:
        raise GateSpecParseError("empty gate specification", 1)
    head = re.match(r"[A-Za-z_][A-Za-z_0-9]*", spec)
    if not head:
        raise GateSpecParseError(f"expected a gate name in {text!r}", 1)
    name = head.group(0).upper()
    rest = spec[head.end():]

    if not rest:
        if name in _NAMED_GATES:
            return _NAMED_GATES[name].copy()
        raise GateSpecParseError(f"unknown gate {name!r}", 1)

    if not rest.startswith("("):
        raise GateSpecParseError(f"unexpected text after gate name: {rest!r}", head.end() + 1)
    if not rest.endswith(")"):
        raise GateSpecParseError("missing closing parenthesis", len(spec) + 1)
    body = rest[1:-1]
    if not body.strip():
        raise GateSpecParseError("empty argument list", head.end() + 2)
    args = []
    offset = head.end() + 1
    for piece in body.split(","):
        args.append(_parse_angle(piece, offset))
        offset += len(piece) + 1

    if name == "CP":
        if len(args) != 1:
            raise GateSpecParseError("CP takes exactly one angle", head.end() + 2)
        return controlled_phase(args[0])
    if name == "CANONICAL":
        if len(args) != 3:
            raise GateSpecParseError("CANONICAL takes exactly three angles", head.end() + 2)
        return synth.build_canonical(args)
    raise GateSpecParseError(f"gate {name!r} does not take arguments", 1)


def read_matrix_file(path):
    """4x4 complex matrix from text: 4 rows of 4 entries like 0.5+0.5j."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line for line in handle.read().splitlines() if line.strip()]
    if len(lines) != 4:
        raise ValueError(f"matrix file must have 4 rows, found {len(lines)}")
    rows = []
    for line in lines:
        tokens = line.split()
        if len(tokens) != 4:
            raise ValueError(f"matrix rows need 4 entries, found {len(tokens)}")
        rows.append([complex(token) for token in tokens])
    return np.array(rows, dtype=complex)


def _load_gate(args):
    if args.matrix_file:
        matrix = read_matrix_file(args.matrix_file)
    else:
        matrix = parse_gate_spec(args.gate)
    return as_two_qubit_unitary(matrix, args.tolerance)


def _c_pair(value):
    value = complex(value)
    return [value.real, value.imag]


def _encode_matrix(matrix):
    return [[_c_pair(entry) for entry in row] for row in np.asarray(matrix)]


def decode_matrix(encoded):
    """Inverse of the report matrix encoding ([[..[re, im]..]..])."""
    return np.array(
        [[complex(entry[0], entry[1]) for entry in row] for row in encoded]
    )


def _decomposition_report(u, tolerance):
    dec = decompose(u, tolerance)
    residual = frobenius(dec.reconstruct() - u)
    return dec, {
        "weyl": {
            "alpha_x": dec.weyl.alpha_x,
            "alpha_y": dec.weyl.alpha_y,
            "alpha_z": dec.weyl.alpha_z,
        },
        "weyl_annotation": weyl_annotation(dec.weyl),
        "kc_number": kc_number(dec),
        "gate_class": classify(dec).value,
        "global_phase": _c_pair(dec.global_phase),
        "locals": {
            "u_a": _encode_matrix(dec.u_a),
            "u_b": _encode_matrix(dec.u_b),
            "v_a": _encode_matrix(dec.v_a),
            "v_b": _encode_matrix(dec.v_b),
        },
        "reconstruction_residual": residual,
    }


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=2))
        return
    for line in _text_lines(report, indent=0):
        print(line)


def _text_lines(node, indent):
    pad = "  " * indent
    lines = []
    if isinstance(node, dict):
        for key, value in node.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(node, list):
        for value in node:
            if isinstance(value, (dict, list)):
                lines.extend(_text_lines(value, indent))
            else:
                lines.append(f"{pad}- {_scalar(value)}")
    else:
        lines.append(f"{pad}{_scalar(node)}")
    return lines


def _scalar(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _cmd_decompose(args):
    u = _load_gate(args)
    _, report = _decomposition_report(u, args.tolerance)
    _emit(report, args.json)
    return 0


def _cmd_classify(args):
    u = _load_gate(args)
    _, report = _decomposition_report(u, args.tolerance)
    decomposition = schmidt.operator_schmidt(u, args.tolerance)
    g1, g2 = makhlin_invariants(u, args.tolerance)
    report["operator_schmidt"] = {
        "coefficients": [float(s) for s in decomposition.coefficients],
        "number": schmidt.operator_schmidt_number(u, atol=args.tolerance),
    }
    report["makhlin_invariants"] = {"g1": _c_pair(g1), "g2": g2}
    del report["locals"]
    _emit(report, args.json)
    return 0


def _cmd_decide(args):
    u = _load_gate(args)
    report = {}
    scenarios = [args.scenario] if args.scenario else list(_SCENARIOS)
    for key in scenarios:
        decision = locc.decide_partial_invertibility(u, _SCENARIOS[key], args.tolerance)
        report[key] = {
            "decision": decision.decision,
            "kc_number": decision.kc_number,
            "gate_class": decision.gate_class.value,
        }
    _emit(report if len(scenarios) > 1 else report[scenarios[0]], args.json)
    return 0


def _cmd_synthesize(args):
    u = _load_gate(args)
    scenario = _SCENARIOS[args.scenario]
    protocol = locc.synthesize_protocol(u, scenario, args.tolerance)
    state = locc.canonical_input(scenario, protocol.ancilla)
    report_sim = locc.simulate_protocol(state, u, protocol, scenario)
    report = {
        "scenario": args.scenario,
        "ancilla": None
        if protocol.ancilla is None
        else [_c_pair(protocol.ancilla.a), _c_pair(protocol.ancilla.b)],
        "b_measurement": [_encode_matrix(m) for m in protocol.b_measurement],
        "a_corrections": [_encode_matrix(c) for c in protocol.a_corrections],
        "simulated_fidelity": report_sim.fidelity,
        "simulated_residual": report_sim.residual,
        "achieved": report_sim.achieved,
    }
    _emit(report, args.json)
    return 0


def _cmd_factor(args):
    u = _load_gate(args)
    factorization = synth.factor_into_controlled(u, args.tolerance)
    report = {
        "factor_count": len(factorization.factors),
        "global_phase": _c_pair(factorization.global_phase),
        "factors": [
            {
                "theta": factor.theta,
                "left_a": _encode_matrix(factor.left[0]),
                "left_b": _encode_matrix(factor.left[1]),
                "right_a": _encode_matrix(factor.right[0]),
                "right_b": _encode_matrix(factor.right[1]),
            }
            for factor in factorization.factors
        ],
        "local_a": _encode_matrix(factorization.local_a),
        "local_b": _encode_matrix(factorization.local_b),
        "reconstruction_residual": frobenius(factorization.reconstruct() - u),
    }
    _emit(report, args.json)
    return 0


def _cmd_compose(args):
    u = as_two_qubit_unitary(parse_gate_spec(args.gate_u), args.tolerance)
    v = as_two_qubit_unitary(parse_gate_spec(args.gate_v), args.tolerance)
    check = synth.check_composition_bounds(u, v, args.tolerance)
    report = {
        "kc_u": check.k_u,
        "kc_v": check.k_v,
        "kc_uv": check.k_uv,
        "bounds_hold": check.holds,
    }
    _emit(report, args.json)
    return 0


def _cmd_verify(args):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("KCFORGE_SEED", acceptance.DEFAULT_SEED))
    results = acceptance.run_all(seed=seed, samples=args.samples)
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "criterion": r.number,
                        "title": r.title,
                        "passed": r.passed,
                        "details": r.details,
                        "seconds": r.seconds,
                    }
                    for r in results
                ],
                indent=2,
            )
        )
    else:
        for result in results:
            print(acceptance.format_line(result))
    return 0 if all(r.passed for r in results) else 1


def _add_gate_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--gate", help="gate spec, e.g. CNOT or CP(pi/2)")
    group.add_argument("--matrix-file", help="text file with a 4x4 complex matrix")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tolerance", type=float, default=DEFAULT_ATOL, help="absolute numerical tolerance"
    )
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")

    parser = argparse.ArgumentParser(
        prog="kcforge",
        description="Canonical-form analysis and LOCC-inversion toolkit for two-qubit gates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, doc in (
        ("decompose", _cmd_decompose, "canonical coefficients, locals, and phase"),
        ("classify", _cmd_classify, "gate class, Schmidt data, and invariants"),
        ("factor", _cmd_factor, "controlled-phase factorization"),
    ):
        p = sub.add_parser(name, help=doc, parents=[common])
        _add_gate_arguments(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("decide", help="LOCC partial-invertibility decision", parents=[common])
    _add_gate_arguments(p)
    p.add_argument("--scenario", choices=sorted(_SCENARIOS), help="default: all three")
    p.set_defaults(handler=_cmd_decide)

    p = sub.add_parser(
        "synthesize", help="build and simulate an inversion protocol", parents=[common]
    )
    _add_gate_arguments(p)
    p.add_argument("--scenario", choices=["both", "a-only"], required=True)
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("compose", help="interaction-count bounds for a product", parents=[common])
    p.add_argument("gate_u", help="gate spec for U")
    p.add_argument("gate_v", help="gate spec for V")
    p.set_defaults(handler=_cmd_compose)

    p = sub.add_parser(
        "verify", help="run the property-based verification suite", parents=[common]
    )
    p.add_argument("--seed", type=int, default=None, help="suite seed (or KCFORGE_SEED)")
    p.add_argument("--samples", type=int, default=None, help="override per-criterion sample counts")
    p.set_defaults(handler=_cmd_verify)
    return parser


_VALIDATION_ERRORS = (
    GateSpecParseError,
    NotUnitaryError,
    NotInvertibleError,
    ValueError,
    OSError,
)
_NUMERICAL_ERRORS = (
    NumericalDegeneracyError,
    ConvergenceError,
    SearchFailureError,
    DegenerateCountError,
    InconsistentCriteriaError,
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"kcforge: numerical failure: {exc}", file=sys.stderr)
        return 3
    except _VALIDATION_ERRORS as exc:
        print(f"kcforge: {exc}", file=sys.stderr)
        return 2
    except KcforgeError as exc:
        print(f"kcforge: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
