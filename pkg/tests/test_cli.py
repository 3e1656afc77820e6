"""Tests for gate-spec parsing, report round trips, and CLI exit codes."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcforge import acceptance, cli
from kcforge.errors import GateSpecParseError
from kcforge.gates import CNOT, CZ, SWAP, canonical_exponential, controlled_phase
from kcforge.linalg import frobenius


class TestParseGateSpec:
    def test_named_gates(self):
        assert frobenius(cli.parse_gate_spec("CNOT") - CNOT) == 0
        assert frobenius(cli.parse_gate_spec("swap") - SWAP) == 0

    def test_cp_pi_is_cz(self):
        assert frobenius(cli.parse_gate_spec("CP(pi)") - CZ) < 1e-15

    def test_canonical(self):
        got = cli.parse_gate_spec("CANONICAL(0.3,0.2,0.1)")
        assert frobenius(got - canonical_exponential(0.3, 0.2, 0.1)) < 1e-15

    @pytest.mark.parametrize(
        "text,value",
        [
            ("CP(pi/4)", np.pi / 4),
            ("CP(-pi)", -np.pi),
            ("CP(2*pi/3)", 2 * np.pi / 3),
            ("CP(0.5)", 0.5),
            ("CP(1.5e-1)", 0.15),
        ],
    )
    def test_angle_expressions(self, text, value):
        assert frobenius(cli.parse_gate_spec(text) - controlled_phase(value)) < 1e-12

    def test_malformed_cp_reports_column(self):
        with pytest.raises(GateSpecParseError) as err:
            cli.parse_gate_spec("CP(")
        assert err.value.position == 4

    def test_unknown_gate(self):
        with pytest.raises(GateSpecParseError):
            cli.parse_gate_spec("TOFFOLI")

    def test_wrong_arity(self):
        with pytest.raises(GateSpecParseError):
            cli.parse_gate_spec("CANONICAL(0.1,0.2)")
        with pytest.raises(GateSpecParseError):
            cli.parse_gate_spec("CP(1,2)")

    @settings(max_examples=40, deadline=None)
    @given(
        st.floats(-0.78, 0.78, allow_nan=False),
        st.floats(-0.78, 0.78, allow_nan=False),
        st.floats(-0.78, 0.78, allow_nan=False),
    )
    def test_canonical_round_trips_through_text(self, ax, ay, az):
        spec = f"CANONICAL({ax!r},{ay!r},{az!r})"
        got = cli.parse_gate_spec(spec)
        assert frobenius(got - canonical_exponential(ax, ay, az)) < 1e-12


class TestCommands:
    def run(self, capsys, *argv):
        code = cli.main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    def test_decompose_cnot_json(self, capsys):
        code, out, _ = self.run(capsys, "decompose", "--gate", "CNOT", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["kc_number"] == 1
        assert report["weyl"]["alpha_x"] == pytest.approx(np.pi / 4, abs=1e-9)
        assert abs(report["weyl"]["alpha_y"]) < 1e-9
        assert report["weyl_annotation"] == "CNOT-class"

    def test_decompose_identity(self, capsys):
        code, out, _ = self.run(capsys, "decompose", "--gate", "I", "--json")
        report = json.loads(out)
        assert code == 0
        assert report["gate_class"] == "local-unitary"
        assert max(abs(v) for v in report["weyl"].values()) < 1e-9

    def test_decompose_report_round_trip(self, capsys):
        # the emitted report carries enough to rebuild the gate exactly
        code, out, _ = self.run(capsys, "decompose", "--gate", "CNOT", "--json")
        assert code == 0
        report = json.loads(out)
        phase = complex(*report["global_phase"])
        u_a = cli.decode_matrix(report["locals"]["u_a"])
        u_b = cli.decode_matrix(report["locals"]["u_b"])
        v_a = cli.decode_matrix(report["locals"]["v_a"])
        v_b = cli.decode_matrix(report["locals"]["v_b"])
        core = canonical_exponential(
            report["weyl"]["alpha_x"], report["weyl"]["alpha_y"], report["weyl"]["alpha_z"]
        )
        rebuilt = phase * np.kron(u_a, u_b) @ core @ np.kron(v_a, v_b)
        assert frobenius(rebuilt - CNOT) < 1e-8

    def test_decide_swap_none(self, capsys):
        code, out, _ = self.run(
            capsys, "decide", "--gate", "SWAP", "--scenario", "none", "--json"
        )
        assert code == 0
        report = json.loads(out)
        assert report["decision"] is True and report["kc_number"] == 3

    def test_decide_all_scenarios(self, capsys):
        code, out, _ = self.run(capsys, "decide", "--gate", "CNOT", "--json")
        report = json.loads(out)
        assert code == 0
        assert report["both"]["decision"] and report["a-only"]["decision"]

    def test_classify(self, capsys):
        code, out, _ = self.run(capsys, "classify", "--gate", "ISWAP", "--json")
        report = json.loads(out)
        assert code == 0
        assert report["gate_class"] == "matchgate"
        assert report["operator_schmidt"]["number"] == 4

    def test_synthesize(self, capsys):
        code, out, _ = self.run(
            capsys, "synthesize", "--gate", "CP(1.2)", "--scenario", "both", "--json"
        )
        report = json.loads(out)
        assert code == 0
        assert report["achieved"] is True
        assert report["simulated_fidelity"] > 1 - 1e-9

    def test_synthesize_refuses_three_axis(self, capsys):
        code, _, err = self.run(
            capsys,
            "synthesize",
            "--gate",
            "CANONICAL(0.5,0.4,0.3)",
            "--scenario",
            "a-only",
        )
        assert code == 2
        assert "count" in err

    def test_factor(self, capsys):
        code, out, _ = self.run(capsys, "factor", "--gate", "CNOT", "--json")
        report = json.loads(out)
        assert code == 0
        assert report["factor_count"] == 1
        assert report["reconstruction_residual"] < 1e-8

    def test_compose(self, capsys):
        code, out, _ = self.run(capsys, "compose", "CNOT", "CNOT_BA", "--json")
        report = json.loads(out)
        assert code == 0
        assert (report["kc_u"], report["kc_v"], report["kc_uv"]) == (1, 1, 2)
        assert report["bounds_hold"] is True

    def test_matrix_file_input(self, capsys, tmp_path):
        path = tmp_path / "gate.txt"
        lines = []
        for row in CNOT:
            lines.append(" ".join(f"{z.real:+.17g}{z.imag:+.17g}j" for z in row))
        path.write_text("\n".join(lines))
        code, out, _ = self.run(capsys, "decompose", "--matrix-file", str(path), "--json")
        assert code == 0
        assert json.loads(out)["kc_number"] == 1

    def test_nonunitary_matrix_file_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("\n".join(["1 0 0 0"] * 4))
        code, _, err = self.run(capsys, "decompose", "--matrix-file", str(path))
        assert code == 2
        assert "defect" in err

    def test_parse_error_exits_2(self, capsys):
        code, _, err = self.run(capsys, "decompose", "--gate", "CP(")
        assert code == 2
        assert "column 4" in err


def test_verify_is_reproducible():
    first = acceptance.run_all(seed=7, samples=4)
    second = acceptance.run_all(seed=7, samples=4)
    assert [(r.passed, r.details) for r in first] == [
        (r.passed, r.details) for r in second
    ]


def test_verify_cli_quick(capsys):
    code = cli.main(["verify", "--samples", "3", "--seed", "11"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == len(acceptance.criterion_numbers())
