"""CLI contracts: exit codes, formats, determinism."""

import json
import subprocess
import sys

import pytest

from quadred.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestList:
    def test_human_table(self, capsys):
        code, out, _ = run_cli(capsys, "list")
        assert code == 0
        assert "E1-pbm-corrected" in out
        rows = [line for line in out.splitlines() if line and not line.startswith(" ")]
        assert len(rows) - 1 >= 20  # header plus at least twenty rules

    def test_family_filter(self, capsys):
        code, out, _ = run_cli(capsys, "list", "--family", "inverse-exp")
        assert code == 0
        body = [line.split()[0] for line in out.splitlines()[1:] if line and not line.startswith(" ")]
        assert body == ["N1-133", "N2-333", "N3-033", "N4-122", "N5-222", "N6-aeqb"]

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "list", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert isinstance(rows, list)
        assert any(r["id"] == "E1-pbm-corrected" for r in rows)
        assert all({"id", "family", "triple", "coefficient_pattern"} <= set(r) for r in rows)

    def test_json_validates_against_schema(self, capsys):
        import jsonschema

        from quadred.schemas import RULE_DESCRIPTOR_SCHEMA

        _, out, _ = run_cli(capsys, "list", "--format", "json")
        for row in json.loads(out):
            jsonschema.validate(row, RULE_DESCRIPTOR_SCHEMA)


class TestEval:
    def test_rule_value(self, capsys):
        code, out, _ = run_cli(
            capsys, "eval", "E1-pbm-corrected", "--p", "1", "--q", "1",
            "--f-mu", "0", "--f-sigma", "1",
        )
        assert code == 0
        value = float(out.splitlines()[0].split("=")[1])
        assert value == pytest.approx(0.7089815403622064, rel=1e-9)
        assert "abs_error_estimate" in out and "evaluations" in out

    def test_application_value(self, capsys):
        code, out, _ = run_cli(
            capsys, "eval", "yukawa-pair", "--eta1", "1", "--eta2", "2", "--x2", "1"
        )
        assert code == 0
        value = float(out.splitlines()[0].split("=")[1])
        assert value == pytest.approx(0.9740786909377138, rel=1e-12)

    def test_applicability_exit_code(self, capsys):
        code, _, err = run_cli(
            capsys, "eval", "E1-pbm-corrected", "--p", "0", "--q", "1", "--f-sigma", "1"
        )
        assert code == 2
        assert "requires p>0" in err

    def test_unknown_rule_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "eval", "Z9-nope", "--f-sigma", "1")
        assert code == 2

    def test_json_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "eval", "fourier-tau", "--eta1", "1", "--eta2", "0.5",
            "--x2", "1", "--k", "1", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["converged"] is True
        assert doc["value"]["re"] == pytest.approx(3.196415162413308, rel=1e-8)


class TestVerify:
    def test_passing_sweep_exit_zero(self, capsys):
        code, out, err = run_cli(
            capsys, "verify", "--rules", "E1-pbm-corrected,K1-111",
            "--samples", "2", "--seed", "7",
        )
        assert code == 0
        assert "4/4 passed" in err

    def test_erratum_sweep_exit_one(self, capsys):
        code, out, err = run_cli(
            capsys, "verify", "--rules", "E1-uncorrected-pbm", "--samples", "2", "--seed", "7"
        )
        assert code == 1
        assert "FLAGGED" in out

    def test_json_deterministic(self, capsys):
        args = (
            "verify", "--rules", "K1-111", "--samples", "1", "--seed", "7",
            "--format", "json",
        )
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["summary"]["pass"] == 1
        assert doc["records"][0]["seed"] == 7

    def test_verify_json_validates_against_schema(self, capsys):
        import jsonschema

        from quadred.schemas import REPORT_SCHEMA

        # include a failing erratum record so the null-diff branch is covered
        _, out, _ = run_cli(
            capsys, "verify", "--rules", "E1-pbm-corrected,E1-uncorrected-pbm",
            "--samples", "1", "--seed", "3", "--format", "json",
        )
        jsonschema.validate(json.loads(out), REPORT_SCHEMA)

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--rules", "E1-pbm-corrected", "--samples", "1",
            "--seed", "5", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("rule_id,case_index,seed")
        assert len(lines) == 2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys, "verify", "--rules", "E1-pbm-corrected", "--samples", "1",
            "--seed", "5", "--format", "json", "--output", str(target),
        )
        assert code == 0
        assert json.loads(target.read_text())["summary"]["total"] == 1

    def test_unknown_rule_id(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--rules", "Z9-nope", "--samples", "1")
        assert code == 2


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "quadred.cli", "list", "--format", "json"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)
