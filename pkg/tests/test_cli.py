import json
import logging

import numpy as np
import pytest
from typer.testing import CliRunner

import leech
from cli import app, check_minimal
from surface import CheckFailure

runner = CliRunner()


@pytest.fixture(autouse=True)
def _detach_log_handlers():
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "kummer_chamber", False)]:
        root.removeHandler(handler)
        handler.close()


def test_poly_single_identity():
    result = runner.invoke(app, ["poly", "--identity", "kkm_supersingular_dual", "--points", "5"])
    assert result.exit_code == 0
    assert "kkm_supersingular_dual: pass" in result.stdout


def test_poly_unknown_identity():
    result = runner.invoke(app, ["poly", "--identity", "no_such_identity"])
    assert result.exit_code == 2


def test_fixture_prints_canonical_json():
    result = runner.invoke(app, ["fixture", "--case", "generic-d4"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["case_id"] == "generic-d4"
    assert data["root_type"] == "D4"


def test_fixture_skeleton_for_new_case(tmp_path):
    out = tmp_path / "new-case.json"
    result = runner.invoke(
        app,
        [
            "fixture",
            "--case",
            "new-case",
            "--cases-dir",
            str(tmp_path),
            "--root-type",
            "A2",
            "--generators",
            "2",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["case_id"] == "new-case"
    assert list(data["generators"]) == ["a0", "a1"]


@pytest.mark.parametrize("case", ["../../etc/x", "no such case!", ""])
def test_fixture_rejects_invalid_case_id(tmp_path, case):
    out = tmp_path / "x.json"
    result = runner.invoke(
        app, ["fixture", "--case", case, "--cases-dir", str(tmp_path), "--out", str(out)]
    )
    assert result.exit_code == 2
    assert not out.exists()


def test_octads_ovals():
    result = runner.invoke(app, ["octads", "--ovals"])
    assert result.exit_code == 0
    ovals = json.loads(result.stdout)
    assert len(ovals) == 168
    assert all(len(q["points"]) == 6 for q in ovals)


def test_verify_steiner_only(tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(
        app, ["verify", "--checks", "steiner", "--cases", "generic-d4", "--out", str(out)]
    )
    assert result.exit_code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert [c["id"] for c in report["checks"]] == ["steiner"]
    assert report["checks"][0]["status"] == "pass"
    assert report["checks"][0]["actual"]["octads"] == 759
    assert (tmp_path / "report.jsonl").exists()
    assert (tmp_path / "verify.log").exists()


def test_verify_resume_skips_passed_checks(tmp_path):
    out = tmp_path / "report.md"
    args = ["verify", "--checks", "steiner", "--cases", "generic-d4", "--out", str(out)]
    assert runner.invoke(app, [*args, "--format", "md"]).exit_code == 0
    journal = (tmp_path / "report.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(journal) == 1

    assert runner.invoke(app, [*args, "--format", "md", "--resume"]).exit_code == 0
    journal = (tmp_path / "report.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(journal) == 1
    assert "| steiner | pass |" in out.read_text(encoding="utf-8")


def test_verify_unknown_case(tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "--cases", "nope", "--out", str(out)])
    assert result.exit_code == 2
    assert not out.exists()


def test_verify_unknown_check(tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "--checks", "everything", "--out", str(out)])
    assert result.exit_code == 2


def test_fibration_unknown_id():
    result = runner.invoke(app, ["fibration", "--case", "jacobian-ordinary", "--id", "nope"])
    assert result.exit_code == 2


def test_faces_unknown_case():
    result = runner.invoke(app, ["faces", "--case", "jacobian-supersingular"])
    assert result.exit_code == 2


def test_check_minimal_counts_members(minimal_shell):
    assert check_minimal(minimal_shell)["members"] == leech.MINIMAL_COUNT


def test_check_minimal_rejects_a_non_member(minimal_shell):
    shell = minimal_shell.copy()
    row = int(np.flatnonzero(np.abs(shell).max(axis=1) == 3)[0])
    col = int(np.flatnonzero(np.abs(shell[row]) == 1)[0])
    shell[row, col] = -shell[row, col]
    with pytest.raises(CheckFailure, match="outside the lattice"):
        check_minimal(shell)
