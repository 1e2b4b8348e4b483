"""
Tests for the command-line interface.
"""

import json
import logging

import numpy as np
import pytest

from qmc.cli import EXIT_GUARD, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, main
from qmc.dilation import TensorDilation
from qmc.specfile import dump_dilation_spec, dump_road_coloring


@pytest.fixture(autouse=True)
def _drop_cli_handlers():
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


@pytest.fixture
def qutrit_file(tmp_path, qutrit):
    path = tmp_path / "qutrit.json"
    dump_dilation_spec(qutrit, path, "environment_system")
    return path


@pytest.fixture
def trivial_file(tmp_path, qutrit):
    path = tmp_path / "trivial.json"
    dump_dilation_spec(TensorDilation.create(3, 2, np.eye(6), qutrit.psi, qutrit.phi), path)
    return path


def test_validate_passes(qutrit_file, capsys):
    assert main(["validate", str(qutrit_file)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "unitarity" in out
    assert "FAIL" not in out


def test_validate_rejects_non_unitary(tmp_path, qutrit, capsys):
    path = tmp_path / "scaled.json"
    dump_dilation_spec(TensorDilation.create(3, 2, 1.1 * qutrit.u, qutrit.psi, qutrit.phi), path)
    assert main(["validate", str(path)]) == EXIT_VALIDATION
    assert "FAIL" in capsys.readouterr().out


def test_validate_reports_pure_environment(tmp_path, capsys):
    path = tmp_path / "pure.json"
    dump_dilation_spec(TensorDilation.create(2, 2, np.eye(4), np.diag([1.0, 0.0]), np.diag([0.5, 0.5])), path)
    assert main(["validate", str(path)]) == EXIT_VALIDATION
    out = capsys.readouterr().out
    assert "psi min eigenvalue" in out
    assert "FAIL" in out

    assert main(["analyze", str(path), "--out", "json"]) == EXIT_VALIDATION
    data = json.loads(capsys.readouterr().out)
    assert data["validation"]["generator"] is None
    assert data["validation"]["passed"] is False


def test_malformed_json_exits_with_parse_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"d": 3,')
    assert main(["validate", str(path)]) == EXIT_PARSE
    assert "broken.json:1:" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "absent.json")]) == EXIT_PARSE


def test_analyze_csv(qutrit_file, capsys):
    assert main(["analyze", str(qutrit_file), "--out", "csv", "--max-n", "4", "--samples", "3", "--defect-n", "1"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,lambda_min,direct_bound,closed_form_bound"
    assert len(lines) == 6
    assert lines[1].startswith("0,")


def test_analyze_json(qutrit_file, capsys):
    args = ["analyze", str(qutrit_file), "--out", "json", "--max-n", "3", "--alpha", "0", "--alpha", "0.5"]
    assert main(args + ["--samples", "3", "--defect-n", "1"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["n0"] == 2
    assert data["complete"] is True
    assert set(data["duality"]) == {"0", "0.5"}


def test_analyze_trivial_interaction(trivial_file, capsys):
    assert main(["analyze", str(trivial_file), "--out", "json", "--max-n", "3", "--samples", "2", "--defect-n", "1"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["complete"] is False
    assert data["n0"] is None
    assert all(row["closed_form_bound"] is None for row in data["bounds"])
    assert all(row["direct_bound"] == 4.0 for row in data["bounds"])


def test_analyze_validation_only(qutrit_file, capsys):
    assert main(["analyze", str(qutrit_file), "--max-n", "0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "commutant" in out
    assert "n0" not in out


def test_classical(tmp_path, coloring, capsys):
    path = tmp_path / "coloring.json"
    dump_road_coloring(coloring, path)
    assert main(["classical", str(path), "--n-max", "5", "--enumerate-max", "4"]) == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "n,exact_nonsync,binomial_sum,closed_form,mixing_bound"
    assert len(lines) == 7
    assert float(lines[3].split(",")[1]) == pytest.approx(31 / 36, abs=1e-12)
    assert "synchronizable: true" in captured.err
    assert "oracle agreement: true" in captured.err


def test_classical_enumeration_guard(tmp_path, coloring, capsys):
    path = tmp_path / "coloring.json"
    dump_road_coloring(coloring, path)
    assert main(["classical", str(path), "--n-max", "20", "--enumerate-max", "20"]) == EXIT_GUARD


def test_alternating_weights_must_be_a_triple(tmp_path, coloring):
    path = tmp_path / "coloring.json"
    dump_road_coloring(coloring, path)
    assert main(["classical", str(path), "--alternating", "0.5,0.5"]) == EXIT_PARSE


def test_reproduce_json(capsys):
    assert main(["reproduce", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert all(check["passed"] for check in data["checks"])


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["simulate"])


def test_verbose_flag(qutrit_file, capsys):
    assert main(["-vv", "validate", str(qutrit_file)]) == EXIT_OK
    assert "DEBUG qmc.cli: running validate" in capsys.readouterr().err
