"""
Test for result table rendering.
"""

import json

from qmc import scattering
from qmc.analysis import BOUND_HEADERS, analyze
from qmc.checks import CheckSuite, Check
from qmc.report import TableFormatter, format_number


def setup_table():
    """Create a small bound table for testing"""
    table = TableFormatter(BOUND_HEADERS)
    table.add_row(0, 0.0, 4.0, 4.0)
    table.add_row(2, 0.0144398, 3.97103, 3.97103)
    table.add_row(3, 0.02, 3.9598, float("nan"))
    return table


def test_pretty_table():
    """Test box-drawing rendering"""
    print("Test: Pretty table...")

    table = setup_table().format_table()
    assert "┌" in table, "Table should have box-drawing characters"
    assert "lambda_min" in table, "Table should have 'lambda_min' header"
    assert "0.0144398" in table, "Floats keep six significant digits"
    assert "nan" in table, "Missing closed form renders as nan"

    status = TableFormatter(["residual", "value", "status"])
    status.add_row("unitarity", 1e-16, True)
    status.add_row("defect", 0.5, None)
    rendered = status.format_table()
    assert "PASS" in rendered, "True renders as PASS"
    assert "—" in rendered, "None renders as a dash"

    print("✓ Pretty table works")


def test_csv_format():
    """Test CSV output uses fixed exponent formatting"""
    print("Test: CSV format...")

    lines = setup_table().format_table("csv").splitlines()
    assert lines[0] == "n,lambda_min,direct_bound,closed_form_bound", "CSV header"
    assert lines[1] == "0,0.000000000000e+00,4.000000000000e+00,4.000000000000e+00"
    assert lines[3].endswith(",nan"), "NaN is written as nan"
    assert format_number(0.25) == "2.500000000000e-01"
    assert format_number(float("nan")) == "nan"

    print("✓ CSV format works")


def test_json_format():
    """Test JSON format output"""
    print("Test: JSON format...")

    data = json.loads(setup_table().format_table("json"))
    assert data["total_rows"] == 3, "Should have 3 rows"
    assert [c["name"] for c in data["columns"]] == list(BOUND_HEADERS)
    assert data["columns"][0]["type"] == "integer", "n is an integer column"
    assert data["columns"][1]["type"] == "number", "lambda_min is a number column"
    assert data["rows"][2][3] is None, "NaN becomes null"

    print("✓ JSON format works correctly")


def test_row_width_is_checked():
    """Test that rows must match the header"""
    print("Test: Row width...")

    table = TableFormatter(["a", "b"])
    try:
        table.add_row(1)
    except ValueError:
        pass
    else:
        raise AssertionError("short row should be rejected")
    assert table.rows == [], "Rejected rows are not stored"

    print("✓ Row width is checked")


def test_check_suite_table():
    """Test that a failing check shows up in table and JSON"""
    print("Test: Check suite table...")

    suite = CheckSuite("demo")
    suite.add(Check.close("r", 0.5, 0.5, 1e-12))
    suite.add(Check.at_most("residual", 1e-9, 1e-3))
    assert not suite.verify(), "One failing check fails the suite"
    assert "FAIL" in suite.table().format_table()
    data = json.loads(suite.to_json())
    assert data["goal"] == "demo"
    assert data["passed"] is False
    assert [c["passed"] for c in data["checks"]] == [True, False]

    print("✓ Check suite table works")


def test_analysis_tables(qutrit):
    """Test the tables of a full analysis"""
    print("Test: Analysis tables...")

    report = analyze(qutrit, max_n=4, alphas=(0.25,), samples=5, defect_n=2)
    assert report.certified
    assert len(report.bound_table().rows) == 5
    summary = report.summary_table().format_table()
    assert "fixed space of Z′" in summary
    assert "duality residual α=0.25" in summary
    data = report.to_dict()
    assert data["n0"] == 2 and data["complete"] is True
    assert len(data["defect"]) == 2
    assert json.dumps(data), "report serializes"

    print("✓ Analysis tables work")


def test_analysis_computes_fixed_spaces_once(qutrit, monkeypatch):
    """Test that the certificate reuses the fixed spaces of the analysis"""
    print("Test: Fixed spaces computed once...")

    calls = []
    original = scattering.fixed_space_dim

    def counting(*args, **kwargs):
        calls.append(args)
        return original(*args, **kwargs)

    monkeypatch.setattr(scattering, "fixed_space_dim", counting)
    report = analyze(qutrit, max_n=3, alphas=(), samples=2, defect_n=0)
    assert report.certified
    assert (report.fix_dim_Z, report.fix_dim_coupling) == (1, 1)
    assert len(calls) == 2, f"Z′ and T̂Δ once each, got {len(calls)} calls"

    print("✓ Fixed spaces computed once")
