"""End-to-end runs of the command-line frontend."""

import json

import pytest

from spherecrit import (
    HomogeneousPolynomial,
    axis_monomial,
    geometric_power_polynomial,
    weighted_axis_quadratic,
    write_polynomial,
)
from spherecrit.cli import main


@pytest.fixture
def diag123_file(tmp_path):
    path = tmp_path / "diag123.json"
    write_polynomial(weighted_axis_quadratic(3), path)
    return str(path)


@pytest.fixture
def x1cubed_file(tmp_path):
    path = tmp_path / "x1cubed.json"
    write_polynomial(axis_monomial(2, 3), path)
    return str(path)


def test_classify_human_output(diag123_file, capsys):
    assert main(["classify", "--poly", diag123_file]) == 0
    out = capsys.readouterr().out
    assert "critical points: 6" in out
    assert out.count("SOSC") >= 2
    assert "FONC_ONLY=4" in out and "SOSC=2" in out


def test_classify_json_output(diag123_file, capsys):
    assert main(["classify", "--poly", diag123_file, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == 6
    verdicts = sorted(p["verdict"] for p in doc)
    assert verdicts.count("SOSC") == 2
    assert all(set(p) >= {"x", "lambda", "margin", "verdict"} for p in doc)


def test_classify_csv_output(diag123_file, capsys):
    assert main(["classify", "--poly", diag123_file, "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "verdict,lambda,margin,residual,x1,x2,x3"
    assert len(lines) == 7


def test_classify_output_file(diag123_file, tmp_path, capsys):
    target = tmp_path / "out.json"
    assert main(
        ["classify", "--poly", diag123_file, "--json", "--output", str(target)]
    ) == 0
    assert json.loads(target.read_text())


def test_classify_zero_polynomial_exit_3(tmp_path):
    path = tmp_path / "zero.json"
    write_polynomial(HomogeneousPolynomial(2, 2, {}), path)
    assert main(["classify", "--poly", str(path)]) == 3


def test_classify_malformed_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n":2,"d":2,"terms":[{"exp":[1,0],"coef":1.0}]}')
    assert main(["classify", "--poly", str(path)]) == 2
    err = capsys.readouterr().err
    assert "exponent sum 1 != degree 2" in err


def test_classify_missing_file_exit_2(tmp_path):
    assert main(["classify", "--poly", str(tmp_path / "nope.json")]) == 2


def test_detect_witness_output(x1cubed_file, capsys):
    assert main(["detect", "--poly", x1cubed_file, "--point", "0,1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mu"] == pytest.approx(0.0, abs=1e-12)
    assert doc["lambda"] == pytest.approx(0.0, abs=1e-12)
    assert doc["third_singular_value"] <= 1e-10
    assert doc["oracle_on_locus"] is True


def test_detect_no_witness(diag123_file, capsys):
    assert main(["detect", "--poly", diag123_file, "--point", "1,0,0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("no witness: SOSC margin = 1")


def test_detect_not_critical_exit_4(diag123_file, capsys):
    assert main(["detect", "--poly", diag123_file, "--point", "0.7,0.7,0.14"]) == 4
    err = capsys.readouterr().err
    assert "not critical" in err
    assert "FONC residual" in err


def test_detect_normalization_warning(diag123_file, capsys):
    assert main(["detect", "--poly", diag123_file, "--point", "1.001,0,0"]) == 0
    captured = capsys.readouterr()
    assert "normalizing input point" in captured.err


def test_detect_bad_point_exit_2(diag123_file, capsys):
    assert main(["detect", "--poly", diag123_file, "--point", "1,0"]) == 2
    assert main(["detect", "--poly", diag123_file, "--point", "a,b,c"]) == 2


def test_oracle2_off_locus(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_polynomial(geometric_power_polynomial(2, 3), path)
    assert main(["oracle2", "--poly", str(path)]) == 0
    out = capsys.readouterr().out
    assert "on_locus: false" in out
    assert "certificate:" in out


def test_oracle2_on_locus(x1cubed_file, capsys):
    assert main(["oracle2", "--poly", x1cubed_file]) == 0
    assert "on_locus: true" in capsys.readouterr().out


def test_oracle2_rejects_n3(diag123_file, capsys):
    assert main(["oracle2", "--poly", diag123_file]) == 2


def test_oracle2_certify_flag(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_polynomial(geometric_power_polynomial(2, 3), path)
    assert main(["oracle2", "--poly", str(path), "--certify"]) == 0
    assert "certified" in capsys.readouterr().out


def test_witness_d2_suite(capsys):
    assert main(["witness", "--mode", "d2", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "suite witness_d2(n=3): PASS" in out


def test_witness_general_suite(capsys):
    assert main(["witness", "--mode", "general", "--n", "2", "--d", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_witness_degenerate_suite(capsys):
    assert main(["witness", "--mode", "degenerate", "--n", "2", "--d", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_witness_general_needs_degree(capsys):
    assert main(["witness", "--mode", "general", "--n", "2"]) == 2


def test_sample_writes_report(tmp_path, capsys):
    report = tmp_path / "report.json"
    csv_path = tmp_path / "report.csv"
    code = main(
        [
            "sample",
            "--n", "2",
            "--d", "3",
            "--trials", "5",
            "--seed", "7",
            "--output", str(report),
            "--csv", str(csv_path),
            "--dump-dir", str(tmp_path / "dumps"),
        ]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["trials"] == 5
    assert doc["total_degenerate"] == 0
    assert csv_path.exists()
    out = capsys.readouterr().out
    assert "degenerate_hits: 0" in out


def test_sample_stdout_deterministic(tmp_path, capsys):
    args = [
        "sample",
        "--n", "2",
        "--d", "3",
        "--trials", "3",
        "--seed", "1",
        "--output", str(tmp_path / "r.json"),
        "--dump-dir", str(tmp_path / "dumps"),
    ]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second


def test_quad_writes_report(tmp_path, capsys):
    report = tmp_path / "quad.json"
    code = main(
        ["quad", "--n", "3", "--trials", "5", "--seed", "2", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["passed"] is True
    assert "disagreements: 0" in capsys.readouterr().out


def test_cli_17_digit_output(diag123_file, capsys):
    main(["detect", "--poly", diag123_file, "--point", "1,0,0"])
    out = capsys.readouterr().out
    # margin 1 prints as the bare shortest 17-significant-digit form
    assert "margin = 1" in out
