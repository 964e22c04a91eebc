"""Witness suites, degenerate families, randomized experiments, reports."""

import csv
import json

import numpy as np
import pytest

from spherecrit import (
    ExperimentConfig,
    check_planted_quadratic,
    enumerate_power_critical_points,
    geometric_power_polynomial,
    quadratic_form_polynomial,
    run_degenerate_family,
    run_quadratic_sweep,
    run_random_genericity,
    run_witness_d2,
    run_witness_general,
    weighted_axis_quadratic,
)
from spherecrit.genlab import _dump_polynomial
from spherecrit import read_polynomial


# ---------------------------------------------------------------------------
# Instance builders
# ---------------------------------------------------------------------------


def test_weighted_axis_quadratic_terms():
    p = weighted_axis_quadratic(3)
    assert p.terms == {(2, 0, 0): 0.5, (0, 2, 0): 1.0, (0, 0, 2): 1.5}


def test_geometric_power_terms():
    assert geometric_power_polynomial(2, 3).terms == {(3, 0): 2.0, (0, 3): 4.0}
    assert geometric_power_polynomial(2, 4).terms == {(4, 0): 4.0, (0, 4): 16.0}
    assert geometric_power_polynomial(2, 1).terms == {(1, 0): 0.5, (0, 1): 0.25}


def test_quadratic_form_polynomial_hessian_round_trip():
    rng = np.random.default_rng(0)
    G = rng.standard_normal((4, 4))
    A = 0.5 * (G + G.T)
    f = quadratic_form_polynomial(A)
    x = rng.standard_normal(4)
    assert np.allclose(f.hessian(x), A, atol=1e-12)
    assert f.evaluate(x) == pytest.approx(0.5 * x @ A @ x, rel=1e-12)


def test_power_point_enumeration_counts():
    # Odd d: two points per nonempty support; even d: 2^(|S|) per support.
    assert len(enumerate_power_critical_points(2, 3)) == 2 * 3
    assert len(enumerate_power_critical_points(3, 3)) == 2 * 7
    assert len(enumerate_power_critical_points(2, 4)) == 8  # 2 + 2 + 4
    assert len(enumerate_power_critical_points(3, 4)) == 26  # 3^3 - 1
    assert len(enumerate_power_critical_points(2, 1)) == 2


def test_power_point_enumeration_is_critical():
    for n, d in [(2, 3), (3, 4), (2, 5), (3, 1)]:
        p = geometric_power_polynomial(n, d)
        for x, lam in enumerate_power_critical_points(n, d):
            assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
            assert np.linalg.norm(p.gradient(x) - lam * x) <= 1e-9 * max(
                1.0, p.coefficient_norm
            )


def test_power_point_enumeration_rejects_d2():
    with pytest.raises(ValueError):
        enumerate_power_critical_points(2, 2)


# ---------------------------------------------------------------------------
# Deterministic suites
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_witness_d2_suite_passes(n):
    report = run_witness_d2(n)
    assert report.passed, [c.name for c in report.checks if not c.passed]


def test_witness_d2_details():
    report = run_witness_d2(3)
    names = [c.name for c in report.checks]
    assert "critical_count" in names
    assert "bordered_determinant_nonzero" in names
    det_check = next(c for c in report.checks if c.name == "bordered_determinant_nonzero")
    assert "det -2" in det_check.detail  # first axis value


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("d", [1, 3, 4, 5])
def test_witness_general_suite_passes(n, d):
    report = run_witness_general(n, d)
    assert report.passed, [c.name for c in report.checks if not c.passed]


def test_witness_general_rejects_quadratic():
    with pytest.raises(ValueError, match="d = 2"):
        run_witness_general(2, 2)


@pytest.mark.parametrize(
    "kind,n,d",
    [
        ("repeated_lambda1", 2, 2),
        ("repeated_lambda1", 3, 2),
        ("single_monomial", 2, 3),
        ("single_monomial", 3, 3),
        ("single_monomial", 2, 4),
        ("single_monomial", 3, 4),
    ],
)
def test_degenerate_family_suites_pass(kind, n, d):
    report = run_degenerate_family(kind, n, d)
    assert report.passed, [
        (c.name, c.detail) for c in report.checks if not c.passed
    ]


def test_degenerate_family_validates_arguments():
    with pytest.raises(ValueError, match="d = 2"):
        run_degenerate_family("repeated_lambda1", 3, 3)
    with pytest.raises(ValueError, match="d >= 3"):
        run_degenerate_family("single_monomial", 3, 2)
    with pytest.raises(ValueError, match="unknown kind"):
        run_degenerate_family("nonsense", 3, 2)


# ---------------------------------------------------------------------------
# Randomized experiments
# ---------------------------------------------------------------------------


def test_random_genericity_no_degenerate_hits(tmp_path):
    config = ExperimentConfig(
        n=2, d=3, trials=40, seed=5, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    assert report.total_degenerate == 0
    assert report.total_rank_witnesses == 0
    assert report.dumped_files == []
    assert report.min_sosc_margin is not None and report.min_sosc_margin > 0
    assert report.margin_quantiles["min"] == pytest.approx(report.min_sosc_margin)


def test_random_genericity_records_are_conserved(tmp_path):
    config = ExperimentConfig(
        n=3, d=3, trials=10, seed=9, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    assert len(report.records) == 10
    for record in report.records:
        assert sum(record.verdict_histogram.values()) == record.critical_count
        assert record.critical_count >= 2
        assert record.oracle_on_locus is None  # n = 3: no exact oracle


def test_random_genericity_quadratic_case_matches_eigen_rule(tmp_path):
    # d = 2 draws: zero degenerate hits, consistent with a simple least
    # eigenvalue on every trial.
    from spherecrit import quadratic_degeneracy, random_polynomial
    from spherecrit.genlab import SEED_STRIDE

    config = ExperimentConfig(
        n=2, d=2, trials=100, seed=21, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    assert report.total_degenerate == 0
    for record in report.records:
        f = random_polynomial(2, 2, config.seed * SEED_STRIDE + record.trial)
        A = f.hessian(np.zeros(2))
        assert not quadratic_degeneracy(A).degenerate


def test_random_genericity_oracle_recorded_for_n2(tmp_path):
    config = ExperimentConfig(
        n=2, d=4, trials=5, seed=3, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    assert all(record.oracle_on_locus is False for record in report.records)


def test_random_genericity_reproducible(tmp_path):
    config = ExperimentConfig(
        n=2, d=3, trials=8, seed=13, dump_dir=str(tmp_path / "dumps")
    )
    a = run_random_genericity(config)
    b = run_random_genericity(config)
    assert a.to_json(include_runtime=False) == b.to_json(include_runtime=False)


def test_random_genericity_mode_guard(tmp_path):
    config = ExperimentConfig(
        n=2, d=3, trials=1, seed=0, mode="witness_d2", dump_dir=str(tmp_path)
    )
    with pytest.raises(ValueError, match="mode"):
        run_random_genericity(config)


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n=2, d=3, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=0, d=3, trials=1)


def test_report_json_round_trip(tmp_path):
    config = ExperimentConfig(
        n=2, d=3, trials=4, seed=2, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    doc = json.loads(report.to_json())
    assert doc["trials"] == 4
    assert doc["total_degenerate"] == 0
    assert len(doc["records"]) == 4
    assert "runtime_seconds" in doc
    assert "runtime_seconds" not in json.loads(report.to_json(include_runtime=False))


def test_report_csv_format(tmp_path):
    config = ExperimentConfig(
        n=2, d=3, trials=4, seed=2, dump_dir=str(tmp_path / "dumps")
    )
    report = run_random_genericity(config)
    path = tmp_path / "report.csv"
    report.write_csv(path)
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == [
        "seed",
        "critical_count",
        "sosc_count",
        "fonc_only_count",
        "degenerate_count",
        "min_margin",
    ]
    assert len(rows) == 5
    for row in rows[1:]:
        assert int(row[4]) == 0
        assert float(row[5]) > 0


def test_dump_polynomial_round_trip(tmp_path):
    f = geometric_power_polynomial(2, 3)
    path = _dump_polynomial(f, str(tmp_path / "dumps"), "probe.json")
    assert read_polynomial(path) == f


# ---------------------------------------------------------------------------
# Quadratic sweep
# ---------------------------------------------------------------------------


def test_quadratic_sweep_agreement():
    report = run_quadratic_sweep(4, 40, seed=8)
    assert report.passed
    assert report.disagreements == []
    assert report.degenerate_count == 0
    assert len(report.planted) == 2


def test_quadratic_sweep_planted_detection():
    for k in (2, 3):
        result = check_planted_quadratic(5, k, seed=100 + k)
        assert result["quadratic_rule"] is True
        assert result["pipeline"] is True


def test_identity_matrix_fully_degenerate():
    # Every sphere point is an SONC-degenerate minimizer of x.x / 2.
    from spherecrit import SolverConfig, Verdict, classify_all, quadratic_degeneracy

    qd = quadratic_degeneracy(np.eye(3))
    assert qd.degenerate and qd.lambda1_multiplicity == 3
    f = quadratic_form_polynomial(np.eye(3))
    points = classify_all(f, SolverConfig(seed=0, starts=40))
    assert points
    assert all(p.verdict is Verdict.SONC_DEGENERATE for p in points)


def test_quadratic_sweep_report_json():
    report = run_quadratic_sweep(3, 5, seed=1)
    doc = json.loads(report.to_json())
    assert doc["passed"] is True
    assert doc["trials"] == 5
