"""Experiment harness: witness suites, degenerate families, random sampling.

Deterministic witness suites exercise closed-form instances whose critical
structure is known exactly; they must pass exactly, not statistically.  The
randomized runners sample the coefficient space and check that degeneracy
never occurs off the constructed instances, dumping any offending polynomial
to disk for inspection.

Reports are plain dataclasses with JSON and CSV views.  Everything is
deterministic given the config seed; the only non-reproducible field is
``runtime_seconds``, which the byte-stable serializations can omit.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import (
    Verdict,
    classify_all,
    classify_point,
    tangent_basis,
)
from .critsolve import SolverConfig, critical_tolerance, find_critical_pairs
from .degeneracy import (
    bordered_determinant,
    bordered_scale,
    build_witness_matrix,
    detect_sosc_failure,
    exact_oracle_n2,
    quadratic_degeneracy,
)
from .polyhom import HomogeneousPolynomial, random_polynomial, write_polynomial

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ExperimentReport",
    "CheckResult",
    "SuiteReport",
    "QuadSweepReport",
    "weighted_axis_quadratic",
    "geometric_power_polynomial",
    "axis_monomial",
    "quadratic_form_polynomial",
    "enumerate_power_critical_points",
    "run_random_genericity",
    "run_witness_d2",
    "run_witness_general",
    "run_degenerate_family",
    "run_quadratic_sweep",
    "check_planted_quadratic",
]

SEED_STRIDE = 1_000_003  # per-trial seeds: base * SEED_STRIDE + trial


# ---------------------------------------------------------------------------
# Constructed instances
# ---------------------------------------------------------------------------


def weighted_axis_quadratic(n: int) -> HomogeneousPolynomial:
    """(x1^2 + 2 x2^2 + ... + n xn^2) / 2: critical points are the signed axes
    with multiplier k at the k-th axis, and only the first axis is SOSC."""
    if n < 1:
        raise ValueError("need n >= 1")
    terms = {}
    for k in range(n):
        exp = [0] * n
        exp[k] = 2
        terms[tuple(exp)] = 0.5 * (k + 1)
    return HomogeneousPolynomial(n, 2, terms)


def geometric_power_polynomial(n: int, d: int) -> HomogeneousPolynomial:
    """sum_k alpha^k xk^d with alpha = 2^(d-2), a degeneracy-free instance.

    For every d != 2 all of its real critical points keep the bordered
    determinant away from zero, so it anchors the non-degenerate side of the
    test suites.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    alpha = 2.0 ** (d - 2)
    terms = {}
    for k in range(n):
        exp = [0] * n
        exp[k] = d
        terms[tuple(exp)] = alpha ** (k + 1)
    return HomogeneousPolynomial(n, d, terms)


def axis_monomial(n: int, d: int) -> HomogeneousPolynomial:
    """x1^d: for d >= 3 the entire subsphere x1 = 0 is critical and degenerate."""
    exp = [0] * n
    exp[0] = d
    return HomogeneousPolynomial(n, d, {tuple(exp): 1.0})


def quadratic_form_polynomial(A) -> HomogeneousPolynomial:
    """x^T A x / 2 for symmetric A, so that hess f == A everywhere."""
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise ValueError(f"A must be square, got shape {A.shape}")
    terms = {}
    for i in range(n):
        for j in range(i, n):
            exp = [0] * n
            exp[i] += 1
            exp[j] += 1
            coef = 0.5 * A[i, i] if i == j else 0.5 * (A[i, j] + A[j, i])
            if coef != 0.0:
                terms[tuple(exp)] = float(coef)
    return HomogeneousPolynomial(n, 2, terms)


def _axis(n: int, k: int) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e


def enumerate_power_critical_points(n: int, d: int) -> list[tuple[np.ndarray, float]]:
    """Closed-form real critical points of the geometric power polynomial.

    Stationarity forces xk = 0 or xk^(d-2) = lam / (d alpha^k) on each
    coordinate, so points are indexed by a nonempty support set plus sign
    data: for odd d the sign of every coordinate matches the sign of lam and
    both lam branches occur; for even d only lam > 0 is feasible and each
    supported coordinate picks a sign freely.  Support enumeration is
    2^n - 1 sets, kept to n <= 4; larger n falls back to the multistart
    solver.
    """
    if d == 2:
        raise ValueError("d = 2 is the quadratic case; its enumeration is the eigenbasis")
    p = geometric_power_polynomial(n, d)
    if n > 4:
        found = find_critical_pairs(p, SolverConfig(seed=0))
        return [(pair.x, pair.lam) for pair in found.pairs]
    alpha = 2.0 ** (d - 2)
    if d == 1:
        c = np.array([alpha ** (k + 1) for k in range(n)])
        nrm = float(np.linalg.norm(c))
        u = c / nrm
        return [(-u, -nrm), (u, nrm)]

    points: list[tuple[np.ndarray, float]] = []
    exponent = 1.0 / (d - 2)
    for mask in range(1, 2**n):
        support = [k for k in range(n) if mask >> k & 1]
        coef = np.array([(d * alpha ** (k + 1)) ** (-exponent) for k in support])
        lam_mag = float(np.sum(coef**2) ** (-(d - 2) / 2.0))
        radial = lam_mag**exponent * coef  # |xk| on the support
        if d % 2 == 1:
            for lam_sign in (-1.0, 1.0):
                x = np.zeros(n)
                x[support] = lam_sign * radial
                points.append((x, lam_sign * lam_mag))
        else:
            for signs in range(2 ** len(support)):
                x = np.zeros(n)
                for pos, k in enumerate(support):
                    s = 1.0 if signs >> pos & 1 else -1.0
                    x[k] = s * radial[pos]
                points.append((x, lam_mag))
    points.sort(key=lambda item: (item[1], tuple(item[0])))
    return points


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass
class ExperimentConfig:
    n: int
    d: int
    trials: int
    seed: int = 0
    mode: str = "random"
    starts: int | None = None
    tol_crit: float = 1e-9
    tol_class: float = 1e-7
    tol_rank: float = 1e-6
    dump_dir: str = "degenerate_dumps"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")


@dataclass
class TrialRecord:
    trial: int
    poly_seed: int
    critical_count: int
    verdict_histogram: dict[str, int]
    min_sosc_margin: float | None
    degenerate_hits: int
    rank_witness_hits: int
    oracle_on_locus: bool | None

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "poly_seed": self.poly_seed,
            "critical_count": self.critical_count,
            "verdict_histogram": dict(self.verdict_histogram),
            "min_sosc_margin": self.min_sosc_margin,
            "degenerate_hits": self.degenerate_hits,
            "rank_witness_hits": self.rank_witness_hits,
            "oracle_on_locus": self.oracle_on_locus,
        }


@dataclass
class ExperimentReport:
    mode: str
    n: int
    d: int
    trials: int
    seed: int
    records: list[TrialRecord]
    total_degenerate: int
    total_rank_witnesses: int
    min_sosc_margin: float | None
    margin_quantiles: dict[str, float] | None
    dumped_files: list[str]
    runtime_seconds: float

    def to_dict(self, include_runtime: bool = True) -> dict:
        doc = {
            "mode": self.mode,
            "n": self.n,
            "d": self.d,
            "trials": self.trials,
            "seed": self.seed,
            "total_degenerate": self.total_degenerate,
            "total_rank_witnesses": self.total_rank_witnesses,
            "min_sosc_margin": self.min_sosc_margin,
            "margin_quantiles": self.margin_quantiles,
            "dumped_files": list(self.dumped_files),
            "records": [r.to_dict() for r in self.records],
        }
        if include_runtime:
            doc["runtime_seconds"] = self.runtime_seconds
        return doc

    def to_json(self, include_runtime: bool = True) -> str:
        import json

        return json.dumps(self.to_dict(include_runtime), indent=2) + "\n"

    def write_csv(self, path) -> None:
        """One row per trial: seed, counts per class, min SOSC margin."""
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                [
                    "seed",
                    "critical_count",
                    "sosc_count",
                    "fonc_only_count",
                    "degenerate_count",
                    "min_margin",
                ]
            )
            for r in self.records:
                hist = r.verdict_histogram
                writer.writerow(
                    [
                        r.poly_seed,
                        r.critical_count,
                        hist.get(Verdict.SOSC.value, 0),
                        hist.get(Verdict.FONC_ONLY.value, 0),
                        hist.get(Verdict.SONC_DEGENERATE.value, 0),
                        "" if r.min_sosc_margin is None else repr(r.min_sosc_margin),
                    ]
                )


@dataclass
class QuadSweepReport:
    n: int
    trials: int
    seed: int
    degenerate_count: int
    disagreements: list[dict]
    planted: list[dict]
    runtime_seconds: float

    @property
    def passed(self) -> bool:
        return not self.disagreements and all(
            p["quadratic_rule"] and p["pipeline"] for p in self.planted
        )

    def to_dict(self, include_runtime: bool = True) -> dict:
        doc = {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "degenerate_count": self.degenerate_count,
            "disagreements": list(self.disagreements),
            "planted": list(self.planted),
            "passed": self.passed,
        }
        if include_runtime:
            doc["runtime_seconds"] = self.runtime_seconds
        return doc

    def to_json(self, include_runtime: bool = True) -> str:
        import json

        return json.dumps(self.to_dict(include_runtime), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Randomized genericity experiment
# ---------------------------------------------------------------------------


def _rank_witness_hits(
    f: HomogeneousPolynomial, x: np.ndarray, tol_rank: float
) -> int:
    """Count tangent eigenvector directions whose witness matrix drops rank.

    Any real witness at x must be a tangent eigenvector (up to eigenvalue
    multiplicity), so scanning all n - 1 of them covers every candidate.
    """
    if f.n == 1:
        return 0
    B = tangent_basis(x)
    H = f.hessian(x)
    M = B.T @ H @ B
    M = 0.5 * (M + M.T)
    _, vecs = np.linalg.eigh(M)
    hits = 0
    for k in range(vecs.shape[1]):
        y = B @ vecs[:, k]
        y = y / np.linalg.norm(y)
        wm = build_witness_matrix(f, x, y)
        if wm.singular_values[2] <= tol_rank * wm.singular_values[0]:
            hits += 1
    return hits


def _dump_polynomial(f: HomogeneousPolynomial, dump_dir: str, name: str) -> str:
    directory = Path(dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    write_polynomial(f, path)
    return str(path)


def run_random_genericity(config: ExperimentConfig) -> ExperimentReport:
    """Sample random objectives and verify that no SONC point is degenerate.

    Every critical point of every draw is classified and scanned for rank
    witnesses; any degenerate hit is a hard failure that also dumps the
    offending polynomial to ``config.dump_dir`` for inspection.
    """
    if config.mode != "random":
        raise ValueError(f"run_random_genericity needs mode='random', got {config.mode!r}")
    t0 = time.perf_counter()
    records: list[TrialRecord] = []
    dumped: list[str] = []
    margins: list[float] = []

    for trial in range(config.trials):
        poly_seed = config.seed * SEED_STRIDE + trial
        f = random_polynomial(config.n, config.d, poly_seed)
        solver = SolverConfig(
            starts=config.starts, seed=poly_seed + 1, tol_crit=config.tol_crit
        )
        points = classify_all(f, solver, tol_class=config.tol_class)

        histogram: dict[str, int] = {}
        min_margin: float | None = None
        degenerate = 0
        rank_hits = 0
        for point in points:
            histogram[point.verdict.value] = histogram.get(point.verdict.value, 0) + 1
            if point.verdict is Verdict.SONC_DEGENERATE:
                degenerate += 1
            if point.verdict is Verdict.SOSC and np.isfinite(point.sosc_margin):
                if min_margin is None or point.sosc_margin < min_margin:
                    min_margin = float(point.sosc_margin)
            rank_hits += _rank_witness_hits(f, point.pair.x, config.tol_rank)

        oracle_on_locus = exact_oracle_n2(f).on_locus if config.n == 2 else None
        if degenerate or rank_hits:
            dumped.append(
                _dump_polynomial(
                    f,
                    config.dump_dir,
                    f"degenerate_n{config.n}_d{config.d}_trial{trial}.json",
                )
            )
        if min_margin is not None:
            margins.append(min_margin)
        records.append(
            TrialRecord(
                trial=trial,
                poly_seed=poly_seed,
                critical_count=len(points),
                verdict_histogram=histogram,
                min_sosc_margin=min_margin,
                degenerate_hits=degenerate,
                rank_witness_hits=rank_hits,
                oracle_on_locus=oracle_on_locus,
            )
        )

    quantiles = None
    if margins:
        qs = np.quantile(margins, [0.0, 0.25, 0.5, 0.75, 1.0])
        quantiles = {
            "min": float(qs[0]),
            "q25": float(qs[1]),
            "median": float(qs[2]),
            "q75": float(qs[3]),
            "max": float(qs[4]),
        }
    return ExperimentReport(
        mode=config.mode,
        n=config.n,
        d=config.d,
        trials=config.trials,
        seed=config.seed,
        records=records,
        total_degenerate=sum(r.degenerate_hits for r in records),
        total_rank_witnesses=sum(r.rank_witness_hits for r in records),
        min_sosc_margin=min(margins) if margins else None,
        margin_quantiles=quantiles,
        dumped_files=dumped,
        runtime_seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Witness suites (deterministic, must pass exactly)
# ---------------------------------------------------------------------------


def run_witness_d2(n: int, seed: int = 0) -> SuiteReport:
    """Quadratic witness suite on (x1^2 + 2 x2^2 + ... + n xn^2) / 2.

    Checks the full known structure: 2n critical points at the signed axes
    with multiplier k, SOSC exactly at the first axis with margin 1, a
    nonvanishing bordered determinant everywhere (closed form
    -prod_{j != k} (j - k)), and no degeneracy witness anywhere.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    p = weighted_axis_quadratic(n)
    report = SuiteReport(name=f"witness_d2(n={n})")
    found = find_critical_pairs(p, SolverConfig(seed=seed))
    pairs = found.pairs

    report.add(
        "critical_count",
        len(pairs) == 2 * n,
        f"found {len(pairs)}, expected {2 * n}",
    )

    axis_tol = 1e-8
    all_axes = True
    for k in range(n):
        for sgn in (1.0, -1.0):
            target = sgn * _axis(n, k)
            hit = any(
                np.linalg.norm(q.x - target) <= axis_tol and abs(q.lam - (k + 1)) <= axis_tol
                for q in pairs
            )
            all_axes = all_axes and hit
    report.add("pairs_are_signed_axes", all_axes, "each +-e_k present with lambda = k")

    verdict_ok = True
    sosc_count = 0
    margin_detail = []
    for q in pairs:
        point = classify_point(p, q.x)
        sosc_count += point.verdict is Verdict.SOSC
        k = int(np.argmax(np.abs(q.x)))
        expected_margin = 1.0 if k == 0 else float(1 - (k + 1))
        margin_detail.append(f"axis {k + 1}: margin {point.sosc_margin:.3e}")
        if abs(point.sosc_margin - expected_margin) > 1e-8:
            verdict_ok = False
        expected_verdict = Verdict.SOSC if k == 0 else Verdict.FONC_ONLY
        if point.verdict is not expected_verdict:
            verdict_ok = False
    report.add(
        "sosc_only_at_first_axis",
        verdict_ok and sosc_count == 2,
        "; ".join(margin_detail),
    )

    det_ok = True
    det_detail = []
    for k in range(n):
        lam = float(k + 1)
        det = bordered_determinant(p, _axis(n, k), lam)
        expected = -float(np.prod([j - (k + 1) for j in range(1, n + 1) if j != k + 1]))
        det_detail.append(f"axis {k + 1}: det {det:.6g}")
        if abs(det - expected) > 1e-8 * max(1.0, abs(expected)):
            det_ok = False
        if abs(det) <= 1e-6 * max(1.0, p.coefficient_norm):
            det_ok = False
    report.add("bordered_determinant_nonzero", det_ok, "; ".join(det_detail))

    no_witness = all(detect_sosc_failure(p, q.x) is None for q in pairs)
    report.add("no_degeneracy_witness", no_witness, "detector returned None everywhere")
    return report


def run_witness_general(n: int, d: int, seed: int = 0) -> SuiteReport:
    """Witness suite on the geometric power polynomial for d != 2.

    Every real critical point must keep |det H(x, lam)| strictly positive
    (checked against 1e-6 times the size scale and against the closed-form
    magnitude |d - 2|^(|support| - 1) |lam|^(n - 1) available because the
    Hessian is diagonal), and no SONC point may be degenerate.  For n = 2
    the exact oracle must place the polynomial off the locus.
    """
    if d == 2:
        raise ValueError("d = 2 is covered by run_witness_d2")
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    p = geometric_power_polynomial(n, d)
    report = SuiteReport(name=f"witness_general(n={n}, d={d})")
    points = enumerate_power_critical_points(n, d)
    tol = critical_tolerance(p)

    residual_ok = all(
        np.linalg.norm(p.gradient(x) - lam * x) <= tol for x, lam in points
    )
    report.add(
        "enumeration_is_critical",
        residual_ok,
        f"{len(points)} closed-form points, FONC residual <= {tol:.3e}",
    )

    det_ok = True
    formula_ok = True
    min_ratio = np.inf
    scale = 1e-6 * max(1.0, p.coefficient_norm)
    for x, lam in points:
        det = bordered_determinant(p, x, lam)
        ratio = abs(det) / scale
        min_ratio = min(min_ratio, ratio)
        if abs(det) <= scale:
            det_ok = False
        support = int(np.count_nonzero(np.abs(x) > 1e-12))
        expected = abs(d - 2.0) ** (support - 1) * abs(lam) ** (n - 1)
        if abs(abs(det) - expected) > 1e-8 * max(1.0, expected):
            formula_ok = False
    report.add(
        "bordered_determinant_positive",
        det_ok,
        f"min |det| / (1e-6 * max(1, ||f||)) = {min_ratio:.3e}",
    )
    report.add(
        "bordered_determinant_matches_diag_formula",
        formula_ok,
        "|det| = |d-2|^(|S|-1) |lam|^(n-1) at every point",
    )

    degenerate = 0
    for x, _ in points:
        if classify_point(p, x / np.linalg.norm(x)).verdict is Verdict.SONC_DEGENERATE:
            degenerate += 1
    report.add("no_sonc_degenerate", degenerate == 0, f"{degenerate} degenerate verdicts")

    if n == 2:
        oracle = exact_oracle_n2(p)
        report.add(
            "oracle_off_locus",
            not oracle.on_locus,
            oracle.certificate,
        )
    return report


def run_degenerate_family(kind: str, n: int, d: int, seed: int = 0) -> SuiteReport:
    """Constructed degenerate instances that the pipeline must flag.

    ``repeated_lambda1`` (d = 2): the least eigenvalue has multiplicity two,
    so the minimizers form a circle of SONC-degenerate points.
    ``single_monomial`` (d >= 3): f = x1^d is critical with multiplier zero
    on the whole subsphere x1 = 0, with vanishing tangent Hessian.
    """
    report = SuiteReport(name=f"degenerate_family({kind}, n={n}, d={d})")
    if kind == "repeated_lambda1":
        if d != 2:
            raise ValueError("repeated_lambda1 requires d = 2")
        if n < 2:
            raise ValueError("need n >= 2")
        diag = [1.0, 1.0] + [float(k) for k in range(2, n)]
        A = np.diag(diag)
        f = quadratic_form_polynomial(A)
        anchor = _axis(n, 0)
        locus = lambda x: float(np.linalg.norm(x[2:])) if n > 2 else 0.0
    elif kind == "single_monomial":
        if d < 3:
            raise ValueError("single_monomial requires d >= 3")
        if n < 2:
            raise ValueError("need n >= 2")
        f = axis_monomial(n, d)
        anchor = _axis(n, 1)
        locus = lambda x: float(abs(x[0]))
    else:
        raise ValueError(f"unknown kind {kind!r}")

    points = classify_all(f, SolverConfig(seed=seed))
    degenerate = [pt for pt in points if pt.verdict is Verdict.SONC_DEGENERATE]
    report.add(
        "pipeline_flags_degenerate",
        len(degenerate) >= 1,
        f"{len(degenerate)} SONC_DEGENERATE of {len(points)} critical points",
    )
    on_locus = all(locus(pt.pair.x) <= 1e-6 for pt in degenerate)
    report.add(
        "degenerate_points_on_expected_locus",
        bool(degenerate) and on_locus,
        "all flagged points lie on the known degenerate set",
    )

    witness = detect_sosc_failure(f, anchor)
    if witness is None:
        report.add("witness_at_anchor", False, "no witness at the anchor point")
    else:
        wm = build_witness_matrix(f, witness.x, witness.y)
        sigma1 = float(wm.singular_values[0])
        det_scale = bordered_scale(f, witness.x, witness.lam)
        report.add(
            "witness_at_anchor",
            witness.rank_defect_measure <= 1e-6 * max(1.0, sigma1),
            f"third singular value {witness.rank_defect_measure:.3e}",
        )
        report.add(
            "bordered_determinant_vanishes",
            abs(witness.bordered_det) <= 1e-6 * det_scale,
            f"|det H| = {abs(witness.bordered_det):.3e} <= 1e-6 * {det_scale:.3e}",
        )
        report.add(
            "witness_residuals_small",
            witness.bordered_residual <= 1e-8 * max(1.0, f.coefficient_norm)
            and abs(witness.y @ witness.x) <= 1e-10,
            f"bordered residual {witness.bordered_residual:.3e}",
        )

    if kind == "repeated_lambda1":
        qd = quadratic_degeneracy(np.diag([1.0, 1.0] + [float(k) for k in range(2, n)]))
        report.add(
            "quadratic_rule_agrees",
            qd.degenerate and qd.lambda1_multiplicity == 2,
            f"multiplicity {qd.lambda1_multiplicity}",
        )
    if kind == "single_monomial" and n >= 3:
        rng = np.random.default_rng(seed)
        flagged = 0
        samples = 5
        for _ in range(samples):
            v = rng.standard_normal(n)
            v[0] = 0.0
            v /= np.linalg.norm(v)
            if classify_point(f, v).verdict is Verdict.SONC_DEGENERATE:
                flagged += 1
        report.add(
            "sampled_locus_points_flagged",
            flagged == samples,
            f"{flagged}/{samples} random points of the subsphere x1 = 0",
        )

    if n == 2:
        oracle = exact_oracle_n2(f)
        report.add("oracle_on_locus", oracle.on_locus, oracle.certificate)
    return report


# ---------------------------------------------------------------------------
# Quadratic sweep
# ---------------------------------------------------------------------------


def _pipeline_quadratic_degenerate(A: np.ndarray, seed: int) -> bool:
    f = quadratic_form_polynomial(A)
    points = classify_all(f, SolverConfig(seed=seed))
    return any(pt.verdict is Verdict.SONC_DEGENERATE for pt in points)


def check_planted_quadratic(
    n: int, multiplicity: int, seed: int = 0
) -> dict:
    """Detectability of a planted least-eigenvalue multiplicity.

    Builds A = Q D Q^T with the bottom eigenvalue repeated ``multiplicity``
    times (random orthogonal Q), then runs both the eigenvalue rule and the
    full pipeline.
    """
    if not 2 <= multiplicity <= n:
        raise ValueError("need 2 <= multiplicity <= n")
    rng = np.random.default_rng(seed)
    eigenvalues = np.concatenate(
        [np.full(multiplicity, -1.0), np.linspace(0.5, 2.0, n - multiplicity)]
    )
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ np.diag(eigenvalues) @ Q.T
    A = 0.5 * (A + A.T)
    return {
        "multiplicity": multiplicity,
        "quadratic_rule": quadratic_degeneracy(A).degenerate,
        "pipeline": _pipeline_quadratic_degenerate(A, seed + 1),
    }


def run_quadratic_sweep(
    n: int, trials: int, seed: int = 0, planted: tuple[int, ...] = (2, 3)
) -> QuadSweepReport:
    """Cross-validate the eigenvalue rule against the pipeline on random A.

    Random symmetric matrices generically have a simple least eigenvalue, so
    both detectors should report non-degenerate on every draw; planted
    multiplicities must be caught by both.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    disagreements: list[dict] = []
    degenerate_count = 0
    for trial in range(trials):
        G = rng.standard_normal((n, n))
        A = 0.5 * (G + G.T)
        rule = quadratic_degeneracy(A).degenerate
        pipe = _pipeline_quadratic_degenerate(A, seed * SEED_STRIDE + trial)
        if rule or pipe:
            degenerate_count += 1
        if rule != pipe:
            disagreements.append(
                {"trial": trial, "quadratic_rule": rule, "pipeline": pipe}
            )
    planted_results = [
        check_planted_quadratic(n, k, seed=seed + 1000 + k)
        for k in planted
        if 2 <= k <= n
    ]
    return QuadSweepReport(
        n=n,
        trials=trials,
        seed=seed,
        degenerate_count=degenerate_count,
        disagreements=disagreements,
        planted=planted_results,
        runtime_seconds=time.perf_counter() - t0,
    )
