"""Critical pairs of a homogeneous polynomial on the unit sphere.

A critical pair is a unit vector x together with a multiplier lam solving
grad f(x) = lam x.  By Euler's identity lam = d f(x) at every such point.
Two finders are provided:

* :func:`find_critical_pairs` runs multistart damped Newton on the square
  system F(x, lam) = (grad f(x) - lam x, (x.x - 1)/2) with the full
  (n+1) x (n+1) Jacobian.  It works for any n but offers only stochastic
  coverage for n >= 3.

* :func:`enumerate_critical_pairs_n2` is exact for n = 2: critical
  directions are the real projective roots of the degree-d binary form
  g = x2 * df/dx1 - x1 * df/dx2, found by companion-matrix root-finding of
  the dehomogenization g(t, 1) plus an explicit check of the x2 = 0
  direction.  Root candidates are Newton-polished, so the returned set is
  the real critical set up to root-finding tolerance.

:func:`certify_against_oracle` cross-checks the two finders on the same
input, which is how multistart coverage is validated at n = 2.

All Newton starts for one solve are drawn up front from the configured seed
(row order fixed), so results are deterministic regardless of how the
independent per-start iterations would be scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polyhom import HomogeneousPolynomial, ZeroPolynomialError

__all__ = [
    "CriticalPair",
    "CriticalSet",
    "SolverConfig",
    "CertificationReport",
    "critical_tolerance",
    "find_critical_pairs",
    "enumerate_critical_pairs_n2",
    "certify_against_oracle",
]

DEFAULT_TOL_CRIT = 1e-9
DEFAULT_DEDUP_RADIUS = 1e-6
MAX_STARTS = 20000


def critical_tolerance(f: HomogeneousPolynomial, base: float = DEFAULT_TOL_CRIT) -> float:
    """Residual acceptance threshold: base * max(1, coefficient norm).

    The FONC residual is linear in the coefficients of f, so the absolute
    tolerance scales with the coefficient norm.
    """
    return base * max(1.0, f.coefficient_norm)


@dataclass(frozen=True)
class CriticalPair:
    """A unit vector with multiplier satisfying grad f(x) = lam x to tolerance."""

    x: np.ndarray
    lam: float
    residual: float
    sphere_residual: float


@dataclass
class CriticalSet:
    """Deduplicated critical pairs plus solver bookkeeping.

    ``all_critical`` marks the radially symmetric n = 2 special case
    f = c (x1^2 + x2^2)^(d/2), where the whole circle is critical; ``pairs``
    then holds the two antipodal representatives at the first axis.
    """

    pairs: list[CriticalPair]
    dedup_radius: float
    starts_used: int
    converged_fraction: float
    all_critical: bool = False


@dataclass(frozen=True)
class SolverConfig:
    """Multistart Newton knobs.

    ``tol_crit`` is the base tolerance; acceptance uses
    ``tol_crit * max(1, coefficient norm)``.  ``starts=None`` selects the
    default 50 * d * n, capped at 20000.
    """

    starts: int | None = None
    seed: int = 0
    tol_crit: float = DEFAULT_TOL_CRIT
    dedup_radius: float = DEFAULT_DEDUP_RADIUS
    max_iterations: int = 100
    max_halvings: int = 30


@dataclass
class CertificationReport:
    """Outcome of cross-checking multistart against the exact n = 2 oracle."""

    certified: bool
    all_critical: bool
    matched: int
    only_multistart: list[CriticalPair] = field(default_factory=list)
    only_oracle: list[CriticalPair] = field(default_factory=list)


def _reject_zero(f: HomogeneousPolynomial) -> None:
    if f.is_zero:
        raise ZeroPolynomialError(
            "zero polynomial rejected: every sphere point is a degenerate critical point"
        )


def _system_residual(f: HomogeneousPolynomial, X: np.ndarray, lam: np.ndarray) -> np.ndarray:
    n = f.n
    F = np.empty((X.shape[0], n + 1))
    F[:, :n] = f.gradient_many(X) - lam[:, None] * X
    F[:, n] = 0.5 * (np.einsum("ij,ij->i", X, X) - 1.0)
    return F


def _system_jacobian(f: HomogeneousPolynomial, X: np.ndarray, lam: np.ndarray) -> np.ndarray:
    n = f.n
    J = np.empty((X.shape[0], n + 1, n + 1))
    J[:, :n, :n] = f.hessian_many(X)
    idx = np.arange(n)
    J[:, idx, idx] -= lam[:, None]
    J[:, :n, n] = -X
    J[:, n, :n] = X
    J[:, n, n] = 0.0
    return J


def _solve_steps(J: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched linear solve; rows with a singular Jacobian are flagged, not raised."""
    k, m = rhs.shape
    det = np.linalg.det(J)
    bad = ~np.isfinite(det) | (det == 0.0)
    if bad.any():
        J = J.copy()
        J[bad] = np.eye(m)
    try:
        steps = np.linalg.solve(J, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        # LAPACK can reject pivots det() accepted; fall back row by row.
        steps = np.zeros_like(rhs)
        for i in range(k):
            try:
                steps[i] = np.linalg.solve(J[i], rhs[i])
            except np.linalg.LinAlgError:
                bad[i] = True
    usable = ~bad & np.isfinite(steps).all(axis=1)
    return steps, usable


def _lstsq_steps(
    J: np.ndarray, rhs: np.ndarray, rcond: float = 1e-10
) -> tuple[np.ndarray, np.ndarray]:
    """Batched truncated-SVD least-squares steps.

    Near-null Jacobian directions (manifolds of critical points, multiple
    roots) are dropped rather than amplified, so the step corrects only the
    well-determined components.
    """
    try:
        U, s, Vt = np.linalg.svd(J)
    except np.linalg.LinAlgError:
        return np.zeros_like(rhs), np.zeros(rhs.shape[0], dtype=bool)
    cutoff = rcond * s[:, :1]
    safe = np.where(s > 0.0, s, 1.0)
    sinv = np.where(s > cutoff, 1.0 / safe, 0.0)
    z = np.einsum("kms,km->ks", U, rhs) * sinv
    steps = np.einsum("ksm,ks->km", Vt, z)
    usable = np.isfinite(steps).all(axis=1)
    return steps, usable


def _newton_polish(
    f: HomogeneousPolynomial,
    X0: np.ndarray,
    lam0: np.ndarray,
    *,
    max_iterations: int,
    max_halvings: int,
    stop_tol: float,
    accept_tol: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Damped Newton on the critical-pair system, batched over start rows.

    Steps are halved (up to ``max_halvings`` times) whenever the residual
    norm fails to decrease; rows that still cannot decrease it are abandoned
    unless their residual already passes ``accept_tol``.  Returns the final
    points, multipliers, and the converged mask.
    """
    n = f.n
    Z = np.concatenate([np.asarray(X0, float), np.asarray(lam0, float)[:, None]], axis=1)
    size = Z.shape[0]
    with np.errstate(all="ignore"):
        F = _system_residual(f, Z[:, :n], Z[:, n])
    Fn = np.linalg.norm(F, axis=1)
    active = np.isfinite(Fn)
    done = np.zeros(size, dtype=bool)
    stalls = np.zeros(size, dtype=np.int64)

    for _ in range(max_iterations):
        finished = active & (Fn <= stop_tol)
        done |= finished
        active &= ~finished
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break
        with np.errstate(all="ignore"):
            J = _system_jacobian(f, Z[rows, :n], Z[rows, n])
            J[~np.isfinite(J)] = 0.0
            steps, usable = _solve_steps(J, -F[rows])
        before = Fn[rows].copy()
        improved = np.zeros(rows.size, dtype=bool)
        t = np.ones(rows.size)
        trying = np.flatnonzero(usable)
        for _ in range(max_halvings + 1):
            if trying.size == 0:
                break
            sub = rows[trying]
            trial = Z[sub] + t[trying, None] * steps[trying]
            with np.errstate(all="ignore"):
                Ft = _system_residual(f, trial[:, :n], trial[:, n])
            Ftn = np.linalg.norm(Ft, axis=1)
            ok = np.isfinite(Ftn) & (Ftn < Fn[sub])
            acc = sub[ok]
            Z[acc] = trial[ok]
            F[acc] = Ft[ok]
            Fn[acc] = Ftn[ok]
            improved[trying[ok]] = True
            trying = trying[~ok]
            t[trying] *= 0.5
        stuck = rows[~improved]
        if stuck.size:
            good = Fn[stuck] <= accept_tol
            done[stuck[good]] = True
            active[stuck] = False
        # Wandering rows shave off a sliver of residual per iteration without
        # converging (deep damping).  Genuine roots contract by at least half
        # per step even at multiple roots, so a run of near-unit ratios marks
        # a start worth abandoning in favor of the remaining oversampled ones.
        moved = rows[improved]
        if moved.size:
            slow = Fn[moved] > 0.9 * before[improved]
            stalls[moved[slow]] += 1
            stalls[moved[~slow]] = 0
            hopeless = moved[slow][stalls[moved[slow]] >= 8]
            if hopeless.size:
                good = Fn[hopeless] <= accept_tol
                done[hopeless[good]] = True
                active[hopeless] = False

    done |= active & (Fn <= accept_tol)

    # Multiple-root polish.  Plain Newton converges only linearly to roots
    # with a singular Jacobian (critical points that are themselves
    # degenerate), stalling a few orders above machine precision, which is
    # enough to throw off second-order margins downstream.  Truncated
    # least-squares steps ignore the null directions (e.g. a whole circle of
    # critical points) and overshooting by the root multiplicity restores
    # fast convergence; simple roots are already converged and reject the
    # overshoot.
    floor = 1e-14 * max(1.0, f.coefficient_norm)
    polish = np.flatnonzero(done & (Fn > floor))
    for _ in range(8):
        if polish.size == 0:
            break
        with np.errstate(all="ignore"):
            J = _system_jacobian(f, Z[polish, :n], Z[polish, n])
            J[~np.isfinite(J)] = 0.0
            steps, usable = _lstsq_steps(J, -F[polish])
        best_norm = Fn[polish].copy()
        best_z = Z[polish].copy()
        best_f = F[polish].copy()
        moved = np.zeros(polish.size, dtype=bool)
        for factor in (1.0, 2.0, 3.0):
            trial = Z[polish] + factor * steps
            with np.errstate(all="ignore"):
                Ft = _system_residual(f, trial[:, :n], trial[:, n])
            Ftn = np.linalg.norm(Ft, axis=1)
            better = usable & np.isfinite(Ftn) & (Ftn < best_norm)
            best_z[better] = trial[better]
            best_f[better] = Ft[better]
            best_norm[better] = Ftn[better]
            moved |= better
        Z[polish] = best_z
        F[polish] = best_f
        Fn[polish] = best_norm
        polish = polish[moved & (best_norm > floor)]

    return Z[:, :n], Z[:, n], done


def _collect_pairs(
    f: HomogeneousPolynomial,
    X: np.ndarray,
    lam: np.ndarray,
    tol: float,
    dedup_radius: float,
) -> list[CriticalPair]:
    """Normalize, filter by residual, dedup, and close under the antipodal map."""
    n = f.n
    if X.shape[0] == 0:
        return []
    norms = np.linalg.norm(X, axis=1)
    keep = norms > 0.5
    X, lam = X[keep] / norms[keep, None], lam[keep]
    if X.shape[0] == 0:
        return []
    res = np.linalg.norm(f.gradient_many(X) - lam[:, None] * X, axis=1)
    sph = np.abs(np.einsum("ij,ij->i", X, X) - 1.0)
    keep = (res <= tol) & (sph <= 1e-12)
    X, lam, res, sph = X[keep], lam[keep], res[keep], sph[keep]

    order = np.argsort(res, kind="stable")  # keep the tightest residual per cluster
    kept_x = np.empty_like(X)
    kept_idx: list[int] = []
    count = 0
    for i in order:
        if count and np.min(np.linalg.norm(kept_x[:count] - X[i], axis=1)) <= dedup_radius:
            continue
        kept_x[count] = X[i]
        kept_idx.append(int(i))
        count += 1

    pairs = [
        CriticalPair(
            x=X[i].copy(),
            lam=float(lam[i]),
            residual=float(res[i]),
            sphere_residual=float(sph[i]),
        )
        for i in kept_idx
    ]

    # Antipodal closure: x critical implies -x critical with lam * (-1)^d.
    sign = 1.0 if f.d % 2 == 0 else -1.0
    closed = list(pairs)
    for p in pairs:
        xm = -p.x
        if any(np.linalg.norm(xm - q.x) <= dedup_radius for q in closed):
            continue
        lm = sign * p.lam
        g = f.gradient(xm)
        closed.append(
            CriticalPair(
                x=xm,
                lam=lm,
                residual=float(np.linalg.norm(g - lm * xm)),
                sphere_residual=float(abs(xm @ xm - 1.0)),
            )
        )
    closed.sort(key=lambda p: (p.lam, tuple(p.x)))
    return closed


def find_critical_pairs(
    f: HomogeneousPolynomial, config: SolverConfig | None = None
) -> CriticalSet:
    """All critical pairs reachable by multistart Newton from uniform sphere starts.

    Non-converged starts are counted in ``converged_fraction``, not returned.
    Each returned pair satisfies the residual invariants at the configured
    tolerance, and the set is closed under the antipodal map.
    """
    cfg = config or SolverConfig()
    _reject_zero(f)
    n, d = f.n, f.d
    starts = cfg.starts if cfg.starts is not None else min(50 * d * n, MAX_STARTS)
    if starts < 1:
        raise ValueError(f"need at least one start, got {starts}")

    rng = np.random.default_rng(cfg.seed)
    X0 = rng.standard_normal((starts, n))
    norms = np.linalg.norm(X0, axis=1)
    norms[norms == 0.0] = 1.0
    X0 /= norms[:, None]
    lam0 = d * f.evaluate_many(X0)

    tol = critical_tolerance(f, cfg.tol_crit)
    stop_tol = 1e-13 * max(1.0, f.coefficient_norm)
    X, lam, ok = _newton_polish(
        f,
        X0,
        lam0,
        max_iterations=cfg.max_iterations,
        max_halvings=cfg.max_halvings,
        stop_tol=stop_tol,
        accept_tol=tol,
    )
    pairs = _collect_pairs(f, X[ok], lam[ok], tol, cfg.dedup_radius)
    return CriticalSet(
        pairs=pairs,
        dedup_radius=cfg.dedup_radius,
        starts_used=starts,
        converged_fraction=float(np.mean(ok)) if starts else 0.0,
    )


def _pencil_form_coefficients(f: HomogeneousPolynomial) -> np.ndarray:
    """Coefficients of g = x2 * df/dx1 - x1 * df/dx2, indexed by the power of x1.

    g vanishes exactly where the gradient is parallel to x, so its projective
    roots are the critical directions.  deg g = d unless g is identically
    zero (radially symmetric f).
    """
    d = f.d
    a = np.zeros(d + 1)
    for (e1, _), c in f.terms.items():
        a[e1] = c
    g = np.zeros(d + 1)
    for j in range(d + 1):
        if j + 1 <= d:
            g[j] += (j + 1) * a[j + 1]
        if j >= 1:
            g[j] -= (d - j + 1) * a[j - 1]
    return g


def enumerate_critical_pairs_n2(
    f: HomogeneousPolynomial,
    *,
    tol_crit: float = DEFAULT_TOL_CRIT,
    dedup_radius: float = DEFAULT_DEDUP_RADIUS,
) -> CriticalSet:
    """Exact enumeration of the critical set for n = 2 via binary-form roots."""
    _reject_zero(f)
    if f.n != 2:
        raise ValueError(f"exact enumeration needs n = 2, got n = {f.n}")
    d = f.d
    scale = max(1.0, f.coefficient_norm)
    g = _pencil_form_coefficients(f)

    if np.max(np.abs(g)) <= 1e-10 * scale * (d + 1):
        # Radial case: gradient parallel to x everywhere, the whole circle is
        # critical with the constant multiplier d * f.
        e1 = np.array([1.0, 0.0])
        reps = _collect_pairs(
            f,
            np.array([e1, -e1]),
            d * np.array([f.evaluate(e1), f.evaluate(-e1)]),
            critical_tolerance(f, tol_crit),
            dedup_radius,
        )
        return CriticalSet(
            pairs=reps,
            dedup_radius=dedup_radius,
            starts_used=2,
            converged_fraction=1.0,
            all_critical=True,
        )

    # x2 = 0 direction handled separately; it is critical iff the top
    # coefficient of g vanishes, and the residual filter re-checks that.
    candidates = [np.array([1.0, 0.0])]
    coeffs = g[::-1]
    lead_tol = 1e-12 * np.max(np.abs(g))
    k = 0
    while k < d and abs(coeffs[k]) <= lead_tol:
        k += 1
    trimmed = coeffs[k:]
    if trimmed.size > 1:
        for z in np.roots(trimmed):
            if abs(z.imag) <= 1e-8 * max(1.0, abs(z)):
                u = np.array([float(z.real), 1.0])
                candidates.append(u / np.linalg.norm(u))
    U = np.array(candidates)
    U = np.vstack([U, -U])
    lam0 = d * f.evaluate_many(U)

    tol = critical_tolerance(f, tol_crit)
    X, lam, ok = _newton_polish(
        f,
        U,
        lam0,
        max_iterations=30,
        max_halvings=30,
        stop_tol=1e-13 * scale,
        accept_tol=tol,
    )
    pairs = _collect_pairs(f, X[ok], lam[ok], tol, dedup_radius)
    return CriticalSet(
        pairs=pairs,
        dedup_radius=dedup_radius,
        starts_used=U.shape[0],
        converged_fraction=float(np.mean(ok)) if U.shape[0] else 0.0,
    )


def certify_against_oracle(
    f: HomogeneousPolynomial, config: SolverConfig | None = None
) -> CertificationReport:
    """Compare multistart output with the exact n = 2 enumeration.

    An empty discrepancy report means the multistart solver found exactly
    the oracle's critical set.  The radial special case cannot be matched
    pairwise and is flagged instead of certified.
    """
    cfg = config or SolverConfig()
    oracle = enumerate_critical_pairs_n2(
        f, tol_crit=cfg.tol_crit, dedup_radius=cfg.dedup_radius
    )
    if oracle.all_critical:
        return CertificationReport(certified=False, all_critical=True, matched=0)
    found = find_critical_pairs(f, cfg)
    match_radius = max(cfg.dedup_radius, 1e-9)
    lam_tol = 1e-6 * max(1.0, f.coefficient_norm)

    matched = 0
    used: set[int] = set()
    only_oracle: list[CriticalPair] = []
    for p in oracle.pairs:
        hit = None
        for i, q in enumerate(found.pairs):
            if i in used:
                continue
            if (
                np.linalg.norm(p.x - q.x) <= match_radius
                and abs(p.lam - q.lam) <= lam_tol
            ):
                hit = i
                break
        if hit is None:
            only_oracle.append(p)
        else:
            used.add(hit)
            matched += 1
    only_multistart = [q for i, q in enumerate(found.pairs) if i not in used]
    return CertificationReport(
        certified=not only_multistart and not only_oracle,
        all_critical=False,
        matched=matched,
        only_multistart=only_multistart,
        only_oracle=only_oracle,
    )
