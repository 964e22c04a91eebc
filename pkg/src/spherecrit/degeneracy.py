"""Degeneracy detection: SONC points of the sphere problem where SOSC fails.

For generic objectives the degenerate locus is empty, so reliable detection
needs more than one signal.  Three characterizations are implemented and
kept deliberately separate:

1. Rank witness.  At a critical point x with multiplier lam, SOSC failure
   at an SONC point is equivalent to the existence of a nonzero y with
   y.x = 0 making the 2n x 3 block matrix

       [ grad f(x)       x   0 ]
       [ hess f(x) y     y   x ]

   rank deficient (rank <= 2).  :func:`detect_sosc_failure` takes y from the
   bottom tangent eigenvector and measures deficiency via the third singular
   value.  Conversely, any pair (x, y) satisfying the rank condition forces
   the FONC to hold at x while the SOSC fails, so a returned witness can be
   re-validated from (x, y) alone.

2. Bordered determinant.  A witness (y, mu) solves
   hess f(x) y - lam y - mu x = 0 with y.x = 0, which makes the symmetric
   (n+1) x (n+1) bordered matrix [[hess f(x) - lam I, x], [x^T, 0]] singular.
   det = 0 is necessary for degeneracy, not sufficient, and is reported as a
   corroborating signal only.

3. Exact n = 2 oracle.  For binary forms the constraint y.x = 0 pins
   y = (x2, -x1) up to scale (over the complex numbers too), so the rank
   condition reduces to four binary forms of degree d + 1, the 3 x 3 minors,
   sharing a common nonzero complex root.  That is decided exactly with
   rational arithmetic: float coefficients are binary rationals, so
   Fraction-based GCD of the dehomogenized minors (plus a common-root check
   in the x2 = 0 direction) gives a tolerance-free membership test for the
   complex degeneracy locus.  A real degenerate point forces membership; the
   converse can fail (complex-only witnesses), so oracle verdict and numeric
   detection are always reported side by side, never merged.

The d = 2 specialization is :func:`quadratic_degeneracy`: for f = x^T A x / 2
some SONC point is degenerate exactly when the least eigenvalue of A is not
simple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classify import tangent_basis
from .critsolve import DEFAULT_TOL_CRIT, critical_tolerance
from .polyhom import HomogeneousPolynomial, ZeroPolynomialError

__all__ = [
    "WitnessMatrix",
    "DegeneracyWitness",
    "BorderedMatrix",
    "QuadraticDegeneracy",
    "OracleResult",
    "NotCriticalError",
    "build_witness_matrix",
    "rank_deficient",
    "detect_sosc_failure",
    "bordered_matrix",
    "bordered_determinant",
    "bordered_scale",
    "quadratic_degeneracy",
    "exact_oracle_n2",
    "witness_to_dict",
]

DEFAULT_TOL_CLASS = 1e-7
DEFAULT_TOL_RANK = 1e-6
DEFAULT_TOL_DET = 1e-8
DEFAULT_TOL_EIG = 1e-8
UNIT_NORM_TOL = 1e-10


class NotCriticalError(ValueError):
    """The queried point does not satisfy the FONC to tolerance."""


@dataclass
class WitnessMatrix:
    """The 2n x 3 rank-test matrix and its singular values (descending)."""

    matrix: np.ndarray
    singular_values: np.ndarray


@dataclass
class DegeneracyWitness:
    """A tangent direction y certifying SOSC failure at the critical point x.

    ``mu`` is the multiplier with hess f(x) y - lam y = mu x;
    ``rank_defect_measure`` is the third singular value of the witness
    matrix; ``bordered_residual`` is the norm of
    (hess f(x) y - lam y - mu x, y.x).
    """

    x: np.ndarray
    y: np.ndarray
    mu: float
    lam: float
    rank_defect_measure: float
    bordered_residual: float
    bordered_det: float


@dataclass
class BorderedMatrix:
    """Symmetric (n+1) x (n+1) matrix [[hess f(x) - lam I, x], [x^T, 0]]."""

    matrix: np.ndarray
    det: float


@dataclass
class QuadraticDegeneracy:
    degenerate: bool
    lambda1_multiplicity: int


@dataclass
class OracleResult:
    """Exact complex-locus membership for n = 2.

    ``on_locus`` is True when a nonzero complex pair (x, y), y.x = 0, makes
    the witness matrix rank deficient.  ``gcd`` holds the monic common
    factor of the dehomogenized minors (float view of exact rationals) when
    its degree is at least one.
    """

    on_locus: bool
    certificate: str
    gcd_degree: int
    gcd: tuple[float, ...] | None
    vanishes_at_infinity: bool
    minors_all_zero: bool


def _reject_zero(f: HomogeneousPolynomial) -> None:
    if f.is_zero:
        raise ZeroPolynomialError(
            "zero polynomial rejected: every sphere point is a degenerate critical point"
        )


def build_witness_matrix(f: HomogeneousPolynomial, x, y) -> WitnessMatrix:
    """Assemble the 2n x 3 matrix with columns (grad f; hess f y), (x; y), (0; x)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = f.n
    if x.shape != (n,) or y.shape != (n,):
        raise ValueError(f"x and y must have shape ({n},), got {x.shape} and {y.shape}")
    if not np.any(x):
        raise ValueError("x must be nonzero")
    W = np.zeros((2 * n, 3))
    W[:n, 0] = f.gradient(x)
    W[n:, 0] = f.hessian(x) @ y
    W[:n, 1] = x
    W[n:, 1] = y
    W[n:, 2] = x
    sv = np.linalg.svd(W, compute_uv=False)
    return WitnessMatrix(matrix=W, singular_values=sv)


def rank_deficient(wm: WitnessMatrix, tol_rank: float = DEFAULT_TOL_RANK) -> bool:
    """Numerical rank <= 2 decision: third singular value relative to the first."""
    sv = wm.singular_values
    return bool(sv[2] <= tol_rank * sv[0])


def detect_sosc_failure(
    f: HomogeneousPolynomial,
    x,
    *,
    tol_crit: float = DEFAULT_TOL_CRIT,
    tol_class: float = DEFAULT_TOL_CLASS,
) -> DegeneracyWitness | None:
    """Search for a degeneracy witness at a critical point.

    Returns None when the SOSC margin is strictly positive beyond tolerance
    (no witness exists) and also when the margin is negative beyond
    tolerance (the point fails the SONC outright, so it is not on the
    degenerate locus).  Raises :class:`NotCriticalError` when x does not
    satisfy the FONC, since the rank characterization presumes a critical
    point.

    The witness direction is the eigenvector of the smallest tangent
    eigenvalue, normalized to unit length; mu is recovered by the
    one-dimensional least squares mu = x . (hess f(x) y - lam y), exact when
    the bordered system holds.
    """
    _reject_zero(f)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (f.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({f.n},)")
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"point must lie on the unit sphere, got norm {nrm!r}")

    scale = max(1.0, f.coefficient_norm)
    lam = f.d * f.evaluate(x)
    g = f.gradient(x)
    residual = float(np.linalg.norm(g - lam * x))
    crit_tol = critical_tolerance(f, tol_crit)
    if residual > crit_tol:
        raise NotCriticalError(
            f"FONC residual {residual:.6e} exceeds tolerance {crit_tol:.6e}"
        )
    if f.n == 1:
        return None  # empty tangent space: SOSC holds vacuously

    H = f.hessian(x)
    B = tangent_basis(x)
    M = B.T @ H @ B
    M = 0.5 * (M + M.T)
    eigvals, eigvecs = np.linalg.eigh(M)
    margin = float(eigvals[0] - lam)
    if abs(margin) > tol_class * scale:
        return None

    y = B @ eigvecs[:, 0]
    y = y / np.linalg.norm(y)
    mu = float(x @ (H @ y - lam * y))
    wm = build_witness_matrix(f, x, y)
    bordered_vec = np.concatenate([H @ y - lam * y - mu * x, [x @ y]])
    return DegeneracyWitness(
        x=x.copy(),
        y=y,
        mu=mu,
        lam=float(lam),
        rank_defect_measure=float(wm.singular_values[2]),
        bordered_residual=float(np.linalg.norm(bordered_vec)),
        bordered_det=bordered_determinant(f, x, lam),
    )


def bordered_matrix(f: HomogeneousPolynomial, x, lam: float) -> BorderedMatrix:
    x = np.asarray(x, dtype=np.float64)
    n = f.n
    if x.shape != (n,):
        raise ValueError(f"point has shape {x.shape}, expected ({n},)")
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = f.hessian(x) - lam * np.eye(n)
    M[:n, n] = x
    M[n, :n] = x
    return BorderedMatrix(matrix=M, det=float(np.linalg.det(M)))


def bordered_determinant(f: HomogeneousPolynomial, x, lam: float) -> float:
    """det of the bordered matrix; zero is necessary at degenerate points.

    Used as a necessary condition only: vanishing does not by itself certify
    a degenerate point.
    """
    return bordered_matrix(f, x, lam).det


def bordered_scale(f: HomogeneousPolynomial, x, lam: float) -> float:
    """Magnitude scale for near-zero tests of the bordered determinant.

    The determinant grows like a product of row norms, so near-zero checks
    compare against (1 + ||hess f(x)||_F + |lam|)^(n+1).
    """
    H = f.hessian(np.asarray(x, dtype=np.float64))
    return float((1.0 + np.linalg.norm(H) + abs(lam)) ** (f.n + 1))


def quadratic_degeneracy(A, *, tol_eig: float = DEFAULT_TOL_EIG) -> QuadraticDegeneracy:
    """Degeneracy rule for f = x^T A x / 2: least eigenvalue not simple.

    Symmetric eigenvalues are perfectly conditioned, so the multiplicity
    decision uses the tight threshold tol_eig * ||A||_F.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.linalg.norm(A))):
        raise ValueError("A must be symmetric")
    w = np.linalg.eigvalsh(A)
    tol = tol_eig * np.linalg.norm(A)
    multiplicity = int(np.count_nonzero(w - w[0] <= tol))
    return QuadraticDegeneracy(degenerate=multiplicity >= 2, lambda1_multiplicity=multiplicity)


def witness_to_dict(
    f: HomogeneousPolynomial, witness: DegeneracyWitness, *, include_oracle: bool = True
) -> dict:
    """JSON-ready view of a witness; adds the exact oracle verdict for n = 2."""
    payload = {
        "x": [float(v) for v in witness.x],
        "y": [float(v) for v in witness.y],
        "mu": witness.mu,
        "lambda": witness.lam,
        "third_singular_value": witness.rank_defect_measure,
        "bordered_det": witness.bordered_det,
    }
    if include_oracle and f.n == 2:
        payload["oracle_on_locus"] = exact_oracle_n2(f).on_locus
    return payload


# ---------------------------------------------------------------------------
# Exact n = 2 oracle: binary-form minors and rational GCD.
#
# Binary forms of degree k are coefficient lists of length k + 1 over
# Fraction, index i holding the coefficient of x1^i x2^(k-i).  The same list
# read as a univariate polynomial in t = x1 is the dehomogenization at
# x2 = 1, which is what the Euclidean algorithm runs on.
# ---------------------------------------------------------------------------


def _form_add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    out = [Fraction(0)] * size
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return out


def _form_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    out = [Fraction(0)] * size
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return out


def _form_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _det3(r0, r1, r2) -> list[Fraction]:
    a, b, c = r0
    d_, e, g = r1
    h, i, j = r2
    m0 = _form_sub(_form_mul(e, j), _form_mul(g, i))
    m1 = _form_sub(_form_mul(d_, j), _form_mul(g, h))
    m2 = _form_sub(_form_mul(d_, i), _form_mul(e, h))
    return _form_add(
        _form_sub(_form_mul(a, m0), _form_mul(b, m1)),
        _form_mul(c, m2),
    )


def _strip(p: list[Fraction]) -> list[Fraction]:
    k = len(p)
    while k and p[k - 1] == 0:
        k -= 1
    return p[:k]


def _poly_mod(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u = list(u)
    dv = len(v) - 1
    lead = v[-1]
    while len(u) - 1 >= dv:
        q = u[-1] / lead
        if q:
            shift = len(u) - 1 - dv
            for i in range(dv + 1):
                u[shift + i] -= q * v[i]
        u.pop()
    return u


def _poly_gcd(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u, v = _strip(u), _strip(v)
    while v:
        u, v = v, _strip(_poly_mod(u, v))
        # Monic normalization keeps the rationals from ballooning.
        lead = u[-1]
        if lead != 1:
            u = [c / lead for c in u]
    if u:
        lead = u[-1]
        u = [c / lead for c in u]
    return u


def _witness_minor_forms(f: HomogeneousPolynomial) -> list[list[Fraction]]:
    """The four 3x3 minors of the witness matrix with y = (x2, -x1).

    Each minor is a binary form of degree d + 1 with exactly rational
    coefficients (floats are binary rationals).
    """
    d = f.d
    a = [Fraction(0)] * (d + 1)
    for (e1, _), c in f.terms.items():
        a[e1] = Fraction(c)

    # First partials, degree d - 1.
    f1 = [Fraction(i + 1) * a[i + 1] for i in range(d)]
    f2 = [Fraction(d - i) * a[i] for i in range(d)]

    one = Fraction(1)
    y1 = [one, Fraction(0)]            # x2
    y2 = [Fraction(0), -one]           # -x1
    x1f = [Fraction(0), one]
    x2f = [one, Fraction(0)]
    zero1 = [Fraction(0), Fraction(0)]

    if d >= 2:
        f11 = [Fraction(i + 1) * f1[i + 1] for i in range(d - 1)]
        f12 = [Fraction(d - 1 - i) * f1[i] for i in range(d - 1)]
        f22 = [Fraction(d - 1 - i) * f2[i] for i in range(d - 1)]
        hy1 = _form_add(_form_mul(f11, y1), _form_mul(f12, y2))
        hy2 = _form_add(_form_mul(f12, y1), _form_mul(f22, y2))
    else:
        hy1 = [Fraction(0)]
        hy2 = [Fraction(0)]

    r1 = (f1, x1f, zero1)
    r2 = (f2, x2f, zero1)
    r3 = (hy1, y1, x1f)
    r4 = (hy2, y2, x2f)
    return [
        _det3(r1, r2, r3),
        _det3(r1, r2, r4),
        _det3(r1, r3, r4),
        _det3(r2, r3, r4),
    ]


def exact_oracle_n2(f: HomogeneousPolynomial) -> OracleResult:
    """Exact membership test for the complex degeneracy locus at n = 2.

    Over the complex numbers the solutions of y.x = 0 with x != 0 form the
    single direction y = (x2, -x1) up to scale, so a nonzero witness pair
    exists exactly when the four 3x3 minors of the witness matrix, binary
    forms of degree d + 1, share a common projective root.  The decision is
    a rational-arithmetic GCD of the dehomogenized minors, plus a shared
    root at infinity when every minor misses the x1^(d+1) monomial.
    """
    _reject_zero(f)
    if f.n != 2:
        raise ValueError(f"exact oracle needs n = 2, got n = {f.n}")
    minors = _witness_minor_forms(f)
    stripped = [_strip(m) for m in minors]
    nonzero = [m for m in stripped if m]

    if not nonzero:
        return OracleResult(
            on_locus=True,
            certificate="all 3x3 minors vanish identically; every nonzero x admits a witness",
            gcd_degree=-1,
            gcd=None,
            vanishes_at_infinity=True,
            minors_all_zero=True,
        )

    top = f.d + 1  # coefficient index of x1^(d+1)
    vanishes_at_infinity = all(len(m) <= top for m in stripped)

    g = nonzero[0]
    for m in nonzero[1:]:
        g = _poly_gcd(g, m)
        if len(g) == 1:
            break
    gcd_degree = len(g) - 1
    on_locus = gcd_degree >= 1 or vanishes_at_infinity

    if gcd_degree >= 1 and vanishes_at_infinity:
        certificate = (
            f"minors share a degree-{gcd_degree} factor and a common zero at infinity"
        )
    elif gcd_degree >= 1:
        certificate = (
            f"minors share a degree-{gcd_degree} factor; its roots are witness directions"
        )
    elif vanishes_at_infinity:
        certificate = "minors share the zero (1, 0) at infinity (x2 = 0 direction)"
    else:
        certificate = (
            "minors are coprime and do not all vanish at x2 = 0; "
            "no nonzero complex witness pair exists"
        )
    return OracleResult(
        on_locus=on_locus,
        certificate=certificate,
        gcd_degree=gcd_degree,
        gcd=tuple(float(c) for c in g) if gcd_degree >= 1 else None,
        vanishes_at_infinity=vanishes_at_infinity,
        minors_all_zero=False,
    )
