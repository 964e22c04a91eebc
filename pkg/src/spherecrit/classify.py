"""First and second order optimality status of sphere points.

At a unit vector x, feasible directions are the tangent space x-perp.  With
lam = d f(x) (the exact multiplier at critical points, by Euler's identity)
the second-order behaviour is read off the spectrum of B^T hess f(x) B where
the columns of B are an orthonormal tangent basis:

* every tangent eigenvalue  > lam  ->  SOSC, x is a strict local minimizer;
* smallest tangent eigenvalue == lam (within tolerance) -> SONC holds but
  SOSC fails, the degenerate case this package exists to detect;
* some tangent eigenvalue  < lam  ->  FONC_ONLY, x is not a local minimizer.

Points whose FONC residual ||grad f(x) - lam x|| exceeds tolerance are
classified NOT_CRITICAL.  For n = 1 the tangent space is empty and every
critical point is vacuously SOSC.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .critsolve import (
    DEFAULT_TOL_CRIT,
    CriticalPair,
    SolverConfig,
    critical_tolerance,
    find_critical_pairs,
)
from .polyhom import HomogeneousPolynomial, ZeroPolynomialError

__all__ = [
    "Verdict",
    "TangentSpectrum",
    "ClassifiedPoint",
    "classification_tolerance",
    "tangent_basis",
    "tangent_spectrum",
    "classify_point",
    "classify_all",
]

DEFAULT_TOL_CLASS = 1e-7
UNIT_NORM_TOL = 1e-10


class Verdict(str, enum.Enum):
    NOT_CRITICAL = "NOT_CRITICAL"
    FONC_ONLY = "FONC_ONLY"
    SONC_DEGENERATE = "SONC_DEGENERATE"
    SOSC = "SOSC"


def classification_tolerance(
    f: HomogeneousPolynomial, base: float = DEFAULT_TOL_CLASS
) -> float:
    """Margin threshold: base * max(1, coefficient norm).

    One order looser than the critical-pair tolerance because second-order
    quantities amplify solver error.
    """
    return base * max(1.0, f.coefficient_norm)


@dataclass
class TangentSpectrum:
    """Orthonormal tangent basis (columns) and the sorted eigenvalues of
    B^T hess f(x) B, ascending."""

    basis: np.ndarray
    eigenvalues: np.ndarray


@dataclass
class ClassifiedPoint:
    pair: CriticalPair
    spectrum: TangentSpectrum
    sosc_margin: float
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.pair.x],
            "lambda": self.pair.lam,
            "residual": self.pair.residual,
            "tangent_eigenvalues": [float(v) for v in self.spectrum.eigenvalues],
            "margin": self.sosc_margin,
            "verdict": self.verdict.value,
        }


def _reject_zero(f: HomogeneousPolynomial) -> None:
    if f.is_zero:
        raise ZeroPolynomialError(
            "zero polynomial rejected: every sphere point is a degenerate critical point"
        )


def _check_unit(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"point must lie on the unit sphere, got norm {nrm!r}")
    return x


def tangent_basis(x: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of x-perp, shape (n, n-1).

    Built from the Householder reflection sending the first coordinate axis
    onto the line through x: O(n^2), numerically stable, no branching on
    random input.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n == 1:
        return np.zeros((1, 0))
    s = np.linalg.norm(x) if x[0] >= 0 else -np.linalg.norm(x)
    v = x.copy()
    v[0] += s
    H = np.eye(n) - (2.0 / (v @ v)) * np.outer(v, v)
    return H[:, 1:]


def tangent_spectrum(f: HomogeneousPolynomial, x) -> TangentSpectrum:
    """Eigenvalues of the Hessian restricted to the tangent space at x.

    Sorted ascending; independent of the basis choice up to reordering.
    For n = 1 the spectrum is empty.
    """
    _reject_zero(f)
    x = _check_unit(x)
    if x.shape != (f.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({f.n},)")
    B = tangent_basis(x)
    if B.shape[1] == 0:
        return TangentSpectrum(basis=B, eigenvalues=np.zeros(0))
    M = B.T @ f.hessian(x) @ B
    M = 0.5 * (M + M.T)
    return TangentSpectrum(basis=B, eigenvalues=np.linalg.eigvalsh(M))


def classify_point(
    f: HomogeneousPolynomial,
    x,
    *,
    tol_crit: float | None = None,
    tol_class: float | None = None,
) -> ClassifiedPoint:
    """Verdict for one unit vector, with margins.

    ``tol_crit`` and ``tol_class`` are base tolerances (defaults 1e-9 and
    1e-7) that get scaled by max(1, coefficient norm).  The degenerate band
    is two-sided: a margin within +-tol_class of zero is reported
    SONC_DEGENERATE even when slightly negative, which is the conservative
    choice for detecting a measure-zero locus.
    """
    _reject_zero(f)
    x = _check_unit(x)
    if x.shape != (f.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({f.n},)")
    crit_tol = critical_tolerance(f, DEFAULT_TOL_CRIT if tol_crit is None else tol_crit)
    class_tol = classification_tolerance(
        f, DEFAULT_TOL_CLASS if tol_class is None else tol_class
    )

    lam = f.d * f.evaluate(x)
    g = f.gradient(x)
    residual = float(np.linalg.norm(g - lam * x))
    sphere_residual = float(abs(x @ x - 1.0))
    spectrum = tangent_spectrum(f, x)
    if f.n == 1:
        margin = math.inf
    else:
        margin = float(spectrum.eigenvalues[0] - lam)

    if residual > crit_tol:
        verdict = Verdict.NOT_CRITICAL
    elif f.n == 1 or margin > class_tol:
        verdict = Verdict.SOSC
    elif margin >= -class_tol:
        verdict = Verdict.SONC_DEGENERATE
    else:
        verdict = Verdict.FONC_ONLY

    pair = CriticalPair(
        x=x.copy(), lam=float(lam), residual=residual, sphere_residual=sphere_residual
    )
    return ClassifiedPoint(pair=pair, spectrum=spectrum, sosc_margin=margin, verdict=verdict)


def classify_all(
    f: HomogeneousPolynomial,
    config: SolverConfig | None = None,
    *,
    tol_class: float = DEFAULT_TOL_CLASS,
) -> list[ClassifiedPoint]:
    """Find critical pairs by multistart Newton and classify each of them."""
    cfg = config or SolverConfig()
    found = find_critical_pairs(f, cfg)
    return [
        classify_point(f, p.x, tol_crit=cfg.tol_crit, tol_class=tol_class)
        for p in found.pairs
    ]
