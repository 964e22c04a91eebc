"""Shared fixtures and independent numerical oracles for the test suite.

The finite-difference helpers here are deliberately independent of the
library's analytic derivative code paths: they call only ``evaluate``.
"""

import numpy as np
import pytest

from spherecrit import HomogeneousPolynomial, weighted_axis_quadratic


def central_difference_gradient(f, x, h):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        out[i] = (f.evaluate(x + step) - f.evaluate(x - step)) / (2.0 * h)
    return out


def central_difference_hessian(f, x, h):
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            si = np.zeros(n)
            sj = np.zeros(n)
            si[i] = h
            sj[j] = h
            out[i, j] = (
                f.evaluate(x + si + sj)
                - f.evaluate(x + si - sj)
                - f.evaluate(x - si + sj)
                + f.evaluate(x - si - sj)
            ) / (4.0 * h * h)
    return 0.5 * (out + out.T)


@pytest.fixture
def diag123():
    """(x1^2 + 2 x2^2 + 3 x3^2) / 2, Hessian diag(1, 2, 3)."""
    return weighted_axis_quadratic(3)


@pytest.fixture
def cubic_sum():
    """x1^3 + x2^3, six critical points known in closed form."""
    return HomogeneousPolynomial(2, 3, {(3, 0): 1.0, (0, 3): 1.0})


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)
