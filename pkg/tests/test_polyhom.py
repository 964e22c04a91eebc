"""Representation, calculus, serialization, and sampling of homogeneous polynomials."""

import json
import math

import numpy as np
import pytest

from spherecrit import (
    HomogeneousPolynomial,
    PolynomialFormatError,
    basis_size,
    geometric_power_polynomial,
    monomial_basis,
    parse_polynomial,
    random_polynomial,
    serialize_polynomial,
    weighted_axis_quadratic,
)
from conftest import central_difference_gradient, central_difference_hessian


def test_monomial_basis_order_and_size():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(3, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert len(monomial_basis(3, 4)) == basis_size(3, 4) == 15
    assert basis_size(5, 6) == math.comb(10, 6)


def test_evaluate_pythagorean():
    f = HomogeneousPolynomial(2, 2, {(2, 0): 1.0, (0, 2): 1.0})
    assert f.evaluate([3.0, 4.0]) == 25.0


def test_evaluate_weighted_quadratic_at_axis():
    p = weighted_axis_quadratic(3)
    assert p.evaluate([0.0, 1.0, 0.0]) == 1.0


def test_evaluate_at_origin_is_zero():
    rng = np.random.default_rng(0)
    for _ in range(5):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 6))
        f = random_polynomial(n, d, rng)
        assert f.evaluate(np.zeros(n)) == 0.0


def test_homogeneity_scaling():
    rng = np.random.default_rng(42)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 6))
        f = random_polynomial(n, d, rng)
        x = rng.standard_normal(n)
        t = float(rng.standard_normal())
        bound = 1e-10 * (1 + abs(t) ** d) * f.coefficient_norm * max(
            np.linalg.norm(x), 1e-12
        ) ** d
        assert abs(f.evaluate(t * x) - t**d * f.evaluate(x)) <= max(bound, 1e-12)


def test_gradient_monomial():
    f = HomogeneousPolynomial(2, 3, {(3, 0): 1.0})
    assert np.array_equal(f.gradient([1.0, 0.0]), [3.0, 0.0])


def test_gradient_geometric_power_d3():
    # alpha = 2, p = 2 x1^3 + 4 x2^3, grad at (1, 1) by direct differentiation.
    p = geometric_power_polynomial(2, 3)
    assert p.terms == {(3, 0): 2.0, (0, 3): 4.0}
    assert np.array_equal(p.gradient([1.0, 1.0]), [6.0, 12.0])


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(1, 7))
        f = random_polynomial(n, d, rng)
        x = rng.standard_normal(n)
        h = 1e-5 * max(1.0, np.linalg.norm(x))
        g = f.gradient(x)
        fd = central_difference_gradient(f, x, h)
        assert np.linalg.norm(fd - g) <= 1e-5 * max(1.0, np.linalg.norm(g))


def test_hessian_quadratic_is_constant():
    A = np.diag([1.0, 2.0, 3.0])
    f = HomogeneousPolynomial(
        3, 2, {(2, 0, 0): 0.5, (0, 2, 0): 1.0, (0, 0, 2): 1.5}
    )
    rng = np.random.default_rng(1)
    for _ in range(5):
        x = rng.standard_normal(3)
        assert np.allclose(f.hessian(x), A, atol=0.0)


def test_hessian_vanishes_off_axis():
    for n in (2, 3):
        for d in (3, 4, 5):
            f = HomogeneousPolynomial(n, d, {(d,) + (0,) * (n - 1): 1.0})
            e2 = np.zeros(n)
            e2[1] = 1.0
            assert np.array_equal(f.hessian(e2), np.zeros((n, n)))


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(15):
        n = int(rng.integers(2, 5))
        d = int(rng.integers(2, 7))
        f = random_polynomial(n, d, rng)
        x = rng.standard_normal(n)
        h = 1e-5 * max(1.0, np.linalg.norm(x))
        H = f.hessian(x)
        fd = central_difference_hessian(f, x, h)
        assert np.linalg.norm(fd - H) <= 1e-5 * max(1.0, np.linalg.norm(H))


def test_euler_identities():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(1, 7))
        f = random_polynomial(n, d, rng)
        x = rng.standard_normal(n)
        g = f.gradient(x)
        H = f.hessian(x)
        val = f.evaluate(x)
        scale1 = 1.0 + abs(d * val) + np.linalg.norm(g) * np.linalg.norm(x)
        assert abs(g @ x - d * val) <= 1e-10 * scale1
        scale2 = 1.0 + np.linalg.norm(H) * np.linalg.norm(x) + np.linalg.norm(g)
        assert np.linalg.norm(H @ x - (d - 1) * g) <= 1e-10 * scale2


def test_random_polynomial_deterministic():
    a = random_polynomial(2, 3, 12345)
    b = random_polynomial(2, 3, 12345)
    assert a == b
    assert np.array_equal(a.coefficient_vector(), b.coefficient_vector())
    c = random_polynomial(2, 3, 12346)
    assert not np.array_equal(a.coefficient_vector(), c.coefficient_vector())


def test_random_polynomial_coefficient_count():
    f = random_polynomial(3, 4, 0)
    assert f.coefficient_vector().shape == (15,)


def test_random_polynomial_mean_near_zero():
    # Law of large numbers: the pooled coefficient mean of many draws is a
    # mean of N iid standard normals, so |mean| <= 3 / sqrt(N) at 3 sigma.
    draws = 10_000
    total = 0.0
    count = 0
    for seed in range(draws):
        vec = random_polynomial(2, 2, seed).coefficient_vector()
        total += float(vec.sum())
        count += vec.size
    assert abs(total / count) <= 3.0 / math.sqrt(count)


def test_coefficient_vector_round_trip():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 6))
        f = random_polynomial(n, d, rng)
        g = HomogeneousPolynomial.from_coefficient_vector(n, d, f.coefficient_vector())
        assert f == g


def test_parse_example():
    text = '{"n":2,"d":2,"terms":[{"exp":[2,0],"coef":1.0},{"exp":[0,2],"coef":1.0}]}'
    f = parse_polynomial(text)
    assert f.n == 2 and f.d == 2
    assert f.terms == {(2, 0): 1.0, (0, 2): 1.0}
    assert f.evaluate([3.0, 4.0]) == 25.0


def test_parse_rejects_wrong_exponent_sum():
    text = '{"n":2,"d":2,"terms":[{"exp":[1,0],"coef":1.0}]}'
    with pytest.raises(PolynomialFormatError, match=r"exponent sum 1 != degree 2"):
        parse_polynomial(text)


def test_parse_rejects_duplicate_monomial():
    text = '{"n":2,"d":2,"terms":[{"exp":[2,0],"coef":1.0},{"exp":[2,0],"coef":2.0}]}'
    with pytest.raises(PolynomialFormatError, match="duplicate monomial"):
        parse_polynomial(text)


def test_parse_rejects_bad_json_and_structure():
    with pytest.raises(PolynomialFormatError, match="invalid JSON"):
        parse_polynomial("{not json")
    with pytest.raises(PolynomialFormatError, match="missing required key"):
        parse_polynomial('{"n": 2, "d": 2}')
    with pytest.raises(PolynomialFormatError, match="must be an integer"):
        parse_polynomial('{"n": 2.5, "d": 2, "terms": []}')
    with pytest.raises(PolynomialFormatError, match="negative exponent"):
        parse_polynomial('{"n": 2, "d": 1, "terms": [{"exp": [2, -1], "coef": 1.0}]}')


def test_serialize_parse_round_trip():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 6))
        f = random_polynomial(n, d, rng)
        again = parse_polynomial(serialize_polynomial(f))
        assert again == f


def test_serialize_uses_17_significant_digits():
    f = HomogeneousPolynomial(2, 1, {(1, 0): 0.1, (0, 1): 1.0 / 3.0})
    text = serialize_polynomial(f)
    assert "0.10000000000000001" in text
    assert "0.33333333333333331" in text
    doc = json.loads(text)
    assert doc["n"] == 2 and doc["d"] == 1


def test_serialize_is_stable_round_trip_text():
    f = random_polynomial(3, 3, 99)
    text = serialize_polynomial(f)
    assert serialize_polynomial(parse_polynomial(text)) == text


def test_zero_coefficients_are_dropped():
    f = HomogeneousPolynomial(2, 2, {(2, 0): 0.0, (0, 2): 0.0})
    assert f.is_zero
    assert f.num_terms == 0
    assert serialize_polynomial(f) == '{"n": 2, "d": 2, "terms": []}\n'
    assert parse_polynomial(serialize_polynomial(f)).is_zero


def test_constructor_validation():
    with pytest.raises(ValueError, match="exponent sum"):
        HomogeneousPolynomial(2, 2, {(1, 0): 1.0})
    with pytest.raises(ValueError, match="length"):
        HomogeneousPolynomial(2, 2, {(2, 0, 0): 1.0})
    with pytest.raises(ValueError, match="positive integer"):
        HomogeneousPolynomial(0, 2, {})
    with pytest.raises(ValueError, match="positive integer"):
        HomogeneousPolynomial(2, 0, {})
    with pytest.raises(ValueError, match="non-finite"):
        HomogeneousPolynomial(1, 1, {(1,): float("nan")})


def test_dimension_mismatch_errors():
    f = random_polynomial(3, 2, 0)
    with pytest.raises(ValueError, match="shape"):
        f.evaluate([1.0, 2.0])
    with pytest.raises(ValueError, match="shape"):
        f.gradient([1.0, 2.0])
    with pytest.raises(ValueError, match="shape"):
        f.hessian(np.ones(4))


def test_terms_property_returns_copy():
    f = HomogeneousPolynomial(2, 2, {(2, 0): 1.0})
    t = f.terms
    t[(0, 2)] = 5.0
    assert f.terms == {(2, 0): 1.0}
