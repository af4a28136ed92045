import math

import numpy as np
import pytest

from ddesim.quadrature import (
    clenshaw_curtis,
    default_rule,
    gauss_legendre,
    integrate,
    make_rule,
)


def exact_monomial(k):
    # integral of x^k over [-1, 1]
    return 0.0 if k % 2 else 2.0 / (k + 1)


@pytest.mark.parametrize("points", [1, 2, 3, 5, 8, 16])
def test_gauss_legendre_weight_sum(points):
    rule = gauss_legendre(points)
    assert abs(rule.weights.sum() - 2.0) < 1e-14


@pytest.mark.parametrize("points", [1, 2, 3, 5, 9, 16])
def test_clenshaw_curtis_weight_sum(points):
    rule = clenshaw_curtis(points)
    assert abs(rule.weights.sum() - 2.0) < 1e-14


@pytest.mark.parametrize("points", [1, 2, 4, 7, 12])
def test_gauss_legendre_exactness(points):
    rule = gauss_legendre(points)
    assert rule.exactness_degree == 2 * points - 1
    for k in range(rule.exactness_degree + 1):
        got = np.dot(rule.weights, rule.abscissae**k)
        assert abs(got - exact_monomial(k)) < 1e-13


@pytest.mark.parametrize("points", [2, 3, 5, 9, 17])
def test_clenshaw_curtis_exactness(points):
    rule = clenshaw_curtis(points)
    assert rule.exactness_degree == points - 1
    for k in range(rule.exactness_degree + 1):
        got = np.dot(rule.weights, rule.abscissae**k)
        assert abs(got - exact_monomial(k)) < 1e-13


def test_constant_over_window():
    rule = gauss_legendre(4)
    assert abs(integrate(rule, lambda t: 1.0, 0.0, 3.0) - 3.0) < 1e-14


def test_cubic_exact_with_two_points():
    rule = gauss_legendre(2)
    assert abs(integrate(rule, lambda t: t**3, 0.0, 1.0) - 0.25) < 1e-15


def test_sine_against_antiderivative():
    rule = gauss_legendre(16)
    assert abs(integrate(rule, math.sin, 0.0, math.pi) - 2.0) < 1e-12


def test_interval_additivity():
    rule = gauss_legendre(12)
    f = lambda t: math.exp(-t) * math.cos(3 * t)
    whole = integrate(rule, f, 0.0, 2.0)
    split = integrate(rule, f, 0.0, 0.7) + integrate(rule, f, 0.7, 2.0)
    assert abs(whole - split) < 1e-12


def test_empty_window_is_exactly_zero():
    rule = gauss_legendre(6)
    assert integrate(rule, lambda t: math.exp(t), 0.4, 0.4) == 0.0


def test_linearity():
    rule = clenshaw_curtis(9)
    f = lambda t: math.sin(t)
    g = lambda t: t**2
    alpha = 2.75
    combined = integrate(rule, lambda t: alpha * f(t) + g(t), -1.0, 1.0)
    parts = alpha * integrate(rule, f, -1.0, 1.0) + integrate(rule, g, -1.0, 1.0)
    assert abs(combined - parts) < 1e-14


def test_array_valued_integrand():
    rule = gauss_legendre(5)
    out = integrate(rule, lambda t: np.array([[t, 1.0], [0.0, t**2]]), 0.0, 1.0)
    np.testing.assert_allclose(out, [[0.5, 1.0], [0.0, 1.0 / 3.0]], rtol=0, atol=1e-14)


def test_reversed_window_rejected():
    rule = gauss_legendre(3)
    with pytest.raises(ValueError):
        integrate(rule, lambda t: t, 1.0, 0.0)


def test_default_rule_policy():
    assert default_rule(24).points == max(math.ceil(27 / 2), 8) == 14
    assert default_rule(1).points == 8
    assert default_rule(24).kind == "gauss_legendre"


def test_make_rule_dispatch():
    assert make_rule("gauss_legendre", 4).kind == "gauss_legendre"
    assert make_rule("clenshaw_curtis", 4).kind == "clenshaw_curtis"
    with pytest.raises(ValueError):
        make_rule("trapezoid", 4)
