import math

import numpy as np
import pytest

from psicoord.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, gk15, integrate

from oracles import cosh_power_integral


def test_rule_weights_sum_to_two():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.count_nonzero(GAUSS_WEIGHTS) == 7


@pytest.mark.parametrize("degree", range(0, 24))
def test_kronrod_exact_to_degree_23(degree):
    value, _ = gk15(lambda t: t ** degree, -1.0, 1.0)
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert value == pytest.approx(exact, abs=1e-14)


def test_gauss_exact_to_degree_13():
    for degree in range(14):
        exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
        assert float(GAUSS_WEIGHTS @ NODES ** degree) == pytest.approx(exact, abs=1e-14)


def test_integrate_orientation_and_empty():
    f = np.exp
    assert integrate(f, 2.0, 2.0) == 0.0
    assert integrate(f, 1.0, 0.0) == pytest.approx(-(math.e - 1), abs=1e-13)


@pytest.mark.parametrize("lam,a,b", [(-3.5, 0, 7), (0.5, -2, 4), (-0.1, 0, 30), (2.7, 0, 3), (-8, 0.5, 1.5)])
def test_integrate_matches_oracle(lam, a, b):
    value = integrate(lambda t: np.cosh(t) ** lam, a, b, tol=1e-13)
    assert value == pytest.approx(float(cosh_power_integral(lam, a, b)), abs=1e-12)


def test_peaked_integrand():
    value = integrate(lambda t: 1.0 / (1e-4 + t * t), -1.0, 1.0, tol=1e-12)
    assert value == pytest.approx(2 * math.atan(1 / 1e-2) / 1e-2, rel=1e-11)
