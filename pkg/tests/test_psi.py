import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psicoord.errors import (
    InfiniteArgumentWithNonnegativeLambda,
    NonFiniteInput,
    NonPositiveLength,
    UnknownEdge,
)
from psicoord.psi import (
    CLOSED_FORM_LAMBDAS,
    F,
    F_pair,
    F_quadrature,
    M,
    Metric,
    PsiVector,
    forward_map,
    mass_beta,
    mass_quadrature,
    psi_edge,
    psi_jacobian,
    truncation_point,
)
from psicoord.solver import finite_difference_jacobian

from conftest import random_metric
from oracles import cosh_power_integral

THETA_111 = 1.7049128323580137
GRID = np.round(np.arange(-5.0, 5.0 + 1e-9, 0.1), 10)


@pytest.mark.parametrize("lam", CLOSED_FORM_LAMBDAS)
def test_closed_forms_match_quadrature(lam):
    worst = max(abs(F(lam, x) - F_quadrature(lam, x)) for x in GRID)
    assert worst < 1e-10


@pytest.mark.parametrize("lam", [-7.3, -2.5, -0.3, 0.5, 1.7, 3.0])
@pytest.mark.parametrize("x", [0.05, 0.9, 2.0, 6.5, 15.0])
def test_generic_lambda_matches_oracle(lam, x):
    ref = float(cosh_power_integral(lam, 0, x))
    assert F(lam, x) == pytest.approx(ref, rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("lam", [-4.0, -2.5, -1.0, 0.0, 0.7, 2.0])
def test_oddness(lam):
    for x in GRID:
        assert abs(F(lam, x) + F(lam, -x)) <= 1e-12


def test_negative_lambda_limits():
    for lam in (-0.5, -1.0, -3.0):
        assert F(lam, math.inf) == pytest.approx(M(lam), rel=1e-14)
        assert F(lam, -math.inf) == pytest.approx(-M(lam), rel=1e-14)
        x = truncation_point(lam) + 3.0
        assert F(lam, x) < M(lam) or F(lam, x) == pytest.approx(M(lam), rel=1e-15)


def test_bounded_by_mass():
    for lam in (-0.5, -2.5, -6.0):
        for x in (0.1, 1.0, 5.0):
            assert abs(F(lam, x)) < M(lam)
        # far out the gap to M is below one ulp
        assert abs(F(lam, 40.0)) <= M(lam)


@pytest.mark.parametrize("lam", [0.0, 0.5, 2.0])
def test_infinite_argument_needs_negative_lambda(lam):
    with pytest.raises(InfiniteArgumentWithNonnegativeLambda):
        F(lam, math.inf)


def test_nan_rejected():
    with pytest.raises(NonFiniteInput):
        F(-0.7, math.nan)
    with pytest.raises(NonFiniteInput):
        F(-1.0, math.nan)


def test_mass_values():
    assert M(-2.0) == pytest.approx(1.0, abs=1e-10)
    assert M(-1.0) == pytest.approx(math.pi / 2, abs=1e-10)
    assert M(-4.0) == pytest.approx(2.0 / 3.0, abs=1e-10)
    assert math.isinf(M(0.0)) and math.isinf(M(1.5))


@pytest.mark.parametrize("lam", [-0.1, -0.5, -1.0, -2.0, -4.0, -8.0, -0.05, -20.0])
def test_mass_paths_agree(lam):
    assert mass_quadrature(lam) == pytest.approx(mass_beta(lam), rel=1e-9)
    ref = float(mpmath.power(2, -lam - 2) * mpmath.beta(-lam / 2, -lam / 2))
    assert mass_beta(lam) == pytest.approx(ref, rel=1e-13)


def test_mass_increasing():
    grid = [-8.0, -4.0, -2.0, -1.0, -0.5, -0.1]
    values = [M(lam) for lam in grid]
    assert all(a < b for a, b in zip(values, values[1:]))


@given(
    a=st.floats(min_value=1e-3, max_value=10.0),
    x=st.floats(min_value=-40.0, max_value=40.0),
    lam=st.floats(min_value=-6.0, max_value=3.0),
)
@settings(max_examples=300, deadline=None)
def test_sum_positivity(a, x, lam):
    assert F_pair(lam, a + x, a - x) > 0


@pytest.mark.parametrize("lam,u,v", [(-3.0, 12.0, -11.9), (-1.5, 30.0, -29.0), (-0.4, -80.0, 81.0),
                                     (2.0, 4.0, -3.5), (-2.5, 0.3, 0.8), (-2.0, -30.0, 25.0),
                                     (-1.2, -3.0, -4.0)])
def test_pair_matches_oracle(lam, u, v):
    ref = cosh_power_integral(lam, -v, u)
    assert F_pair(lam, u, v) == pytest.approx(float(ref), rel=1e-9)


def test_pair_agrees_with_sum_when_well_conditioned():
    for lam in (-2.5, 0.5):
        for u, v in ((1.0, 2.0), (-0.5, 3.0), (2.0, -1.0)):
            assert F_pair(lam, u, v) == pytest.approx(F(lam, u) + F(lam, v), abs=1e-12)


def test_pair_monotone():
    values = [F_pair(-2.7, 25.0 + k * 0.5, -25.0) for k in range(1, 8)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_psi_at_unit_lengths(theta_complex):
    metric = Metric((1.0, 1.0, 1.0))
    r = THETA_111 / 2
    assert forward_map(theta_complex, metric, 0.0).values == pytest.approx((THETA_111,) * 3, abs=1e-12)
    assert forward_map(theta_complex, metric, -2.0).values == pytest.approx((2 * math.tanh(r),) * 3, abs=1e-12)
    assert forward_map(theta_complex, metric, 1.0).values == pytest.approx((2 * math.sinh(r),) * 3, abs=1e-12)


def test_psi_edge_consistent(ring4):
    metric = random_metric(np.random.default_rng(3), ring4.edge_count)
    full = forward_map(ring4, metric, -1.3)
    for e in range(ring4.edge_count):
        assert psi_edge(ring4, metric, -1.3, e) == full.values[e]
    with pytest.raises(UnknownEdge):
        psi_edge(ring4, metric, -1.3, ring4.edge_count)


def test_psi_permutation_equivariant(theta_complex):
    # both hexagons carry the edges in the same slots, so permuting lengths permutes psi
    l = (0.4, 1.7, 3.1)
    base = forward_map(theta_complex, Metric(l), -0.8).values
    perm = (2, 0, 1)
    moved = forward_map(theta_complex, Metric(tuple(l[p] for p in perm)), -0.8).values
    assert moved == pytest.approx(tuple(base[p] for p in perm), rel=1e-12)


def test_metric_validation(theta_complex):
    with pytest.raises(NonPositiveLength):
        Metric((1.0, 0.0, 1.0))
    with pytest.raises(NonFiniteInput):
        Metric((1.0, math.inf, 1.0))
    with pytest.raises(ValueError):
        forward_map(theta_complex, Metric((1.0, 1.0)), -1.0)
    with pytest.raises(NonFiniteInput):
        PsiVector((0.0, math.nan))


def test_json_round_trip():
    metric = Metric((0.5, 2.0))
    assert Metric.from_json(metric.to_json()) == metric
    psi = PsiVector((0.25, -1.0))
    assert PsiVector.from_json(psi.to_json()) == psi
    assert np.asarray(psi).tolist() == [0.25, -1.0]


@pytest.mark.parametrize("lam", [-3.0, -0.5, 0.0, 2.0])
def test_jacobian_matches_finite_differences(ring4, lam):
    metric = random_metric(np.random.default_rng(11), ring4.edge_count)
    analytic = psi_jacobian(ring4, metric, lam)
    numeric = finite_difference_jacobian(ring4, metric, lam)
    assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-7 * np.abs(analytic).max())
