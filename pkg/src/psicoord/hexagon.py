"""Colored hyperbolic right-angled hexagons.

Index convention: ``l[i]`` is the i-th red edge, ``theta[i]`` the A-arc
opposite it, and ``r[i] = (theta[j] + theta[k] - theta[i]) / 2``.

Everything is evaluated through logarithms of ``cosh``/``sinh`` so that
lengths up to several hundred do not overflow, and ``arccosh(1 + y)`` is taken
from ``y`` directly so that nearly degenerate A-arcs keep their precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidRTriple, NonFiniteInput, NonPositiveLength, UnknownScenario

LOG2 = math.log(2.0)
_OTHERS = ((1, 2), (0, 2), (0, 1))


def log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - LOG2


def log_sinh(x: float) -> float:
    """log(sinh x) for x > 0."""
    return x + math.log(-math.expm1(-2.0 * x)) - LOG2


def arccosh1p_from_log(log_y: float) -> float:
    """arccosh(1 + y) given log(y)."""
    if log_y > 30.0:
        # arccosh(z) = log(2z) - O(z**-2) with z = 1 + y
        return LOG2 + log_y + math.log1p(math.exp(-log_y))
    y = math.exp(log_y)
    return math.log1p(y + math.sqrt(y * (y + 2.0)))


def _check_triple(values: Sequence[float], name: str) -> tuple[float, float, float]:
    if len(values) != 3:
        raise ValueError(f"{name} must have three components")
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise NonFiniteInput(f"{name} has non-finite components: {out}")
    if not all(v > 0.0 for v in out):
        raise NonPositiveLength(f"{name} must be positive: {out}")
    return out


def _cosine_law(x: tuple[float, float, float]) -> tuple[float, float, float]:
    """``y_j = arccosh((cosh x_j + cosh x_i cosh x_k) / (sinh x_i sinh x_k))``.

    The same kernel maps lengths to A-arcs and A-arcs back to lengths.  Uses
    ``cosh y_j - 1 = (cosh x_j + cosh(x_i - x_k)) / (sinh x_i sinh x_k)``.
    """
    out = []
    for j, (i, k) in enumerate(_OTHERS):
        num = np.logaddexp(log_cosh(x[j]), log_cosh(x[i] - x[k]))
        log_y = float(num) - log_sinh(x[i]) - log_sinh(x[k])
        out.append(arccosh1p_from_log(log_y))
    return tuple(out)


def theta_from_lengths(l: Sequence[float]) -> tuple[float, float, float]:
    return _cosine_law(_check_triple(l, "lengths"))


def lengths_from_theta(theta: Sequence[float]) -> tuple[float, float, float]:
    return _cosine_law(_check_triple(theta, "theta"))


def r_from_theta(theta: Sequence[float]) -> tuple[float, float, float]:
    t0, t1, t2 = (float(v) for v in theta)
    return ((t1 + t2 - t0) / 2.0, (t0 + t2 - t1) / 2.0, (t0 + t1 - t2) / 2.0)


def theta_from_r(r: Sequence[float]) -> tuple[float, float, float]:
    r0, r1, r2 = (float(v) for v in r)
    theta = (r1 + r2, r0 + r2, r0 + r1)
    if not all(math.isfinite(t) for t in theta):
        raise NonFiniteInput(f"r has non-finite components: {tuple(r)}")
    if min(theta) <= 0.0:
        raise InvalidRTriple(f"r = {tuple(r)} gives a non-positive A-arc {theta}")
    return theta


@dataclass(frozen=True)
class HexGeometry:
    l: tuple[float, float, float]
    theta: tuple[float, float, float]
    r: tuple[float, float, float]

    @classmethod
    def from_lengths(cls, l: Sequence[float]) -> "HexGeometry":
        theta = theta_from_lengths(l)
        return cls(tuple(float(v) for v in l), theta, r_from_theta(theta))

    @classmethod
    def from_theta(cls, theta: Sequence[float]) -> "HexGeometry":
        l = lengths_from_theta(theta)
        theta = tuple(float(v) for v in theta)
        return cls(l, theta, r_from_theta(theta))


def tangent_law_residual(geom: HexGeometry, relative: bool = False) -> float:
    """max_i |tanh^2(l_i/2) cosh r_i cosh(r_i + r_j + r_k) - cosh r_j cosh r_k|.

    With ``relative=True`` each term is divided by ``cosh r_j cosh r_k``; the
    absolute form grows with the size of both sides and sits at the double
    precision floor once they reach ~1e6.
    """
    r = geom.r
    total = sum(r)
    worst = 0.0
    for i, (j, k) in enumerate(_OTHERS):
        lhs = math.tanh(geom.l[i] / 2.0) ** 2 * math.cosh(r[i]) * math.cosh(total)
        rhs = math.cosh(r[j]) * math.cosh(r[k])
        worst = max(worst, abs(lhs - rhs) / (rhs if relative else 1.0))
    return worst


def theta_jacobian(l: Sequence[float]) -> np.ndarray:
    """Matrix ``d theta[a] / d l[b]`` by implicit differentiation of the cosine law."""
    l = _check_triple(l, "lengths")
    theta = _cosine_law(l)
    jac = np.empty((3, 3))
    for j, (i, k) in enumerate(_OTHERS):
        sinh_theta = math.sinh(theta[j])
        jac[j, j] = math.exp(log_sinh(l[j]) - log_sinh(l[i]) - log_sinh(l[k])) / sinh_theta
        coth_i = 1.0 / math.tanh(l[i])
        coth_k = 1.0 / math.tanh(l[k])
        cosh_theta = math.cosh(theta[j])
        jac[j, i] = (coth_k - cosh_theta * coth_i) / sinh_theta
        jac[j, k] = (coth_i - cosh_theta * coth_k) / sinh_theta
    return jac


R_FROM_THETA = 0.5 * np.array([[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]])


def r_jacobian(l: Sequence[float]) -> np.ndarray:
    """Matrix ``d r[a] / d l[b]``."""
    return R_FROM_THETA @ theta_jacobian(l)


SCENARIOS = ("i_to_zero", "one_to_inf", "two_to_inf", "three_to_inf")
CSV_HEADER = "t,l1,l2,l3,theta1,theta2,theta3,r1,r2,r3"


def scenario_lengths(scenario: str, t: float, fixed: Sequence[float] = ()) -> tuple[float, float, float]:
    """Length triple at parameter ``t`` for one of the degeneration families.

    ``i_to_zero``: (1/t, f1, f2); ``one_to_inf``: (t, f1, f2);
    ``two_to_inf``: (t, t, f5); ``three_to_inf``: (t, t, t).
    Missing fixed values default to 1.
    """
    f = list(fixed) + [1.0, 1.0]
    if scenario == "i_to_zero":
        return (1.0 / t, float(f[0]), float(f[1]))
    if scenario == "one_to_inf":
        return (float(t), float(f[0]), float(f[1]))
    if scenario == "two_to_inf":
        return (float(t), float(t), float(f[0]))
    if scenario == "three_to_inf":
        return (float(t), float(t), float(t))
    raise UnknownScenario(f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")


def degeneration_table(scenario: str, grid: Sequence[float], fixed: Sequence[float] = ()):
    """Rows ``(t, l, theta, r)`` along a degeneration family."""
    if scenario not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
    grid = [float(t) for t in grid]
    if any(t <= 0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid values must be positive and strictly increasing")
    rows = []
    for t in grid:
        geom = HexGeometry.from_lengths(scenario_lengths(scenario, t, fixed))
        rows.append((t, geom.l, geom.theta, geom.r))
    return rows


def format_csv(rows) -> str:
    lines = [CSV_HEADER]
    for t, l, theta, r in rows:
        values = (t, *l, *theta, *r)
        lines.append(",".join(f"{v:.12g}" for v in values))
    return "\n".join(lines) + "\n"
