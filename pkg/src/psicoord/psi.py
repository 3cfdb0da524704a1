"""The integral F(lam, x) = int_0^x cosh(t)**lam dt, its mass M(lam), and the
forward coordinate map from edge lengths to psi values.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import betaln

from . import quadrature
from .errors import (
    InfiniteArgumentWithNonnegativeLambda,
    NonFiniteInput,
    NonPositiveLength,
    NumericalInconsistency,
    UnknownEdge,
)
from .hexagon import HexGeometry, LOG2, r_jacobian
from .triangulation import IdealTriangulation

QUAD_TOL = 1e-12
TAIL_TARGET = 1e-14
MASS_AGREEMENT = 1e-9
CLOSED_FORM_LAMBDAS = (0.0, 1.0, 2.0, -1.0, -2.0)


def cosh_power(lam: float, t):
    """cosh(t)**lam evaluated as exp(lam * log cosh t)."""
    t = np.abs(np.asarray(t, dtype=float))
    return np.exp(lam * (t + np.log1p(np.exp(-2.0 * t)) - LOG2))


def truncation_point(lam: float) -> float:
    """Smallest T with 2**(-lam) * exp(lam*T) / (-lam) below the tail target."""
    if lam >= 0:
        return math.inf
    return (-lam * LOG2 - math.log(-lam) - math.log(TAIL_TARGET)) / (-lam)


def tail_bound(lam: float, x: float) -> float:
    """Upper bound on int_x^inf cosh(t)**lam dt for lam < 0, x >= 0."""
    return math.exp(-lam * LOG2 + lam * x - math.log(-lam))


class _CumulativeTable:
    """Running integral at breakpoints 0, 1, ..., 16, then geometric steps.

    Extended lazily; every F evaluation is a table lookup plus one short
    adaptive integral from the nearest breakpoint below.
    """

    def __init__(self, lam: float):
        self.lam = lam
        self.points = [0.0]
        self.values = [0.0]
        self._integrand = lambda t: cosh_power(lam, t)

    def _next_point(self) -> float:
        p = self.points[-1]
        if p < 16.0:
            return p + 1.0
        width = 0.5 * p
        if self.lam < 0:
            width = min(width, 8.0 / -self.lam)
        return p + max(width, 1.0)

    def extend_to(self, x: float) -> None:
        while self.points[-1] < x:
            a = self.points[-1]
            b = self._next_point()
            self.values.append(self.values[-1] + quadrature.integrate(self._integrand, a, b, tol=QUAD_TOL * 1e-2))
            self.points.append(b)

    def __call__(self, x: float) -> float:
        """Integral from 0 to x >= 0."""
        self.extend_to(x)
        idx = bisect.bisect_right(self.points, x) - 1
        a = self.points[idx]
        return self.values[idx] + quadrature.integrate(self._integrand, a, x, tol=QUAD_TOL * 1e-1)


@lru_cache(maxsize=128)
def _table(lam: float) -> _CumulativeTable:
    return _CumulativeTable(lam)


@lru_cache(maxsize=128)
def mass_quadrature(lam: float) -> float:
    """M(lam) as truncated quadrature plus the analytic tail estimate."""
    lam = float(lam)
    if lam >= 0:
        return math.inf
    T = truncation_point(lam)
    return _table(lam)(T) + tail_bound(lam, T)


def mass_beta(lam: float) -> float:
    """M(lam) = 2**(-lam-2) * B(-lam/2, -lam/2)."""
    lam = float(lam)
    if lam >= 0:
        return math.inf
    return math.exp((-lam - 2.0) * LOG2 + betaln(-lam / 2.0, -lam / 2.0))


@lru_cache(maxsize=128)
def M(lam: float) -> float:
    """Total mass int_0^inf cosh(t)**lam dt; +inf for lam >= 0.

    The quadrature value is returned after it has been checked against the
    Beta-function form.
    """
    lam = float(lam)
    if lam >= 0:
        return math.inf
    q = mass_quadrature(lam)
    b = mass_beta(lam)
    if abs(q - b) > MASS_AGREEMENT * abs(b):
        raise NumericalInconsistency(f"M({lam}): quadrature {q!r} disagrees with Beta form {b!r}")
    return q


def F_quadrature(lam: float, x: float) -> float:
    """F by adaptive quadrature only (no closed forms)."""
    lam = float(lam)
    x = float(x)
    if math.isnan(x):
        raise NonFiniteInput("x is NaN")
    if math.isinf(x) and lam >= 0:
        raise InfiniteArgumentWithNonnegativeLambda(f"F({lam}, {x}) diverges")
    sign = -1.0 if x < 0 else 1.0
    ax = abs(x)
    if lam < 0:
        T = truncation_point(lam)
        if ax > T:
            return sign * (mass_quadrature(lam) - (0.0 if math.isinf(ax) else tail_bound(lam, ax)))
    return sign * _table(lam)(ax)


def _closed_form(lam: float, x: float) -> float:
    if lam == 0.0:
        return x
    if lam == 1.0:
        return math.sinh(x)
    if lam == 2.0:
        return 0.5 * (x + math.sinh(x) * math.cosh(x))
    if lam == -1.0:
        # Gudermannian, written to stay finite for large |x|
        return 2.0 * math.atan(math.tanh(0.5 * x))
    return math.tanh(x)


def F(lam: float, x: float) -> float:
    """int_0^x cosh(t)**lam dt.  Odd and strictly increasing in x.

    ``x`` may be +-inf only when ``lam < 0``.
    """
    lam = float(lam)
    x = float(x)
    if math.isinf(x) and lam >= 0:
        raise InfiniteArgumentWithNonnegativeLambda(f"F({lam}, {x}) diverges")
    if lam in CLOSED_FORM_LAMBDAS:
        if math.isnan(x):
            raise NonFiniteInput("x is NaN")
        return _closed_form(lam, x)
    return F_quadrature(lam, x)


def F_pair(lam: float, u: float, v: float) -> float:
    """F(u) + F(v) without cancellation, i.e. the integral over [-v, u].

    When both endpoints lie on the same side of 0 the two table values nearly
    cancel far out in the tail, so the short integral is taken directly with
    a tolerance scaled to the integrand there.
    """
    lam = float(lam)
    lo, hi = -float(v), float(u)
    if hi < lo:
        return -F_pair(lam, -u, -v)
    if lo <= 0.0 <= hi:
        return F(lam, hi) - F(lam, lo)
    if hi < 0.0:
        lo, hi = -hi, -lo
    if math.isinf(hi):
        if lam >= 0:
            raise InfiniteArgumentWithNonnegativeLambda(f"integral to infinity diverges for lambda={lam}")
        if lo > truncation_point(lam):
            return tail_bound(lam, lo)
    diff = F(lam, hi) - F(lam, lo)
    if diff > 1e-3 * abs(F(lam, hi)):
        return diff
    scale = float(cosh_power(lam, lo)) * min(hi - lo, 1.0)
    return quadrature.integrate(lambda t: cosh_power(lam, t), lo, hi, tol=max(QUAD_TOL * scale, 1e-300))


@dataclass(frozen=True)
class Metric:
    """Length coordinate: one positive length per edge, in edge order."""

    lengths: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.lengths)
        if not all(math.isfinite(v) for v in values):
            raise NonFiniteInput(f"metric has non-finite lengths: {values}")
        if not all(v > 0 for v in values):
            raise NonPositiveLength(f"metric lengths must be positive: {values}")
        object.__setattr__(self, "lengths", values)

    def __len__(self) -> int:
        return len(self.lengths)

    def to_json(self) -> dict:
        return {"lengths": list(self.lengths)}

    @classmethod
    def from_json(cls, data: dict) -> "Metric":
        return cls(tuple(data["lengths"]))


@dataclass(frozen=True)
class PsiVector:
    """One real value per edge: psi values or a target point."""

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in values):
            raise NonFiniteInput(f"psi vector has non-finite entries: {values}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def to_json(self) -> dict:
        return {"psi": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "PsiVector":
        return cls(tuple(data["psi"]))


def load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(data: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=None)
        fh.write("\n")


def _check_metric(complex_: IdealTriangulation, metric: Metric) -> None:
    if len(metric) != complex_.edge_count:
        raise ValueError(f"metric has {len(metric)} lengths, complex has {complex_.edge_count} edges")


def hexagon_geometries(complex_: IdealTriangulation, metric: Metric) -> list[HexGeometry]:
    _check_metric(complex_, metric)
    return [
        HexGeometry.from_lengths([metric.lengths[e] for e in complex_.slot_edges[h]])
        for h in range(complex_.hexagon_count)
    ]


def facing_r(complex_: IdealTriangulation, geoms: Sequence[HexGeometry], e: int) -> tuple[float, float]:
    """r-coordinates of the two A-arcs facing edge ``e``, one per occurrence."""
    (h0, s0), (h1, s1) = complex_.edges[e]
    return geoms[h0].r[s0], geoms[h1].r[s1]


def psi_edge(complex_: IdealTriangulation, metric: Metric, lam: float, e: int) -> float:
    if not 0 <= e < complex_.edge_count:
        raise UnknownEdge(f"edge {e} not in complex with {complex_.edge_count} edges")
    geoms = hexagon_geometries(complex_, metric)
    r0, r1 = facing_r(complex_, geoms, e)
    return F_pair(lam, r0, r1)


def forward_map(complex_: IdealTriangulation, metric: Metric, lam: float) -> PsiVector:
    geoms = hexagon_geometries(complex_, metric)
    values = []
    for e in range(complex_.edge_count):
        r0, r1 = facing_r(complex_, geoms, e)
        values.append(F_pair(lam, r0, r1))
    return PsiVector(tuple(values))


def psi_jacobian(complex_: IdealTriangulation, metric: Metric, lam: float) -> np.ndarray:
    """Matrix d psi(e) / d l(e'), assembled hexagon by hexagon.

    Each occurrence ``(h, s)`` of ``e`` contributes
    ``cosh(r_s)**lam * d r_s / d l`` through the slots of ``h``.
    """
    _check_metric(complex_, metric)
    m = complex_.edge_count
    jac = np.zeros((m, m))
    for h in range(complex_.hexagon_count):
        slots = complex_.slot_edges[h]
        l = [metric.lengths[e] for e in slots]
        geom = HexGeometry.from_lengths(l)
        dr = r_jacobian(l)
        for s, e in enumerate(slots):
            weight = float(cosh_power(lam, geom.r[s]))
            for t, other in enumerate(slots):
                jac[e, other] += weight * dr[s, t]
    return jac
