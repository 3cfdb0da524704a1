"""Inequality description of the image polytope, membership, and text export.

For ``lam < 0`` the system has three families:

* ``edge_bound``: ``z(e) < 2 M(lam)`` for every edge,
* ``path``: ``sum z(e_i) > -2 M(lam)`` over each fundamental edge path,
* ``cycle``: ``sum z(e_i) > 0`` over each fundamental edge cycle.

For ``lam >= 0`` only the cycle family remains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, HRepParseError
from .psi import M, PsiVector
from .triangulation import (
    DEFAULT_CAP,
    canonical_key,
    EdgePath,
    IdealTriangulation,
    enumerate_fundamental_cycles,
    enumerate_fundamental_paths,
)

ORIGINS = ("edge_bound", "path", "cycle")
INSIDE, BOUNDARY, OUTSIDE, INCOMPLETE = "inside", "boundary", "outside", "incomplete_certificate"
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class LinearInequality:
    coefficients: tuple[int, ...]
    sense: str  # ">" or "<"
    rhs: float
    origin: str
    witness: EdgePath | int

    def margin(self, z: Sequence[float]) -> float:
        """Signed slack, positive when the strict inequality holds."""
        z = getattr(z, "values", z)
        lhs = math.fsum(c * v for c, v in zip(self.coefficients, z) if c)
        return lhs - self.rhs if self.sense == ">" else self.rhs - lhs

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coefficients))

    def witness_label(self) -> str:
        if isinstance(self.witness, EdgePath):
            return self.witness.label()
        return f"e{self.witness}"

    def key(self):
        return (self.coefficients, self.sense, self.rhs)


@dataclass(frozen=True)
class PolytopeSystem:
    lam: float | None
    edge_count: int
    inequalities: tuple[LinearInequality, ...]
    truncated: bool = False
    _matrix: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        a = np.array([q.coefficients for q in self.inequalities], dtype=float).reshape(-1, self.edge_count)
        sign = np.array([1.0 if q.sense == ">" else -1.0 for q in self.inequalities])
        object.__setattr__(self, "_matrix", (a, np.array([q.rhs for q in self.inequalities]), sign))

    def __len__(self) -> int:
        return len(self.inequalities)

    def by_origin(self, origin: str) -> list[LinearInequality]:
        return [q for q in self.inequalities if q.origin == origin]

    def margins(self, z, normalized: bool = True) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.edge_count,):
            raise DimensionMismatch(f"point has shape {z.shape}, system expects ({self.edge_count},)")
        a, rhs, sign = self._matrix
        out = sign * (a @ z - rhs)
        if normalized:
            out = out / np.linalg.norm(a, axis=1)
        return out


def _ordered(inequalities: list[LinearInequality]) -> tuple[LinearInequality, ...]:
    seen = set()
    unique = []
    for q in inequalities:
        if q.key() not in seen:
            seen.add(q.key())
            unique.append(q)
    unique.sort(key=lambda q: (ORIGINS.index(q.origin), canonical_key(q.coefficients)))
    return tuple(unique)


def _drop_scaled_duplicates(inequalities: list[LinearInequality]) -> list[LinearInequality]:
    """Remove ``k * (c, rhs)`` for integer k > 1 when ``(c, rhs)`` is present."""
    index = {q.key() for q in inequalities}
    kept = []
    for q in inequalities:
        redundant = False
        for k in (2, 3, 4):
            if all(c % k == 0 for c in q.coefficients):
                smaller = (tuple(c // k for c in q.coefficients), q.sense, q.rhs / k)
                if smaller in index:
                    redundant = True
                    break
        if not redundant:
            kept.append(q)
    return kept


def build_polytope(
    complex_: IdealTriangulation,
    lam: float,
    cap: int = DEFAULT_CAP,
    minimize: bool = False,
) -> PolytopeSystem:
    lam = float(lam)
    m = complex_.edge_count
    cycles = enumerate_fundamental_cycles(complex_, cap, backtracking=False)
    inequalities: list[LinearInequality] = []
    truncated = cycles.truncated
    mass = M(lam)
    if math.isfinite(mass):
        for e in range(m):
            coeffs = tuple(1 if i == e else 0 for i in range(m))
            inequalities.append(LinearInequality(coeffs, "<", 2.0 * mass, "edge_bound", e))
        paths = enumerate_fundamental_paths(complex_, cap, backtracking=False)
        truncated |= paths.truncated
        for vec, path in zip(paths.vectors, paths.items):
            inequalities.append(LinearInequality(vec, ">", -2.0 * mass, "path", path))
    for vec, cycle in zip(cycles.vectors, cycles.items):
        inequalities.append(LinearInequality(vec, ">", 0.0, "cycle", cycle))
    if minimize:
        inequalities = _drop_scaled_duplicates(inequalities)
    return PolytopeSystem(lam, m, _ordered(inequalities), truncated)


@dataclass(frozen=True)
class Membership:
    verdict: str
    violated: tuple[tuple[LinearInequality, float], ...]
    active: tuple[tuple[LinearInequality, float], ...]
    min_margin: float

    @property
    def exit_code(self) -> int:
        return {INSIDE: 0, OUTSIDE: 2, BOUNDARY: 3, INCOMPLETE: 4}[self.verdict]


def check_membership(system: PolytopeSystem, z, tol: float = DEFAULT_TOL) -> Membership:
    """Classify ``z`` against the open polytope.

    Margins are distances to the hyperplanes (slack divided by the
    coefficient norm).  ``inside`` needs every margin above ``tol``; a margin
    below ``-tol`` means ``outside``; anything else is ``boundary``.  A
    truncated system cannot certify ``inside`` or ``boundary``.
    """
    if isinstance(z, PsiVector):
        z = z.values
    margins = system.margins(z)
    violated = tuple((system.inequalities[i], float(margins[i])) for i in np.flatnonzero(margins < -tol))
    active = tuple(
        (system.inequalities[i], float(margins[i])) for i in np.flatnonzero(np.abs(margins) <= tol)
    )
    if violated:
        verdict = OUTSIDE
    elif active:
        verdict = BOUNDARY
    else:
        verdict = INSIDE
    if system.truncated and verdict != OUTSIDE:
        verdict = INCOMPLETE
    min_margin = float(margins.min()) if len(margins) else math.inf
    return Membership(verdict, violated, active, min_margin)


def _fmt(x: float) -> str:
    return "%#.12g" % x


def export_hrep(system: PolytopeSystem) -> str:
    """One line per inequality: ``c0 ... c_{m-1} <sense> <rhs> # <origin> <witness>``."""
    lines = []
    if system.truncated:
        lines.append("# truncated")
    for q in system.inequalities:
        coeffs = " ".join(str(c) for c in q.coefficients)
        lines.append(f"{coeffs} {q.sense} {_fmt(q.rhs)} # {q.origin} {q.witness_label()}")
    return "\n".join(lines) + "\n"


def parse_hrep(text: str, lam: float | None = None) -> PolytopeSystem:
    inequalities = []
    truncated = False
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            truncated |= stripped == "# truncated"
            continue
        body, _, comment = stripped.partition("#")
        tokens = body.split()
        meta = comment.split(None, 1)
        if len(tokens) < 3 or len(meta) != 2 or meta[0] not in ORIGINS:
            raise HRepParseError(f"line {lineno}: cannot parse {line!r}")
        try:
            coeffs = tuple(int(t) for t in tokens[:-2])
            rhs = float(tokens[-1])
        except ValueError as exc:
            raise HRepParseError(f"line {lineno}: {exc}") from exc
        sense = tokens[-2]
        if sense not in ("<", ">"):
            raise HRepParseError(f"line {lineno}: bad sense {sense!r}")
        if width is None:
            width = len(coeffs)
        elif width != len(coeffs):
            raise HRepParseError(f"line {lineno}: expected {width} coefficients")
        origin, label = meta
        if origin == "edge_bound":
            witness = int(label.strip().lstrip("e"))
        else:
            witness = EdgePath.from_label(label)
        inequalities.append(LinearInequality(coeffs, sense, rhs, origin, witness))
    return PolytopeSystem(lam, width or 0, tuple(inequalities), truncated)
