"""Ideal triangulations built from colored hexagons glued along red slots.

A complex is given by ``hexagon_count`` hexagons, each with three red slots
``0, 1, 2`` in cyclic order, and a perfect matching on the ``3 * h`` slots.
Edge ``e_i`` is the i-th gluing.  The A-arc between slots ``i`` and ``j`` of a
hexagon is the one opposite slot ``k``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    Disconnected,
    DuplicateSlot,
    GluingError,
    InvalidEdgePath,
    MalformedInput,
    OddHexagonCount,
    UnmatchedSlot,
)

Slot = tuple[int, int]  # (hexagon index, red-slot index)

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class GluingSpec:
    hexagon_count: int
    gluings: tuple[tuple[Slot, Slot], ...]

    @classmethod
    def from_json(cls, data: dict) -> "GluingSpec":
        try:
            h = data["hexagons"]
            raw = data["gluings"]
            gluings = tuple(
                ((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in raw
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"malformed triangulation data: {exc!r}") from exc
        if not isinstance(h, int) or isinstance(h, bool):
            raise MalformedInput("'hexagons' must be an integer")
        return cls(h, gluings)

    def to_json(self) -> dict:
        return {
            "hexagons": self.hexagon_count,
            "gluings": [[list(a), list(b)] for a, b in self.gluings],
        }


@dataclass(frozen=True)
class IdealTriangulation:
    """Validated complex; build it with :func:`build_complex`."""

    hexagon_count: int
    edges: tuple[tuple[Slot, Slot], ...]
    slot_edges: tuple[tuple[int, int, int], ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def euler_characteristic(self) -> int:
        return -self.hexagon_count // 2

    def is_self_glued(self, e: int) -> bool:
        (h0, _), (h1, _) = self.edges[e]
        return h0 == h1

    def other_end(self, e: int, hexagon: int) -> int:
        (h0, _), (h1, _) = self.edges[e]
        return h1 if h0 == hexagon else h0

    def hexagons_of(self, e: int) -> tuple[int, int]:
        (h0, _), (h1, _) = self.edges[e]
        return h0, h1

    def spec(self) -> GluingSpec:
        return GluingSpec(self.hexagon_count, self.edges)

    def to_json(self) -> dict:
        return self.spec().to_json()


def build_complex(spec: GluingSpec) -> IdealTriangulation:
    h = spec.hexagon_count
    if h < 2 or h % 2:
        raise OddHexagonCount(f"hexagon count must be even and >= 2, got {h}")

    slot_edges = [[-1, -1, -1] for _ in range(h)]
    for e, pair in enumerate(spec.gluings):
        if len(pair) != 2:
            raise GluingError(f"gluing {e} does not pair two slots")
        for hexagon, slot in pair:
            if not (0 <= hexagon < h and 0 <= slot < 3):
                raise GluingError(f"gluing {e} names nonexistent slot ({hexagon}, {slot})")
            if slot_edges[hexagon][slot] != -1:
                raise DuplicateSlot(f"slot ({hexagon}, {slot}) is glued more than once")
            slot_edges[hexagon][slot] = e
        if pair[0] == pair[1]:
            raise DuplicateSlot(f"gluing {e} glues slot {pair[0]} to itself")

    missing = [(i, s) for i in range(h) for s in range(3) if slot_edges[i][s] == -1]
    if missing:
        raise UnmatchedSlot(f"unmatched slots: {missing}")

    complex_ = IdealTriangulation(
        hexagon_count=h,
        edges=tuple((tuple(a), tuple(b)) for a, b in spec.gluings),
        slot_edges=tuple(tuple(row) for row in slot_edges),
    )
    assert complex_.edge_count * 2 == 3 * h
    assert complex_.euler_characteristic < 0

    seen = {0}
    queue = deque([0])
    while queue:
        cur = queue.popleft()
        for e in complex_.slot_edges[cur]:
            nxt = complex_.other_end(e, cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if len(seen) != h:
        raise Disconnected(f"dual graph is disconnected ({len(seen)} of {h} hexagons reachable)")
    return complex_


def load_complex(path: str | Path) -> IdealTriangulation:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return build_complex(GluingSpec.from_json(data))


def dump_complex(complex_: IdealTriangulation, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(complex_.to_json(), fh)
        fh.write("\n")


def two_hexagon_complex() -> IdealTriangulation:
    """Two hexagons glued slot-to-slot: a three-holed sphere."""
    return build_complex(GluingSpec(2, tuple(((0, i), (1, i)) for i in range(3))))


def ring_complex(h: int) -> IdealTriangulation:
    """``h`` hexagons in a ring (slot 1 to the next slot 0) with chords ``i <-> i + h/2`` on slot 2."""
    if h < 4 or h % 2:
        raise OddHexagonCount(f"ring complex needs an even h >= 4, got {h}")
    gluings = [((i, 1), ((i + 1) % h, 0)) for i in range(h)]
    gluings += [((i, 2), (i + h // 2, 2)) for i in range(h // 2)]
    return build_complex(GluingSpec(h, tuple(gluings)))


@dataclass(frozen=True)
class EdgePath:
    """Alternating sequence ``(H0, e1, H1, ..., en, Hn)``."""

    hexagons: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def is_cycle(self) -> bool:
        return self.hexagons[0] == self.hexagons[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def multiplicities(self, edge_count: int) -> tuple[int, ...]:
        counts = [0] * edge_count
        for e in self.edges:
            counts[e] += 1
        return tuple(counts)

    def is_backtracking(self) -> bool:
        """True if some edge is immediately retraced (cyclically, for cycles)."""
        pairs = list(zip(self.edges, self.edges[1:]))
        if self.is_cycle and len(self.edges) > 1:
            pairs.append((self.edges[-1], self.edges[0]))
        return any(a == b for a, b in pairs)

    def is_fundamental(self) -> bool:
        return all(self.edges.count(e) <= 2 for e in set(self.edges))

    def validate(self, complex_: IdealTriangulation) -> None:
        n = len(self.edges)
        if n < 1 or len(self.hexagons) != n + 1:
            raise InvalidEdgePath("an edge path needs n >= 1 edges and n + 1 hexagons")
        for i, e in enumerate(self.edges):
            if not 0 <= e < complex_.edge_count:
                raise InvalidEdgePath(f"unknown edge {e}")
            a, b = self.hexagons[i], self.hexagons[i + 1]
            if a == b:
                raise InvalidEdgePath(f"step {i + 1} stays in hexagon {a}")
            if {a, b} != set(complex_.hexagons_of(e)):
                raise InvalidEdgePath(f"edge e{e} does not join H{a} and H{b}")
        if not self.is_fundamental():
            raise InvalidEdgePath("some edge occurs more than twice")

    def label(self) -> str:
        parts = [f"H{self.hexagons[0]}"]
        for e, hx in zip(self.edges, self.hexagons[1:]):
            parts += [f"e{e}", f"H{hx}"]
        return " ".join(parts)

    @classmethod
    def from_label(cls, text: str) -> "EdgePath":
        tokens = text.split()
        if len(tokens) < 3 or len(tokens) % 2 == 0:
            raise InvalidEdgePath(f"bad path label {text!r}")
        try:
            hexagons = tuple(int(t[1:]) for t in tokens[0::2] if t[0] == "H")
            edges = tuple(int(t[1:]) for t in tokens[1::2] if t[0] == "e")
        except ValueError as exc:
            raise InvalidEdgePath(f"bad path label {text!r}") from exc
        if len(hexagons) != len(edges) + 1:
            raise InvalidEdgePath(f"bad path label {text!r}")
        return cls(hexagons, edges)


@dataclass(frozen=True)
class Enumeration:
    """Fundamental paths or cycles, one witness per multiplicity vector."""

    items: tuple[EdgePath, ...]
    vectors: tuple[tuple[int, ...], ...]
    truncated: bool

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def _traversable_steps(complex_: IdealTriangulation) -> list[list[tuple[int, int]]]:
    steps = []
    for hexagon in range(complex_.hexagon_count):
        row = []
        for e in complex_.slot_edges[hexagon]:
            if not complex_.is_self_glued(e):
                row.append((e, complex_.other_end(e, hexagon)))
        steps.append(row)
    return steps


def _explore(complex_, seeds, frontier, cap: int, backtracking: bool):
    """Breadth-first search over states ``(hexagon, multiplicity code, last edge)``.

    The code packs the per-edge multiplicity in base 3.  ``seeds`` maps
    initial states to their parent links; only ``frontier`` states are
    expanded.  Returns the parent map
    (state -> (previous state, edge)) in discovery order and a truncation flag.
    """
    powers = [3**e for e in range(complex_.edge_count)]
    steps = _traversable_steps(complex_)
    parent = dict(seeds)
    queue = deque(frontier)
    truncated = len(parent) > cap
    while queue and not truncated:
        state = queue.popleft()
        hexagon, code, last = state
        for e, nxt in steps[hexagon]:
            if (code // powers[e]) % 3 == 2 or (not backtracking and e == last):
                continue
            new = (nxt, code + powers[e], -1 if backtracking else e)
            if new in parent:
                continue
            if len(parent) >= cap:
                truncated = True
                break
            parent[new] = (state, e)
            queue.append(new)
    return parent, truncated


def _witness(parent, state) -> EdgePath:
    hexagons = [state[0]]
    edges = []
    link = parent[state]
    while link is not None:
        state, e = link
        hexagons.append(state[0])
        edges.append(e)
        link = parent[state]
    return EdgePath(tuple(reversed(hexagons)), tuple(reversed(edges)))


def _decode(code: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        code, digit = divmod(code, 3)
        out.append(digit)
    return tuple(out)


def canonical_key(vec: tuple[int, ...]):
    """Sort key: total length first, then heavier weight on lower edge indices first."""
    return (sum(vec), tuple(-c for c in vec))


def _finish(found: dict[tuple[int, ...], EdgePath], truncated: bool) -> Enumeration:
    keys = sorted(found, key=canonical_key)
    return Enumeration(tuple(found[k] for k in keys), tuple(keys), truncated)


@lru_cache(maxsize=64)
def enumerate_fundamental_paths(
    complex_: IdealTriangulation, cap: int = DEFAULT_CAP, backtracking: bool = True
) -> Enumeration:
    """All fundamental edge paths, deduplicated by edge-multiplicity vector.

    Self-glued edges are never traversed.  Paths that close up (``H0 == Hn``)
    are included.  With ``backtracking=False`` consecutive edges must differ,
    which is the class the polytope inequalities are valid for.
    """
    m = complex_.edge_count
    seeds = {(h, 0, -1): None for h in range(complex_.hexagon_count)}
    parent, truncated = _explore(complex_, seeds, list(seeds), cap, backtracking)
    found: dict[tuple[int, ...], EdgePath] = {}
    for state, link in parent.items():
        if link is None:
            continue
        vec = _decode(state[1], m)
        if vec not in found:
            found[vec] = _witness(parent, state)
    return _finish(found, truncated)


@lru_cache(maxsize=64)
def enumerate_fundamental_cycles(
    complex_: IdealTriangulation, cap: int = DEFAULT_CAP, backtracking: bool = True
) -> Enumeration:
    """All fundamental edge cycles, deduplicated by edge-multiplicity vector.

    With ``backtracking=False`` consecutive edges must differ cyclically,
    including the last edge against the first.  ``cap`` bounds the number of
    search states per search.
    """
    m = complex_.edge_count
    steps = _traversable_steps(complex_)
    found: dict[tuple[int, ...], EdgePath] = {}
    truncated = False
    for start in range(complex_.hexagon_count):
        root = (start, 0, -1)
        if backtracking:
            searches = [(None, {root: None}, [root])]
        else:
            searches = [
                (e, {root: None, (nxt, 3**e, e): (root, e)}, [(nxt, 3**e, e)])
                for e, nxt in steps[start]
            ]
        for first, seeds, frontier in searches:
            parent, hit_cap = _explore(complex_, seeds, frontier, cap, backtracking)
            truncated |= hit_cap
            for state, link in parent.items():
                if link is None or state[0] != start or state[1] == 0:
                    continue
                if first is not None and state[2] == first:
                    continue
                vec = _decode(state[1], m)
                if vec not in found:
                    found[vec] = _witness(parent, state)
    return _finish(found, truncated)


def multiplicity_vector(path: EdgePath, complex_: IdealTriangulation) -> tuple[int, ...]:
    return path.multiplicities(complex_.edge_count)


def as_spec(h: int, gluings: Sequence) -> GluingSpec:
    return GluingSpec(h, tuple((tuple(a), tuple(b)) for a, b in gluings))
