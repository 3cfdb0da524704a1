import json

import pytest

from psicoord.errors import Disconnected, DuplicateSlot, InvalidEdgePath, MalformedInput, OddHexagonCount, UnmatchedSlot
from psicoord.triangulation import (
    EdgePath,
    GluingSpec,
    build_complex,
    dump_complex,
    enumerate_fundamental_cycles,
    enumerate_fundamental_paths,
    load_complex,
    ring_complex,
)

from oracles import brute_force_walks


def test_two_hexagon_complex(theta_complex):
    assert theta_complex.edge_count == 3
    assert theta_complex.euler_characteristic == -1
    assert theta_complex.slot_edges == ((0, 1, 2), (0, 1, 2))


@pytest.mark.parametrize("h", [4, 6, 8])
def test_edge_count(h):
    c = ring_complex(h)
    assert c.edge_count == 3 * h // 2
    assert c.euler_characteristic == -h // 2


def test_unmatched_slot():
    with pytest.raises(UnmatchedSlot):
        build_complex(GluingSpec(2, (((0, 0), (1, 0)), ((0, 1), (1, 1)))))


def test_duplicate_slot():
    with pytest.raises(DuplicateSlot):
        build_complex(GluingSpec(2, (((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 2), (1, 2)))))


def test_odd_hexagon_count():
    with pytest.raises(OddHexagonCount):
        build_complex(GluingSpec(3, ()))


def test_disconnected():
    block = [((0, i), (1, i)) for i in range(3)] + [((2, i), (3, i)) for i in range(3)]
    with pytest.raises(Disconnected):
        build_complex(GluingSpec(4, tuple(block)))


def test_edges_numbered_in_gluing_order():
    gluings = (((0, 2), (1, 0)), ((0, 0), (1, 2)), ((0, 1), (1, 1)))
    c = build_complex(GluingSpec(2, gluings))
    assert c.slot_edges == ((1, 2, 0), (0, 2, 1))


def test_file_round_trip(tmp_path, ring4):
    path = tmp_path / "c.json"
    dump_complex(ring4, path)
    assert load_complex(path) == ring4
    data = json.loads(path.read_text())
    assert data["hexagons"] == 4 and len(data["gluings"]) == 6


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"hexagons": 2, "gluings": [[0, 1]]}')
    with pytest.raises(MalformedInput):
        load_complex(path)


def test_two_hexagon_paths_match_brute_force(theta_complex):
    paths = enumerate_fundamental_paths(theta_complex)
    assert len(paths) == 26
    assert set(paths.vectors) == brute_force_walks(2, theta_complex.edges, cycles=False)
    assert not paths.truncated


def test_two_hexagon_cycles_match_brute_force(theta_complex):
    cycles = enumerate_fundamental_cycles(theta_complex)
    assert len(cycles) == 13
    assert set(cycles.vectors) == brute_force_walks(2, theta_complex.edges, cycles=True)
    by_type = {}
    for v in cycles.vectors:
        by_type.setdefault(tuple(sorted(v, reverse=True)), []).append(v)
    assert {k: len(v) for k, v in by_type.items()} == {
        (2, 0, 0): 3, (1, 1, 0): 3, (2, 2, 0): 3, (2, 1, 1): 3, (2, 2, 2): 1,
    }


def test_non_backtracking_counts(theta_complex):
    # (2,0,0)-type vectors need an immediate retrace
    paths = enumerate_fundamental_paths(theta_complex, backtracking=False)
    cycles = enumerate_fundamental_cycles(theta_complex, backtracking=False)
    assert (len(paths), len(cycles)) == (23, 10)
    assert set(paths.vectors) == brute_force_walks(2, theta_complex.edges, False, backtracking=False)
    assert set(cycles.vectors) == brute_force_walks(2, theta_complex.edges, True, backtracking=False)


@pytest.mark.parametrize("cycles", [False, True])
@pytest.mark.parametrize("backtracking", [True, False])
def test_ring4_matches_brute_force(ring4, cycles, backtracking):
    enumerate_ = enumerate_fundamental_cycles if cycles else enumerate_fundamental_paths
    got = enumerate_(ring4, backtracking=backtracking)
    assert set(got.vectors) == brute_force_walks(4, ring4.edges, cycles, backtracking)


def test_ring6_cycles_match_brute_force(ring6):
    got = enumerate_fundamental_cycles(ring6, backtracking=False)
    assert set(got.vectors) == brute_force_walks(6, ring6.edges, True, backtracking=False)


def test_single_edge_paths_present(ring4):
    vectors = set(enumerate_fundamental_paths(ring4).vectors)
    for e in range(ring4.edge_count):
        assert tuple(1 if i == e else 0 for i in range(ring4.edge_count)) in vectors


def test_witnesses_revalidate(ring4):
    for backtracking in (True, False):
        paths = enumerate_fundamental_paths(ring4, backtracking=backtracking)
        cycles = enumerate_fundamental_cycles(ring4, backtracking=backtracking)
        for vec, path in zip(paths.vectors, paths.items):
            path.validate(ring4)
            assert path.multiplicities(ring4.edge_count) == vec
        for vec, cycle in zip(cycles.vectors, cycles.items):
            cycle.validate(ring4)
            assert cycle.is_cycle
            assert cycle.multiplicities(ring4.edge_count) == vec
            if not backtracking:
                assert not cycle.is_backtracking()


def test_ordering_by_length_then_lexicographic(ring4):
    vectors = enumerate_fundamental_paths(ring4).vectors
    lengths = [sum(v) for v in vectors]
    assert lengths == sorted(lengths)


def test_enumeration_deterministic(ring4):
    a = enumerate_fundamental_paths.__wrapped__(ring4)
    b = enumerate_fundamental_paths.__wrapped__(ring4)
    assert a == b


def test_self_glued_edges_never_traversed(self_glued_complex):
    paths = enumerate_fundamental_paths(self_glued_complex)
    assert set(paths.vectors) == {(0, 1, 0), (0, 2, 0)}
    assert set(paths.vectors) == brute_force_walks(2, self_glued_complex.edges, False)
    assert len(enumerate_fundamental_cycles(self_glued_complex, backtracking=False)) == 0
    assert not enumerate_fundamental_cycles(self_glued_complex, backtracking=False).truncated


def test_n2_cycle_is_fundamental(theta_complex):
    cycle = EdgePath((0, 1, 0), (1, 1))
    cycle.validate(theta_complex)
    assert cycle.is_cycle and cycle.is_backtracking()


def test_truncation_flag(ring6):
    result = enumerate_fundamental_paths(ring6, cap=100)
    assert result.truncated
    assert len(result) > 0


def test_invalid_paths_rejected(theta_complex):
    with pytest.raises(InvalidEdgePath):
        EdgePath((0, 0), (1,)).validate(theta_complex)
    with pytest.raises(InvalidEdgePath):
        EdgePath((0, 1, 0, 1), (1, 1, 1)).validate(theta_complex)


def test_label_round_trip():
    path = EdgePath((0, 1, 0), (2, 1))
    assert EdgePath.from_label(path.label()) == path
