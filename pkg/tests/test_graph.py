from __future__ import annotations

import pytest
from hypothesis import given, settings

from dtriangles.graph import (
    ArcSlot,
    DirectedMultigraph,
    GraphError,
    GraphParseError,
    Triangle,
    add_arc,
    delete_vertex,
    enumerate_triangles,
    parse_graph,
    remove_slots,
    serialize_graph,
    slot_back_map,
    strip_loops_and_normalize,
    triangles_through,
)

from .oracles import graph, multigraphs, slot_triangles, t5, triangle_count


def test_add_arc_sets_and_accumulates_multiplicity():
    g = add_arc(DirectedMultigraph(3), 0, 1)
    assert g.mult(0, 1) == 1
    g = add_arc(g, 0, 1)
    assert g.mult(0, 1) == 2
    assert g.mult(1, 0) == 0


def test_add_arc_is_persistent():
    g = DirectedMultigraph(3)
    add_arc(g, 0, 1)
    assert g.mult(0, 1) == 0


def test_add_arc_rejects_loop_and_range():
    g = DirectedMultigraph(3)
    with pytest.raises(GraphError, match="0->0"):
        add_arc(g, 0, 0)
    with pytest.raises(GraphError):
        add_arc(g, 0, 3)


def test_digons_allowed():
    g = graph(2, [(0, 1), (1, 0)])
    assert g.mult(0, 1) == g.mult(1, 0) == 1
    assert enumerate_triangles(g) == []


def test_remove_one_parallel_slot():
    g = graph(3, [(0, 1, 2), (1, 2), (2, 0)])
    assert len(enumerate_triangles(g)) == 2
    h = remove_slots(g, {ArcSlot(0, 1, 1)})
    assert h.mult(0, 1) == 1
    assert len(enumerate_triangles(h)) == 1


def test_remove_whole_triangle():
    g = graph(3, [(0, 1), (1, 2), (2, 0)])
    (tri,) = enumerate_triangles(g)
    assert enumerate_triangles(remove_slots(g, tri.slots)) == []


def test_remove_slot_twice_fails():
    g = graph(3, [(0, 1), (1, 2), (2, 0)])
    h = remove_slots(g, {ArcSlot(0, 1, 0)})
    with pytest.raises(GraphError, match="0 1 0"):
        remove_slots(h, {ArcSlot(0, 1, 0)})


def test_slot_back_map_keeps_lower_copies_first():
    g = graph(2, [(0, 1, 3)])
    back = slot_back_map(g, {ArcSlot(0, 1, 0)})
    assert back == {ArcSlot(0, 1, 0): ArcSlot(0, 1, 1), ArcSlot(0, 1, 1): ArcSlot(0, 1, 2)}


def test_delete_vertex_examples():
    g, m = delete_vertex(graph(3, [(0, 1), (1, 2), (2, 0)]), 2)
    assert g.n == 2 and g.num_slots() == 1 and enumerate_triangles(g) == []
    assert m == {0: 0, 1: 1}

    g, m = delete_vertex(t5(), 0)
    assert g.n == 4 and g.num_slots() == 6
    assert m == {1: 0, 2: 1, 3: 2, 4: 3}

    g, m = delete_vertex(DirectedMultigraph(1), 0)
    assert g.n == 0 and m == {}

    with pytest.raises(GraphError):
        delete_vertex(DirectedMultigraph(1), 1)


def test_t5_triangles():
    tris = enumerate_triangles(t5())
    assert len(tris) == 5
    # brute force over all ten vertex triples
    assert len(slot_triangles(t5())) == 5


def test_triangle_count_product_of_multiplicities():
    assert enumerate_triangles(graph(2, [(0, 1), (1, 0)])) == []
    assert len(enumerate_triangles(graph(3, [(0, 1, 2), (1, 2), (2, 0)]))) == 2


def test_triangles_through():
    single = graph(3, [(0, 1), (1, 2), (2, 0)])
    assert triangles_through(single, 0) == enumerate_triangles(single)

    through0 = {t.vertices for t in triangles_through(t5(), 0)}
    assert through0 == {(0, 1, 3), (0, 2, 4), (0, 2, 3)}

    far = graph(5, [(1, 2), (2, 3), (3, 1)])
    assert triangles_through(far, 0) == []


def test_triangle_canonical_rotation():
    t = Triangle.from_slots(ArcSlot(2, 0, 0), ArcSlot(0, 1, 0), ArcSlot(1, 2, 0))
    assert t.vertices == (0, 1, 2)
    assert t.arc_not_at(0) == ArcSlot(1, 2, 0)
    with pytest.raises(GraphError):
        Triangle.from_slots(ArcSlot(0, 1, 0), ArcSlot(1, 2, 0), ArcSlot(0, 2, 0))


@settings(max_examples=200, deadline=None)
@given(multigraphs(max_n=8))
def test_triangle_count_identity(g):
    tris = enumerate_triangles(g)
    assert len(tris) == triangle_count(g)
    assert len(set(tris)) == len(tris)
    assert tris == sorted(tris)
    assert {frozenset(t.slots) for t in tris} == set(slot_triangles(g))
    assert enumerate_triangles(g) == tris


@settings(max_examples=100, deadline=None)
@given(multigraphs(max_n=7, min_n=1))
def test_delete_vertex_matches_filtering(g):
    for v in range(g.n):
        h, m = delete_vertex(g, v)
        expected = sorted(
            Triangle.from_slots(*(ArcSlot(m[s.tail], m[s.head], s.copy) for s in t.slots))
            for t in enumerate_triangles(g)
            if v not in t.vertices
        )
        assert enumerate_triangles(h) == expected


@settings(max_examples=100, deadline=None)
@given(multigraphs(max_n=7))
def test_serialize_round_trip(g):
    assert parse_graph(serialize_graph(g)) == (g, 0)


def test_parse_loops_are_dropped():
    g, loops = parse_graph("dmg 4\n3 3\n0 1\n")
    assert loops == 1
    assert g.mult(3, 3) == 0 and g.num_slots() == 1


def test_parse_aggregates_and_comments():
    g, _ = parse_graph("# header comment\ndmg 3\n0 1\n0 1  # again\n1 2 3\n")
    assert g.mult(0, 1) == 2 and g.mult(1, 2) == 3


def test_parse_empty():
    assert parse_graph("") == (DirectedMultigraph(0), 0)


def test_parse_errors_carry_line_number():
    with pytest.raises(GraphParseError) as info:
        parse_graph("dmg 3\n0 1\n0 x\n")
    assert info.value.lineno == 3
    with pytest.raises(GraphParseError) as info:
        parse_graph("dmg 3\n0 5\n")
    assert info.value.lineno == 2


def test_strip_loops_and_normalize():
    g, loops = strip_loops_and_normalize([(0, 1), (0, 1), (2, 2)])
    assert loops == 1
    assert g.n == 3 and g.mult(0, 1) == 2
