import math
import random

import pytest
from hypothesis import given, strategies as st

from pantslab import families
from pantslab.canonical import canonicalize
from pantslab.errors import MalformedMoveError, OverlappingBatchError, ReplayError
from pantslab.moves import (Move, MoveBatch, MoveSchedule, all_moves, apply, apply_batch,
                            enumerate_batches, moves_on_edge, neighbors, schedule_cost, support)
from pantslab.pants_graph import validate


def random_graph(g, n, seed):
    if 2 * g - 2 + n < 1:
        return families.theta()
    return families.random_cubic(g, seed, punctures=n)


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 10 ** 6))
def test_moves_preserve_type(g, n, seed):
    graph = random_graph(g, n, seed)
    rep = validate(graph)
    for m in all_moves(graph, all_choices=True):
        out = validate(apply(graph, m))
        assert out.ok
        assert (out.genus, out.punctures) == (rep.genus, rep.punctures)


@given(st.integers(1, 5), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_move_is_an_involution(g, n, seed):
    graph = random_graph(g, n, seed)
    for m in all_moves(graph, all_choices=True):
        assert apply(apply(graph, m), m) == graph


def test_two_outcomes_per_edge():
    graph = families.linear_tree(6)
    for e in graph.movable_edges:
        outs = {canonicalize(apply(graph, m), leaf_labels=True)
                for m in moves_on_edge(graph, e, all_choices=True)}
        assert len(outs) == 2
        assert len(moves_on_edge(graph, e)) == 2


def test_loops_and_leaf_edges_are_not_movable():
    graph = families.dumbbell()
    loop = next(e for e in range(len(graph.edges)) if graph.is_loop(e))
    with pytest.raises(MalformedMoveError):
        apply(graph, Move(loop, (0, 1)))
    tree = families.tripod()
    with pytest.raises(MalformedMoveError):
        apply(tree, Move(0, (1, 2)))


def test_swap_must_sit_at_the_edge_ends():
    graph = families.linear_tree(6)
    e = graph.movable_edges[0]
    h0, h1 = graph.edges[e]
    with pytest.raises(MalformedMoveError):
        apply(graph, Move(e, (h0, h1)))


def test_support_is_the_two_endpoints():
    graph = families.linear_tree(6)
    m = all_moves(graph)[0]
    assert support(graph, m) == frozenset(graph.endpoints(m.edge))


def test_overlapping_batch_rejected():
    graph = families.linear_tree(8)
    e0, e1 = graph.movable_edges[:2]
    a = moves_on_edge(graph, e0)[0]
    b = moves_on_edge(graph, e1)[0]
    with pytest.raises(OverlappingBatchError) as info:
        apply_batch(graph, MoveBatch([a, b]))
    assert set(info.value.pair) == {a, b}


def test_batch_cost_is_sqrt_k():
    graph = families.linear_tree(12)
    batches, complete = enumerate_batches(graph)
    assert complete
    for b, _ in batches:
        assert b.cost == pytest.approx(math.sqrt(b.k))


@given(st.integers(0, 10 ** 6))
def test_disjoint_batch_equals_sequential(seed):
    graph = families.random_cubic(6, seed)
    batches, _ = enumerate_batches(graph, cap=200)
    b, result = random.Random(seed).choice(batches)
    g = graph
    for m in b.moves:
        g = apply(g, m)
    assert g == result


def test_edge_variant_allows_more_batches():
    graph = families.linear_tree(8)
    v, _ = enumerate_batches(graph, "vertex")
    e, _ = enumerate_batches(graph, "edge")
    assert len(e) > len(v)


def test_batch_cap_marks_incomplete():
    batches, complete = enumerate_batches(families.linear_tree(12), cap=5)
    assert len(batches) == 5 and not complete


def test_schedule_round_trip_and_replay():
    graph = families.random_cubic(4, 3)
    g = graph
    batches = []
    rng = random.Random(0)
    for _ in range(5):
        opts, _ = enumerate_batches(g, cap=100)
        b, g = rng.choice(opts)
        batches.append(b)
    s = MoveSchedule(graph, batches)
    assert s.end == g
    again = MoveSchedule.from_dict(s.to_dict())
    again.verify()
    assert schedule_cost(again) == (pytest.approx(s.total_cost), s.unit_moves)


def test_tampered_schedule_fails_replay():
    graph = families.linear_tree(6)
    s = MoveSchedule(graph, [MoveBatch([all_moves(graph)[0]])])
    bad = MoveSchedule(graph, [], s.end)
    with pytest.raises(ReplayError):
        bad.verify()


def test_schedules_chain():
    graph = families.linear_tree(6)
    m = all_moves(graph)[0]
    s = MoveSchedule(graph, [MoveBatch([m])])
    back = MoveSchedule(s.end, [MoveBatch([m])])
    both = s + back
    assert both.end == graph and both.unit_moves == 2
    with pytest.raises(ReplayError):
        s + s


def test_quotient_neighbors_are_classes():
    graph = families.linear_tree(8)
    labelled = neighbors(graph)
    quotient = neighbors(graph, quotient=True)
    assert 0 < len(quotient) <= len(labelled)
