import math
import random

import pytest
from hypothesis import given, strategies as st

from pantslab import families
from pantslab.canonical import canonicalize, enumerate_classes, is_isomorphic
from pantslab.errors import DomainError, InvalidGraphError, OverlappingBatchError
from pantslab.metric_oracle import DistanceQuery, distance
from pantslab.moves import moves_on_edge
from pantslab.pants_graph import validate
from pantslab.reduction import (CycleSet, WorkGraph, cycle_count_target, find_disjoint_cycles,
                                genus_reduce, is_treelike, melt, sort_loops, split_edge,
                                to_linear, to_treelike, treelike_to_treelike, trim)


def same_type(a, b):
    ra, rb = validate(a), validate(b)
    return ra.ok and rb.ok and (ra.genus, ra.punctures) == (rb.genus, rb.punctures)


# -- work graph ------------------------------------------------------------

def test_work_graph_rejects_overlap():
    tree = families.linear_tree(8)
    w = WorkGraph(tree)
    e0, e1 = tree.movable_edges[:2]
    with pytest.raises(OverlappingBatchError):
        w.apply([moves_on_edge(tree, e0)[0], moves_on_edge(tree, e1)[0]])


def test_work_graph_checkpoint_replays():
    tree = families.linear_tree(8)
    w = WorkGraph(tree)
    w.apply([moves_on_edge(tree, tree.movable_edges[0])[0]])
    s = w.checkpoint()
    assert s.start == tree and s.unit_moves == 1
    assert w.checkpoint().unit_moves == 0


# -- trees -----------------------------------------------------------------

@given(st.integers(4, 300), st.integers(0, 10 ** 6))
def test_trim_then_melt_reaches_linear(n, seed):
    tree = families.random_tree(n, seed)
    _, state, s1 = trim(tree)
    s2 = melt(state)
    s1.verify()
    s2.verify()
    assert is_isomorphic(s2.end, families.linear_tree(n))
    assert state.isolated_violations == []
    assert state.shrink_violations == []
    levels = [v for vs in state.levels for v in vs] + [state.root]
    assert sorted(levels) == sorted(tree.interior_vertices)


def test_trim_rejects_genus():
    with pytest.raises(DomainError):
        trim(families.theta())


def test_linear_input_costs_nothing():
    assert to_linear(families.linear_tree(9)).total_cost == 0


def test_claw_to_linear_is_one_move():
    s = to_linear(families.claw_tree())
    assert s.total_cost == 1
    assert is_isomorphic(s.end, families.linear_tree(6))


@pytest.mark.parametrize("n", [6, 7, 8, 9])
def test_to_linear_never_beats_the_oracle(n):
    line = families.linear_tree(n)
    for tree in enumerate_classes(0, n).values():
        s = to_linear(tree)
        assert distance(DistanceQuery(tree, line)).distance <= s.total_cost + 1e-12


def test_tree_cost_scales_like_sqrt_n():
    ratios = [to_linear(families.random_tree(n, 1)).total_cost / math.sqrt(n) for n in (64, 256, 1024)]
    assert max(ratios) < 6


# -- cycles ----------------------------------------------------------------

def test_small_cycle_sets():
    assert sorted(find_disjoint_cycles(families.dumbbell()).lengths) == [1, 1]
    assert find_disjoint_cycles(families.theta()).lengths == [2]
    with pytest.raises(DomainError):
        find_disjoint_cycles(families.claw_tree())


@given(st.integers(2, 120), st.integers(0, 10 ** 6))
def test_cycles_are_disjoint_simple_cycles(g, seed):
    graph = families.random_cubic(g, seed)
    cycles = find_disjoint_cycles(graph)
    assert cycles.is_disjoint()
    assert len(cycles) >= 1
    for cyc in cycles.cycles:
        deg = {}
        for e in cyc:
            u, v = graph.endpoints(e)
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        assert all(d == 2 for d in deg.values())
        assert len(deg) == len(cyc)


def test_first_cycle_is_a_girth_cycle():
    from pantslab.pants_graph import girth
    for seed in range(10):
        graph = families.random_cubic(30, seed)
        assert min(find_disjoint_cycles(graph).lengths) == girth(graph)


def test_cycle_target_value():
    assert cycle_count_target(1024) == pytest.approx(math.log(2) / 2 * 1024 / math.log(1024))


@given(st.integers(2, 80), st.integers(0, 10 ** 6))
def test_genus_reduce_makes_loops(g, seed):
    graph = families.random_cubic(g, seed)
    cycles = find_disjoint_cycles(graph)
    s = genus_reduce(graph, cycles)
    s.verify()
    assert same_type(graph, s.end)
    for cyc in cycles.cycles:
        # edge ids are stable, and the surviving edge of each cycle is a loop
        assert sum(s.end.is_loop(e) for e in cyc) >= 1
    rounds = max(math.ceil(math.log2(l)) for l in cycles.lengths) if max(cycles.lengths) > 1 else 0
    assert len(s.batches) <= rounds


def test_genus_reduce_validates_cycles():
    graph = families.random_cubic(6, 0)
    cyc = find_disjoint_cycles(graph).cycles[0]
    with pytest.raises(InvalidGraphError):
        genus_reduce(graph, CycleSet([cyc, cyc]))
    if len(cyc) > 2:
        with pytest.raises(InvalidGraphError):
            genus_reduce(graph, CycleSet([cyc[:-1]]))


# -- loops and treelike ----------------------------------------------------

@given(st.integers(2, 60), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_to_treelike(g, n, seed):
    graph = families.random_cubic(g, seed, punctures=n)
    s, trace = to_treelike(graph)
    s.verify()
    assert same_type(graph, s.end)
    assert is_treelike(s.end)
    assert trace.total_cost == pytest.approx(s.total_cost)
    assert trace.effective_genus[0] == g


def test_theta_to_treelike_costs_one():
    s, _ = to_treelike(families.theta())
    assert s.total_cost == 1
    assert is_treelike(s.end)


@pytest.mark.parametrize("gn", [(2, 0), (3, 0), (4, 0), (2, 2), (1, 4)])
def test_every_small_class_reaches_treelike(gn):
    for graph in enumerate_classes(*gn).values():
        s, _ = to_treelike(graph)
        assert is_treelike(s.end) and same_type(graph, s.end)


def test_sort_loops_requires_loops():
    with pytest.raises(DomainError):
        sort_loops(families.theta())
    graph = families.treelike(3, 0)
    assert sort_loops(graph).unit_moves == 0


def test_treelike_family_is_treelike():
    for g, n in [(1, 2), (3, 0), (4, 2), (6, 5)]:
        t = families.treelike(g, n)
        assert is_treelike(t) and same_type(t, families.random_cubic(g, 0, punctures=n))


@pytest.mark.parametrize("gn", [(3, 0), (4, 0), (2, 2), (1, 3)])
def test_treelike_to_treelike_small(gn):
    g, n = gn
    ends = [to_treelike(c)[0].end for c in enumerate_classes(g, n).values()]
    ends = [e for e in ends if is_treelike(e)]
    for a in ends[:4]:
        for b in ends[:4]:
            s = treelike_to_treelike(a, b)
            s.verify()
            assert canonicalize(s.end) == canonicalize(b)
            assert distance(DistanceQuery(a, b)).distance <= s.total_cost + 1e-12


@given(st.integers(3, 40), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_treelike_to_treelike_random(g, n, seed):
    a = families.random_treelike(g, n, seed)
    b = families.random_treelike(g, n, seed + 1)
    s = treelike_to_treelike(a, b)
    s.verify()
    assert is_isomorphic(s.end, b)


def test_treelike_needs_three_pendants():
    with pytest.raises(DomainError):
        families.treelike(2, 0)


def test_treelike_to_treelike_rejects_mismatch():
    with pytest.raises(DomainError):
        treelike_to_treelike(families.treelike(3, 0), families.treelike(2, 2))
    with pytest.raises(DomainError):
        treelike_to_treelike(families.theta(), families.dumbbell())
