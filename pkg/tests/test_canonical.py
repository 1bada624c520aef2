import random

import pytest
from hypothesis import assume, given, strategies as st

from oracles import brute_force_classes, random_relabel
from pantslab import families
from pantslab.canonical import (KEY_PREFIX, canonical_labeling, canonicalize, enumerate_classes,
                                graph_from_key, is_isomorphic)
from pantslab.errors import CapExceededError
from pantslab.pants_graph import validate


@given(st.integers(1, 6), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_key_is_relabeling_invariant(g, n, seed):
    assume(2 * g - 2 + n > 0)
    graph = families.random_cubic(g, seed, punctures=n)
    rng = random.Random(seed)
    key = canonicalize(graph)
    for _ in range(5):
        assert canonicalize(random_relabel(graph, rng)) == key


@given(st.integers(1, 5), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_key_round_trips_to_an_isomorphic_graph(g, n, seed):
    assume(2 * g - 2 + n > 0)
    graph = families.random_cubic(g, seed, punctures=n)
    form = canonicalize(graph)
    back = graph_from_key(form)
    assert validate(back).ok
    assert canonicalize(back) == form
    assert form.key.startswith(KEY_PREFIX)


def test_distinct_small_graphs_have_distinct_keys():
    assert canonicalize(families.theta()) != canonicalize(families.dumbbell())
    assert not is_isomorphic(families.theta(), families.dumbbell())
    assert is_isomorphic(families.theta(), random_relabel(families.theta(), random.Random(1)))


def test_leaf_labels_refine_the_key():
    # caterpillar with leaves swapped across the spine is isomorphic but not leaf-preserving
    tree = families.linear_tree(6)
    leaves = list(tree.leaf_vertices)
    perm = list(range(tree.num_vertices))
    perm[leaves[0]], perm[leaves[-1]] = perm[leaves[-1]], perm[leaves[0]]
    swapped = tree.relabel(perm, list(range(len(tree.owner))))
    assert canonicalize(swapped) == canonicalize(tree)
    assert canonicalize(swapped, leaf_labels=True) != canonicalize(tree, leaf_labels=True)


def test_labeling_maps_vertices():
    graph = families.random_cubic(4, 2)
    form, mapping = canonical_labeling(graph)
    assert sorted(mapping) == list(graph.interior_vertices)
    assert sorted(mapping.values()) == list(range(len(mapping)))
    assert form == canonicalize(graph)


@pytest.mark.parametrize("g,n", [(0, 5), (0, 6), (0, 7), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)])
def test_enumeration_matches_brute_force(g, n):
    ours = enumerate_classes(g, n)
    theirs = {canonicalize(x) for x in brute_force_classes(g, n)}
    assert set(ours) == theirs


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        enumerate_classes(0, 9, cap=2)


def test_enumeration_cap_from_env(monkeypatch):
    from pantslab import canonical
    monkeypatch.setenv("PANTSLAB_CAP_CLASSES", "1")
    canonical._CLASS_CACHE.clear()
    with pytest.raises(CapExceededError):
        enumerate_classes(0, 8)
    canonical._CLASS_CACHE.clear()
