"""Named and random pants-decomposition graphs used by tests, experiments and the CLI."""

from __future__ import annotations

import random
from collections import Counter

from .errors import DomainError
from .pants_graph import PantsGraph, validate


def tripod() -> PantsGraph:
    """The single pair of pants with three punctures, (g, n) = (0, 3)."""
    return PantsGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def one_holed_torus() -> PantsGraph:
    """One vertex, one loop, one leaf: (1, 1)."""
    return PantsGraph.from_edges(2, [(0, 0), (0, 1)])


def theta() -> PantsGraph:
    """Two vertices joined by three parallel edges: genus 2."""
    return PantsGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])


def dumbbell() -> PantsGraph:
    """Two loops joined by a bridge: genus 2."""
    return PantsGraph.from_edges(2, [(0, 0), (0, 1), (1, 1)])


def double_edge_two_leaves() -> PantsGraph:
    """Two vertices joined by a double edge, one leaf each: (1, 2)."""
    return PantsGraph.from_edges(4, [(0, 1), (0, 1), (0, 2), (1, 3)])


def caterpillar_edges(n_leaves: int) -> tuple[int, list[tuple[int, int]], list[int]]:
    """Spine and pendant slots of the linear tree.

    Returns ``(spine_len, spine_edges, slots)`` where ``slots`` lists, in order
    along the line, the spine vertex that carries each of the ``n_leaves``
    pendants.
    """
    if n_leaves < 3:
        raise DomainError("a trivalent tree needs at least 3 leaves")
    k = n_leaves - 2
    spine = [(i, i + 1) for i in range(k - 1)]
    slots = [0, 0] + list(range(1, k - 1)) + [k - 1, k - 1] if k > 1 else [0, 0, 0]
    return k, spine, slots


def linear_tree(n_leaves: int) -> PantsGraph:
    """The caterpillar with ``n_leaves`` leaves: the tree of maximal diameter."""
    k, spine, slots = caterpillar_edges(n_leaves)
    edges = list(spine) + [(s, k + i) for i, s in enumerate(slots)]
    return PantsGraph.from_edges(k + n_leaves, edges)


def claw_tree() -> PantsGraph:
    """Six leaves in three cherries around a centre vertex."""
    edges = [(0, 1), (0, 2), (0, 3)]
    leaf = 4
    for c in (1, 2, 3):
        edges += [(c, leaf), (c, leaf + 1)]
        leaf += 2
    return PantsGraph.from_edges(10, edges)


def treelike(genus: int, punctures: int = 0) -> PantsGraph:
    """Linear tree whose first ``genus`` pendants are loops."""
    m = genus + punctures
    if m < 3:
        raise DomainError("treelike() needs genus + punctures >= 3")
    k, spine, slots = caterpillar_edges(m)
    edges = list(spine)
    nxt = k
    for i, s in enumerate(slots):
        edges.append((s, nxt))
        if i < genus:
            edges.append((nxt, nxt))
        nxt += 1
    return PantsGraph.from_edges(nxt, edges)


def _tree_edges(n_leaves: int, rng: random.Random) -> tuple[int, list[list[int]]]:
    # uniform leaf insertion: subdivide a random edge, hang a new leaf
    edges = [[0, 1], [0, 2], [0, 3]]
    nv = 4
    for _ in range(n_leaves - 3):
        e = rng.randrange(len(edges))
        u, v = edges[e]
        mid, leaf = nv, nv + 1
        nv += 2
        edges[e] = [u, mid]
        edges.append([mid, v])
        edges.append([mid, leaf])
    return nv, edges


def random_tree(n_leaves: int, rng: random.Random | int | None = None) -> PantsGraph:
    """Random trivalent tree with ``n_leaves`` leaves (uniform on leaf-labelled trees)."""
    if n_leaves < 3:
        raise DomainError("a trivalent tree needs at least 3 leaves")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    nv, edges = _tree_edges(n_leaves, rng)
    return PantsGraph.from_edges(nv, edges)


def random_cubic(genus: int, rng: random.Random | int | None = None,
                 punctures: int = 0, max_tries: int = 1000) -> PantsGraph:
    """Random connected (g, n) graph from the configuration model.

    Interior half-edges are matched uniformly at random after ``punctures``
    of them are reserved for leaves; loops and multi-edges are kept, and
    disconnected samples are rejected.
    """
    n_int = 2 * genus - 2 + punctures
    if n_int < 1:
        raise DomainError(f"no pants graph with (g, n) = ({genus}, {punctures})")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    for _ in range(max_tries):
        stubs = [v for v in range(n_int) for _ in range(3)]
        rng.shuffle(stubs)
        edges = [(stubs[i], n_int + i) for i in range(punctures)]
        rest = stubs[punctures:]
        edges += [(rest[i], rest[i + 1]) for i in range(0, len(rest), 2)]
        graph = PantsGraph.from_edges(n_int + punctures, edges)
        if validate(graph).ok:
            return graph
    raise RuntimeError(f"no connected sample after {max_tries} tries")


def random_treelike(genus: int, punctures: int = 0,
                    rng: random.Random | int | None = None) -> PantsGraph:
    """Random tree on ``genus + punctures`` leaves with ``genus`` of them turned into loops."""
    m = genus + punctures
    if m < 3:
        raise DomainError("random_treelike() needs genus + punctures >= 3")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    nv, edges = _tree_edges(m, rng)
    degree = Counter(v for e in edges for v in e)
    leaves = [v for v in range(nv) if degree[v] == 1]
    for v in rng.sample(leaves, genus):
        edges.append([v, v])
    return PantsGraph.from_edges(nv, edges)
