"""Brute-force oracles kept independent of the production code paths."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

import networkx as nx

from pantslab.pants_graph import PantsGraph


def brute_force_classes(genus: int, punctures: int) -> list[PantsGraph]:
    """Isomorphism classes by exhaustive half-edge pairing on labelled vertices.

    Interior vertex ``i`` gets ``leaves[i]`` leaf stubs (non-increasing, which
    only removes relabelled copies), ``loops[i]`` loops and the remaining
    stubs are paired off across vertices in every possible way.  Duplicates
    are removed with networkx multigraph isomorphism.
    """
    size = 2 * genus - 2 + punctures
    found: list[nx.MultiGraph] = []
    buckets: dict[tuple, list[nx.MultiGraph]] = defaultdict(list)

    def leaf_vectors(i, left, cap):
        if i == size:
            if left == 0:
                yield ()
            return
        for k in range(min(cap, left, 3), -1, -1):
            for rest in leaf_vectors(i + 1, left - k, k):
                yield (k,) + rest

    def fill(stubs, mult, i, j):
        # pair remaining stubs of vertex i with vertices j, j+1, ...
        if i == size:
            yield dict(mult)
            return
        if stubs[i] == 0:
            yield from fill(stubs, mult, i + 1, i + 2)
            return
        if j >= size:
            return
        for m in range(min(stubs[i], stubs[j]), -1, -1):
            stubs[i] -= m
            stubs[j] -= m
            if m:
                mult[(i, j)] = m
            yield from fill(stubs, mult, i, j + 1)
            mult.pop((i, j), None)
            stubs[i] += m
            stubs[j] += m

    for leaves in leaf_vectors(0, punctures, 3):
        loop_ranges = [range(0, (3 - l) // 2 + 1) for l in leaves]
        for loops in itertools.product(*loop_ranges):
            stubs = [3 - l - 2 * c for l, c in zip(leaves, loops)]
            if sum(stubs) % 2:
                continue
            for mult in fill(stubs, {}, 0, 1):
                g = nx.MultiGraph()
                for v in range(size):
                    g.add_node(v, leaves=leaves[v], loops=loops[v])
                for (a, b), m in mult.items():
                    for _ in range(m):
                        g.add_edge(a, b)
                if not nx.is_connected(g):
                    continue
                inv = (tuple(sorted((leaves[v], loops[v], g.degree(v)) for v in range(size))),
                       tuple(sorted(m for m in mult.values())))
                bucket = buckets[inv]
                if any(nx.is_isomorphic(g, h, node_match=lambda x, y: x == y) for h in bucket):
                    continue
                bucket.append(g)
                found.append(g)

    out = []
    for g in found:
        edges = []
        nxt = size
        for v in range(size):
            for _ in range(g.nodes[v]["leaves"]):
                edges.append((v, nxt))
                nxt += 1
            edges += [(v, v)] * g.nodes[v]["loops"]
        edges += [(a, b) for a, b in g.edges()]
        out.append(PantsGraph.from_edges(nxt, edges))
    return out


def brute_force_girth(graph: PantsGraph) -> float:
    """Shortest cycle by checking every subset of interior edges."""
    edges = [e for e in range(len(graph.edges)) if graph.is_interior_edge(e)]
    best = math.inf
    for r in range(1, len(edges) + 1):
        if r >= best:
            break
        for subset in itertools.combinations(edges, r):
            deg: dict[int, int] = defaultdict(int)
            adj: dict[int, set[int]] = defaultdict(set)
            for e in subset:
                u, v = graph.endpoints(e)
                deg[u] += 1
                deg[v] += 1
                adj[u].add(v)
                adj[v].add(u)
            if any(d != 2 for d in deg.values()):
                continue
            start = next(iter(deg))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) == len(deg):
                return r
    return best


def tree_diameter(graph: PantsGraph) -> int:
    """Diameter of the interior tree, by BFS from every interior vertex."""
    adj = graph.interior_adjacency
    best = 0
    for s in graph.interior_vertices:
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y, _ in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        best = max(best, max(dist.values()))
    return best


def random_relabel(graph: PantsGraph, rng) -> PantsGraph:
    """Apply uniformly random vertex and half-edge permutations."""
    vp = list(range(graph.num_vertices))
    hp = list(range(len(graph.owner)))
    rng.shuffle(vp)
    rng.shuffle(hp)
    return graph.relabel(vp, hp)
