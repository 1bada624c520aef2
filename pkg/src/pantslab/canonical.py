"""Canonical forms of pants graphs and enumeration of isomorphism classes.

Leaves carry no structure, so each interior vertex is first labelled with
its number of leaves and loops; the interior multigraph is then put in
canonical order by colour refinement plus individualisation, keeping the
lexicographically least certificate over the search tree.  Automorphisms
found along the way (two leaves with equal certificates) prune sibling
branches in the same orbit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable

from .errors import CapExceededError, DomainError, InvalidGraphError
from .pants_graph import PantsGraph, validate

KEY_PREFIX = b"pl1:"
DEFAULT_CAP_CLASSES = 20_000


def default_cap() -> int:
    return int(os.environ.get("PANTSLAB_CAP_CLASSES", DEFAULT_CAP_CLASSES))


@dataclass(frozen=True, order=True)
class CanonicalForm:
    key: bytes

    def __str__(self) -> str:
        return self.key.decode()

    def graph(self) -> PantsGraph:
        return graph_from_key(self)


class _Interior:
    """Interior multigraph with per-vertex labels, indexed 0..V-1."""

    def __init__(self, graph: PantsGraph, leaf_labels: bool):
        verts = graph.interior_vertices
        index = {v: i for i, v in enumerate(verts)}
        self.size = len(verts)
        leaves: list[list[int]] = [[] for _ in verts]
        loops = [0] * self.size
        mult: list[dict[int, int]] = [{} for _ in verts]
        for a, b in graph.edges:
            u, v = graph.owner[a], graph.owner[b]
            if graph.valence[u] == 1:
                u, v = v, u
            if graph.valence[v] == 1:
                leaves[index[u]].append(v)
            elif u == v:
                loops[index[u]] += 1
            else:
                i, j = index[u], index[v]
                mult[i][j] = mult[i].get(j, 0) + 1
                mult[j][i] = mult[j].get(i, 0) + 1
        if leaf_labels:
            self.labels = [(tuple(sorted(ls)), lp) for ls, lp in zip(leaves, loops)]
        else:
            self.labels = [(len(ls), lp) for ls, lp in zip(leaves, loops)]
        self.adj = [tuple(sorted(m.items())) for m in mult]


def _rank(signatures: list) -> list[int]:
    order = {s: r for r, s in enumerate(sorted(set(signatures)))}
    return [order[s] for s in signatures]


def _refine(g: _Interior, colors: list[int]) -> list[int]:
    ncol = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted((colors[w], m) for w, m in g.adj[v])))
                for v in range(g.size)]
        new = _rank(sigs)
        k = len(set(new))
        if k == ncol:
            return new
        colors, ncol = new, k


def _certificate(g: _Interior, pos: list[int]) -> tuple:
    inv = [0] * g.size
    for v, p in enumerate(pos):
        inv[p] = v
    labels = tuple(g.labels[inv[p]] for p in range(g.size))
    edges = tuple(sorted((pos[v], pos[w], m) for v in range(g.size) for w, m in g.adj[v] if pos[v] < pos[w]))
    return labels, edges


def _search(g: _Interior) -> tuple[tuple, list[int]]:
    best: list = [None, None]
    autos: list[list[int]] = []

    def orbit_rep(v: int, prefix: list[int]) -> int:
        # smallest vertex in v's orbit under found automorphisms fixing the prefix
        gens = [a for a in autos if all(a[p] == p for p in prefix)]
        if not gens:
            return v
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for a in gens:
                y = a[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return min(seen)

    def rec(colors: list[int], prefix: list[int]) -> None:
        if len(set(colors)) == g.size:
            cert = _certificate(g, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colors
            elif cert == best[0]:
                inv = [0] * g.size
                for v, p in enumerate(best[1]):
                    inv[p] = v
                autos.append([inv[colors[x]] for x in range(g.size)])
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        cell = [v for v in range(g.size) if colors[v] == target]
        done: set[int] = set()
        for v in cell:
            rep = orbit_rep(v, prefix)
            if rep in done:
                continue
            done.add(rep)
            indiv = _rank([(colors[x], 0 if x == v else 1) for x in range(g.size)])
            rec(_refine(g, indiv), prefix + [v])

    rec(_refine(g, _rank(g.labels)), [])
    return best[0], best[1]


def canonical_labeling(graph: PantsGraph, leaf_labels: bool = False) -> tuple["CanonicalForm", dict[int, int]]:
    """Canonical form plus the map interior vertex -> canonical position."""
    rep = validate(graph)
    if not rep.ok:
        raise InvalidGraphError("; ".join(rep.issues))
    g = _Interior(graph, leaf_labels)
    cert, pos = _search(g)
    labels, edges = cert
    body = json.dumps([[list(x) if isinstance(x, tuple) else x for x in lab] for lab in labels]
                      + [[list(e) for e in edges]], separators=(",", ":"))
    form = CanonicalForm(KEY_PREFIX + body.encode())
    return form, {v: pos[i] for i, v in enumerate(graph.interior_vertices)}


def canonicalize(graph: PantsGraph, leaf_labels: bool = False) -> CanonicalForm:
    """Relabelling-invariant key; ``leaf_labels`` keeps leaf vertex ids significant."""
    return canonical_labeling(graph, leaf_labels)[0]


def graph_from_key(form: CanonicalForm) -> PantsGraph:
    """Rebuild the canonical representative: interior vertices first, then leaves."""
    data = json.loads(form.key[len(KEY_PREFIX):])
    labels, edges = data[:-1], data[-1]
    if labels and isinstance(labels[0][0], list):
        raise ValueError("leaf-labelled keys do not determine vertex ids")
    size = len(labels)
    out: list[tuple[int, int]] = []
    nxt = size
    for v, (nleaf, nloop) in enumerate(labels):
        for _ in range(nleaf):
            out.append((v, nxt))
            nxt += 1
        out += [(v, v)] * nloop
    for i, j, m in edges:
        out += [(i, j)] * m
    return PantsGraph.from_edges(nxt, out)


def is_isomorphic(a: PantsGraph, b: PantsGraph) -> bool:
    return canonicalize(a) == canonicalize(b)


# -- enumeration ---------------------------------------------------------

def _edge_list(graph: PantsGraph) -> list[tuple[int, int]]:
    return [(graph.owner[a], graph.owner[b]) for a, b in graph.edges]


def _grow_y(graph: PantsGraph) -> Iterable[PantsGraph]:
    base = _edge_list(graph)
    nv = graph.num_vertices
    for leaf in graph.leaf_vertices:
        yield PantsGraph.from_edges(nv + 2, base + [(leaf, nv), (leaf, nv + 1)])


def _grow_loop(graph: PantsGraph) -> Iterable[PantsGraph]:
    base = _edge_list(graph)
    for leaf in graph.leaf_vertices:
        yield PantsGraph.from_edges(graph.num_vertices, base + [(leaf, leaf)])


def _grow_edge(edges: list[tuple[int, int]], nv: int) -> Iterable[PantsGraph]:
    x, y = nv, nv + 1
    for i in range(len(edges)):
        for j in range(i, len(edges)):
            rest = [e for k, e in enumerate(edges) if k != i and k != j]
            u, v = edges[i]
            if i == j:
                new = [(u, x), (x, y), (y, v), (x, y)]
            else:
                p, q = edges[j]
                new = [(u, x), (x, v), (p, y), (y, q), (x, y)]
            yield PantsGraph.from_edges(nv + 2, rest + new)


def _feasible(genus: int, punctures: int) -> bool:
    return genus >= 0 and punctures >= 0 and 2 * genus - 2 + punctures >= 1


_CLASS_CACHE: dict[tuple[int, int], dict[CanonicalForm, PantsGraph]] = {}


def _classes(genus: int, punctures: int, cap: int) -> dict[CanonicalForm, PantsGraph]:
    key = (genus, punctures)
    if key in _CLASS_CACHE:
        return _CLASS_CACHE[key]
    out: dict[CanonicalForm, PantsGraph] = {}

    def add(graphs: Iterable[PantsGraph]) -> None:
        for h in graphs:
            form = canonicalize(h)
            if form not in out:
                out[form] = graph_from_key(form)
                if len(out) > cap:
                    raise CapExceededError(
                        f"more than {cap} classes at (g, n) = ({genus}, {punctures})", cap)

    if key == (0, 3):
        add([PantsGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])])
    elif key == (1, 1):
        add([PantsGraph.from_edges(2, [(0, 0), (0, 1)])])
    else:
        # seeds not reachable by the growth moves from a smaller feasible pair
        if key == (2, 0):
            add([PantsGraph.from_edges(2, [(0, 1)] * 3)])
        if key == (1, 2):
            add([PantsGraph.from_edges(4, [(0, 1), (0, 1), (0, 2), (1, 3)])])
        if _feasible(genus, punctures - 1):
            for g in list(_classes(genus, punctures - 1, cap).values()):
                add(_grow_y(g))
        if _feasible(genus - 1, punctures + 1):
            for g in list(_classes(genus - 1, punctures + 1, cap).values()):
                add(_grow_loop(g))
        if _feasible(genus - 1, punctures):
            for g in list(_classes(genus - 1, punctures, cap).values()):
                add(_grow_edge(_edge_list(g), g.num_vertices))
    _CLASS_CACHE[key] = out
    return out


def enumerate_classes(genus: int, punctures: int, cap: int | None = None) -> dict[CanonicalForm, PantsGraph]:
    """All isomorphism classes at ``(genus, punctures)``, each with its canonical representative.

    Classes are grown from smaller ones by the inverses of three reductions
    (cut a cherry, cut a loop vertex, delete a non-bridge edge); every graph
    other than a few seeds admits one of them.
    """
    if 3 * genus - 3 + punctures < 1 or not _feasible(genus, punctures):
        raise DomainError(f"(g, n) = ({genus}, {punctures}) has no interior edge")
    cap = default_cap() if cap is None else cap
    classes = _classes(genus, punctures, cap)
    if len(classes) > cap:
        raise CapExceededError(f"more than {cap} classes at (g, n) = ({genus}, {punctures})", cap)
    return dict(sorted(classes.items()))
