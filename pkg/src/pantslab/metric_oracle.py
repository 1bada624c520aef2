"""Exact distances and diameters in the (cubical) pants graph at small scale.

Nodes of the quotient search are isomorphism classes.  Each node keeps the
concrete graph it was first reached with, and successors are produced by
applying moves to that graph, so the parent chain is a schedule that
replays from the source to a graph isomorphic to the target.

The labelled search keeps leaf identities significant: the node set is the
quotient by relabelings that fix every puncture, which is finite, unlike the
full pants graph.  It is only offered for distances, within a node cap.
"""

from __future__ import annotations

import heapq
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

from .canonical import CanonicalForm, canonicalize, default_cap, enumerate_classes
from .errors import CapExceededError, DomainError, InvalidGraphError, PantsLabError
from .moves import (Disjointness, MoveBatch, MoveSchedule, all_moves, apply,
                    enumerate_batches)
from .pants_graph import PantsGraph, validate

Metric = Literal["pants", "cubical"]

TOL = 1e-12
DEFAULT_BATCH_CAP = 2 ** 20


class IncompleteSearchWarning(UserWarning):
    pass


@dataclass
class DistanceQuery:
    source: PantsGraph | CanonicalForm
    target: PantsGraph | CanonicalForm
    metric: Metric = "cubical"
    quotient: bool = True
    disjoint: Disjointness = "vertex"
    cap_nodes: int | None = None
    batch_cap: int = DEFAULT_BATCH_CAP


@dataclass
class DistanceResult:
    distance: float
    schedule: MoveSchedule
    explored_nodes: int
    complete: bool = True


@dataclass
class DiameterReport:
    genus: int
    punctures: int
    metric: Metric
    diameter: float
    eccentric_pair: tuple[CanonicalForm, CanonicalForm]
    class_count: int
    explored_edges: int
    complete: bool = True

    def to_dict(self) -> dict:
        return {"genus": self.genus, "punctures": self.punctures, "metric": self.metric,
                "diameter": self.diameter,
                "eccentric_pair": [str(k) for k in self.eccentric_pair],
                "class_count": self.class_count, "explored_edges": self.explored_edges,
                "complete": self.complete}


def _as_graph(x: PantsGraph | CanonicalForm) -> PantsGraph:
    if isinstance(x, CanonicalForm):
        return x.graph()
    rep = validate(x)
    if not rep.ok:
        raise InvalidGraphError("; ".join(rep.issues))
    return x


def successors(graph: PantsGraph, metric: Metric, disjoint: Disjointness = "vertex",
               batch_cap: int = DEFAULT_BATCH_CAP) -> tuple[list[tuple[float, MoveBatch, PantsGraph]], bool]:
    """Weighted out-edges of ``graph``: ``(cost, batch, result)`` and a completeness flag."""
    if metric == "pants":
        return [(1.0, MoveBatch([m]), apply(graph, m)) for m in all_moves(graph)], True
    if metric != "cubical":
        raise ValueError(f"unknown metric {metric!r}")
    batches, complete = enumerate_batches(graph, disjoint, batch_cap)
    return [(b.cost, b, h) for b, h in batches], complete


def distance(query: DistanceQuery) -> DistanceResult:
    """Exact distance plus a witness schedule realizing it.

    Dijkstra keyed on ``(distance, canonical key)``; among equally short
    routes into a node the one from the smaller predecessor key wins, which
    makes witnesses reproducible.
    """
    src = _as_graph(query.source)
    dst = _as_graph(query.target)
    if (src.genus, src.punctures) != (dst.genus, dst.punctures):
        raise DomainError(f"(g, n) differ: {(src.genus, src.punctures)} vs {(dst.genus, dst.punctures)}")
    leaf_labels = not query.quotient
    if leaf_labels and sorted(src.leaf_vertices) != sorted(dst.leaf_vertices):
        raise DomainError("labelled search needs the same leaf ids on both graphs")
    cap = default_cap() if query.cap_nodes is None else query.cap_nodes
    key_of = lambda g: canonicalize(g, leaf_labels=leaf_labels)  # noqa: E731

    s_key, t_key = key_of(src), key_of(dst)
    best: dict[CanonicalForm, float] = {s_key: 0.0}
    rep: dict[CanonicalForm, PantsGraph] = {s_key: src}
    parent: dict[CanonicalForm, tuple[CanonicalForm, MoveBatch] | None] = {s_key: None}
    done: set[CanonicalForm] = set()
    heap = [(0.0, s_key)]
    complete = True
    while heap:
        d, k = heapq.heappop(heap)
        if k in done or d > best[k] + TOL:
            continue
        done.add(k)
        if k == t_key:
            break
        out, ok = successors(rep[k], query.metric, query.disjoint, query.batch_cap)
        complete &= ok
        for cost, batch, h in out:
            hk = key_of(h)
            if hk in done:
                continue
            nd = d + cost
            old = best.get(hk)
            if old is None or nd < old - TOL or (abs(nd - old) <= TOL and k < parent[hk][0]):
                if old is None and len(best) >= cap:
                    raise CapExceededError(f"distance search exceeded {cap} nodes", cap)
                best[hk] = nd
                rep[hk] = h
                parent[hk] = (k, batch)
                heapq.heappush(heap, (nd, hk))
    if t_key not in done:
        if not complete:
            raise CapExceededError("batch cap hit before the target was reached", query.batch_cap)
        raise PantsLabError("target unreachable from source")
    if not complete:
        warnings.warn("batch cap hit; the distance is an upper bound", IncompleteSearchWarning)

    batches: list[MoveBatch] = []
    k = t_key
    while parent[k] is not None:
        k, b = parent[k]
        batches.append(b)
    batches.reverse()
    sched = MoveSchedule(src, batches, disjoint="vertex" if query.metric == "pants" else query.disjoint)
    return DistanceResult(best[t_key], sched, len(done), complete)


# -- class graph ---------------------------------------------------------

def _expand(args) -> tuple[dict[CanonicalForm, float], int, bool]:
    graph, metric, disjoint, batch_cap = args
    out, complete = successors(graph, metric, disjoint, batch_cap)
    nbrs: dict[CanonicalForm, float] = {}
    for cost, _, h in out:
        hk = canonicalize(h)
        if cost < nbrs.get(hk, math.inf):
            nbrs[hk] = cost
    return nbrs, len(out), complete


@dataclass
class ClassGraph:
    genus: int
    punctures: int
    metric: Metric
    nodes: list[CanonicalForm]
    adj: dict[CanonicalForm, dict[CanonicalForm, float]] = field(default_factory=dict)
    explored_edges: int = 0
    complete: bool = True

    def dijkstra(self, source: CanonicalForm) -> dict[CanonicalForm, float]:
        dist = {source: 0.0}
        heap = [(0.0, source)]
        done: set[CanonicalForm] = set()
        while heap:
            d, k = heapq.heappop(heap)
            if k in done:
                continue
            done.add(k)
            for w, c in self.adj[k].items():
                nd = d + c
                if nd < dist.get(w, math.inf) - TOL:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        return dist

    def is_connected(self) -> bool:
        return len(self.dijkstra(self.nodes[0])) == len(self.nodes)


def class_graph(genus: int, punctures: int, metric: Metric = "cubical",
                disjoint: Disjointness = "vertex", cap_classes: int | None = None,
                batch_cap: int = DEFAULT_BATCH_CAP, workers: int = 1) -> ClassGraph:
    """The quotient move graph with the cheapest edge between each pair of classes."""
    classes = enumerate_classes(genus, punctures, cap_classes)
    cg = ClassGraph(genus, punctures, metric, list(classes))
    jobs = [(classes[k], metric, disjoint, batch_cap) for k in cg.nodes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_expand, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_expand(j) for j in jobs]
    for k, (nbrs, count, ok) in zip(cg.nodes, results):
        nbrs.pop(k, None)
        cg.adj[k] = nbrs
        cg.explored_edges += count
        cg.complete &= ok
    return cg


def diameter(genus: int, punctures: int, metric: Metric = "cubical", quotient: bool = True,
             disjoint: Disjointness = "vertex", cap_classes: int | None = None,
             batch_cap: int = DEFAULT_BATCH_CAP, workers: int = 1) -> DiameterReport:
    """Exact quotient diameter by all-pairs shortest paths over the enumerated classes."""
    if not quotient:
        raise DomainError("the labelled pants graph is infinite; only quotient diameters are defined")
    cg = class_graph(genus, punctures, metric, disjoint, cap_classes, batch_cap, workers)
    best = (-1.0, cg.nodes[0], cg.nodes[0])
    for s in cg.nodes:
        dist = cg.dijkstra(s)
        if len(dist) != len(cg.nodes):
            raise PantsLabError(f"move graph at (g, n) = ({genus}, {punctures}) is disconnected")
        for t in cg.nodes:
            if dist[t] > best[0] + TOL:
                best = (dist[t], s, t)
    if not cg.complete:
        warnings.warn("batch cap hit; the diameter is an upper bound", IncompleteSearchWarning)
    return DiameterReport(genus, punctures, metric, best[0], (best[1], best[2]),
                          len(cg.nodes), cg.explored_edges, cg.complete)


def connectivity(genus: int, punctures: int, cap_classes: int | None = None) -> bool:
    """Whether single moves connect every class at ``(genus, punctures)``."""
    return class_graph(genus, punctures, "pants", cap_classes=cap_classes).is_connected()


# -- certified checks ----------------------------------------------------

@dataclass
class SandwichReport:
    exact: float
    cost: float
    unit_moves: int
    max_batch: int
    upper_ok: bool
    concavity_ok: bool

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.concavity_ok

    @property
    def ratio(self) -> float:
        return self.cost / self.exact if self.exact > 0 else (1.0 if self.cost == 0 else math.inf)


def sandwich_check(schedule: MoveSchedule, exact: float | None = None,
                   cap_nodes: int | None = None) -> SandwichReport:
    """Check ``exact distance <= schedule cost`` and ``cost >= sqrt(total unit moves)``.

    ``exact`` defaults to the cubical quotient distance between the two
    endpoints of the schedule.
    """
    schedule.verify()
    if exact is None:
        exact = distance(DistanceQuery(schedule.start, schedule.end, "cubical", True,
                                       schedule.disjoint, cap_nodes)).distance
    cost = schedule.total_cost
    units = schedule.unit_moves
    return SandwichReport(exact, cost, units, max((b.k for b in schedule.batches), default=0),
                          exact <= cost + 1e-9, cost >= math.sqrt(units) - 1e-9)


def tree_diameter(graph: PantsGraph) -> int:
    """Diameter (in edges) of a tree pants graph, leaves included."""
    if graph.genus != 0:
        raise DomainError("tree_diameter needs a genus-0 graph")

    def far(s: int) -> tuple[int, int]:
        dist = {s: 0}
        stack = [s]
        while stack:
            x = stack.pop()
            for h in graph.halves[x]:
                y = graph.owner[graph.partner[h]]
                if y not in dist:
                    dist[y] = dist[x] + 1
                    stack.append(y)
        v = max(dist, key=dist.get)
        return v, dist[v]

    a, _ = far(0)
    return far(a)[1]


def min_tree_diameter(n: int) -> int:
    """Smallest diameter of a trivalent tree with ``n >= 3`` leaves."""
    if n < 3:
        raise DomainError("need n >= 3")
    # a ball of radius r around a central vertex holds at most 3 * 2^(r-1) leaves,
    # around a central edge at most 2^r leaves on each side
    best = math.inf
    r = 1
    while best == math.inf:
        if 3 * 2 ** (r - 1) >= n:
            best = 2 * r
        if 2 * 2 ** r >= n:
            best = min(best, 2 * r + 1)
        r += 1
    return best


def diameter_proxy_lower_bound(genus: int, punctures: int) -> float:
    """``sqrt(n - log2 n + 3)``: the claimed cubical lower bound between extreme-diameter trees."""
    if genus != 0:
        raise DomainError("the diameter proxy is defined for the (0, n) family")
    if punctures < 4:
        raise DomainError("the diameter proxy needs n >= 4")
    n = punctures
    return math.sqrt(n - math.log2(n) + 3)


def diameter_gap_lower_bound(n: int) -> float:
    """Lower bound on the cubical distance linear tree -> minimum-diameter tree.

    Each elementary move changes the tree diameter by at most one, so a
    schedule with batch sizes ``k_i`` has ``sum k_i >= gap`` and then
    ``sum sqrt(k_i) >= sqrt(sum k_i) >= sqrt(gap)``.
    """
    gap = (n - 1) - min_tree_diameter(n)
    return math.sqrt(max(gap, 0))
