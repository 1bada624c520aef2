"""Disjoint short cycles and their simultaneous shortening into loops."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import DomainError, InvalidGraphError, InvariantError
from ..moves import Move, MoveSchedule
from ..pants_graph import PantsGraph, validate
from .work import WorkGraph

# below this genus the greedy count is only reported against the target
G_MIN = 8


@dataclass
class CycleSet:
    """Pairwise edge-disjoint cycles, each an ordered list of edge ids."""

    cycles: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]

    def is_disjoint(self) -> bool:
        seen: set[int] = set()
        for c in self.cycles:
            if seen & set(c):
                return False
            seen.update(c)
        return True


def cycle_count_target(genus: int) -> float:
    """``(log 2 / 2) g / log g``."""
    return math.log(2) / 2 * genus / math.log(genus)


def _adjacency(w: WorkGraph, allowed: set[int]):
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in allowed}
    ends: dict[int, tuple[int, int]] = {}
    for e, (a, b) in enumerate(w.edges):
        u, v = w.owner[a], w.owner[b]
        if u in allowed and v in allowed:
            ends[e] = (u, v)
            adj[u].append((v, e))
            if u != v:
                adj[v].append((u, e))
    return adj, ends


def _shortest_from(root: int, adj, deleted: set[int]):
    """Best closing edge of a BFS from ``root``: ``(length, x, y, e, via, parent)``."""
    dist = {root: 0}
    via = {root: -1}
    parent = {root: root}
    order = [root]
    best = (math.inf, -1, -1, -1)
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        if 2 * dist[x] + 1 >= best[0]:
            break
        for y, e in adj[x]:
            if e in deleted or e == via[x]:
                continue
            if y in dist:
                if via[y] == e:
                    continue
                cand = dist[x] + dist[y] + 1
                if cand < best[0]:
                    best = (cand, x, y, e)
            else:
                dist[y] = dist[x] + 1
                via[y] = e
                parent[y] = x
                order.append(y)
    return best, via, parent


def _extract(x: int, y: int, e: int, via, parent) -> list[int]:
    # cycle through the closing edge e, cut at the lowest common ancestor of x and y
    up_x = [x]
    while up_x[-1] != parent[up_x[-1]]:
        up_x.append(parent[up_x[-1]])
    on_x = {v: i for i, v in enumerate(up_x)}
    up_y = [y]
    while up_y[-1] not in on_x:
        up_y.append(parent[up_y[-1]])
    lca = up_y[-1]
    path_x = [via[v] for v in up_x[:on_x[lca]]]
    path_y = [via[v] for v in up_y[:-1]]
    return list(reversed(path_x)) + [e] + path_y


def find_cycles_view(w: WorkGraph, allowed: Iterable[int]) -> CycleSet:
    """Greedy shortest-cycle-then-delete on the subgraph spanned by ``allowed``.

    Per-vertex BFS closing lengths only grow as edges are deleted, so stale
    heap entries are lower bounds and the first fresh minimum is the girth.
    """
    allowed = set(allowed)
    adj, ends = _adjacency(w, allowed)
    deleted: set[int] = set()
    heap = [(0, v) for v in sorted(allowed)]
    out = CycleSet()
    while heap:
        _, v = heapq.heappop(heap)
        best, via, parent = _shortest_from(v, adj, deleted)
        if best[0] == math.inf:
            continue
        if heap and best[0] > heap[0][0]:
            heapq.heappush(heap, (best[0], v))
            continue
        cyc = _extract(best[1], best[2], best[3], via, parent)
        out.cycles.append(cyc)
        _delete(cyc, adj, ends, deleted)
        heapq.heappush(heap, (len(cyc), v))
    return out


def _delete(edges: list[int], adj, ends, deleted: set[int]) -> None:
    # delete edges, then strip everything outside the 2-core (no cycle passes there)
    deleted.update(edges)
    stack = [x for e in edges for x in ends[e]]
    while stack:
        x = stack.pop()
        live = [(y, e) for y, e in adj[x] if e not in deleted]
        adj[x] = live
        if len(live) == 1 and live[0][0] != x:
            y, e = live[0]
            deleted.add(e)
            adj[x] = []
            stack.append(y)


def find_disjoint_cycles(graph: PantsGraph) -> CycleSet:
    """Pairwise edge-disjoint cycles of the interior graph, shortest first."""
    rep = validate(graph)
    if not rep.ok:
        raise InvalidGraphError("; ".join(rep.issues))
    if rep.genus == 0:
        raise DomainError("a forest has no cycles")
    return find_cycles_view(WorkGraph(graph), graph.interior_vertices)


def _cycle_vertices(w: WorkGraph, cyc: list[int]) -> list[int]:
    # c_i is the vertex shared by edges cyc[i-1] and cyc[i]
    if len(cyc) == 1:
        return [w.endpoints(cyc[0])[0]]
    first = set(w.endpoints(cyc[0]))
    last = set(w.endpoints(cyc[-1]))
    if len(cyc) == 2:
        start = w.endpoints(cyc[0])[0]
    else:
        (start,) = first & last
    verts = [start]
    for e in cyc[:-1]:
        u, v = w.endpoints(e)
        verts.append(v if u == verts[-1] else u)
    return verts


def shorten_stage(w: WorkGraph, cycles: CycleSet) -> int:
    """One simultaneous shortening stage; every cycle of length ``l`` keeps ``l - l // 2`` edges."""
    moves: list[Move] = []
    new_cycles = []
    for cyc in cycles.cycles:
        l = len(cyc)
        if l == 1:
            new_cycles.append(cyc)
            continue
        verts = _cycle_vertices(w, cyc)
        chosen = set(range(0, 2 * (l // 2), 2))
        on_cycle = set(cyc)
        for i in sorted(chosen):
            ci, cj = verts[i], verts[(i + 1) % l]
            back = w.half_at(cyc[i - 1], ci)
            off = next(h for h in w.halves[cj] if w.edge_of[h] not in on_cycle)
            moves.append(Move(cyc[i], (back, off)))
        new_cycles.append([e for i, e in enumerate(cyc) if i not in chosen])
    w.apply(moves)
    for old, new in zip(cycles.cycles, new_cycles):
        if len(new) != len(old) - len(old) // 2:
            raise InvariantError("cycle length did not map to l - floor(l/2)")
        u, v = w.endpoints(new[0])
        if len(new) == 1 and u != v:
            raise InvariantError(f"edge {new[0]} should have become a loop")
    cycles.cycles = new_cycles
    return len(moves)


def genus_reduce_view(w: WorkGraph, cycles: CycleSet) -> list[int]:
    sizes = []
    while any(len(c) > 1 for c in cycles.cycles):
        sizes.append(shorten_stage(w, cycles))
    return sizes


def genus_reduce(graph: PantsGraph, cycles: CycleSet) -> MoveSchedule:
    """Shrink every cycle of ``cycles`` to a loop by simultaneous stages."""
    w = WorkGraph(graph.checked())
    if not cycles.is_disjoint():
        raise InvalidGraphError("cycles share an edge")
    for cyc in cycles.cycles:
        if not cyc:
            raise InvalidGraphError("empty cycle")
        verts = _cycle_vertices(w, cyc)
        for i, e in enumerate(cyc):
            if set(w.endpoints(e)) != {verts[i], verts[(i + 1) % len(cyc)]}:
                raise InvalidGraphError(f"edges {cyc} do not form a cycle in order")
    work = CycleSet([list(c) for c in cycles.cycles])
    genus_reduce_view(w, work)
    return w.checkpoint()
