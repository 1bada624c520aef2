"""Mutable working copy of a pants graph that records the batches applied to it."""

from __future__ import annotations

from ..errors import InvariantError, OverlappingBatchError
from ..moves import Move, MoveBatch, MoveSchedule
from ..pants_graph import PantsGraph


class WorkGraph:
    """Owner table plus per-vertex half-edge lists, updated in place.

    Every call to :meth:`apply` is one batch.  :meth:`checkpoint` closes a
    phase: the batches recorded since the previous checkpoint are replayed
    on an immutable graph and compared with the working state.
    """

    def __init__(self, graph: PantsGraph):
        self.num_vertices = graph.num_vertices
        self.partner = graph.partner
        self.edges = graph.edges
        self.edge_of = graph.edge_of
        self.owner = list(graph.owner)
        self.halves = [list(hs) for hs in graph.halves]
        self.valence = graph.valence
        self._phase_start = graph
        self._pending: list[MoveBatch] = []

    def nbr(self, h: int) -> int:
        return self.owner[self.partner[h]]

    def half_at(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return a if self.owner[a] == v else b

    def endpoints(self, e: int) -> tuple[int, int]:
        a, b = self.edges[e]
        return self.owner[a], self.owner[b]

    def is_loop_vertex(self, v: int) -> bool:
        return self.valence[v] == 3 and any(self.nbr(h) == v for h in self.halves[v])

    def loop_count(self) -> int:
        return sum(1 for a, b in self.edges if self.owner[a] == self.owner[b])

    def move(self, e: int, a: int, b: int) -> Move:
        return Move(e, (a, b))

    def apply(self, moves: list[Move]) -> MoveBatch | None:
        """Apply ``moves`` as one vertex-disjoint batch; empty lists are skipped."""
        if not moves:
            return None
        used: dict[int, Move] = {}
        for m in moves:
            u, v = self.endpoints(m.edge)
            for x in (u, v):
                if x in used:
                    raise OverlappingBatchError(
                        f"moves on edges {used[x].edge} and {m.edge} share vertex {x}", (used[x], m))
                used[x] = m
        for m in moves:
            a, b = m.swap
            u, v = self.owner[a], self.owner[b]
            self.owner[a], self.owner[b] = v, u
            self.halves[u].remove(a)
            self.halves[v].remove(b)
            self.halves[u].append(b)
            self.halves[v].append(a)
            self.halves[u].sort()
            self.halves[v].sort()
        batch = MoveBatch(moves)
        self._pending.append(batch)
        return batch

    def snapshot(self) -> PantsGraph:
        return PantsGraph(self.num_vertices, tuple(self.owner), self.partner)

    def checkpoint(self) -> MoveSchedule:
        """Schedule of the current phase, replay-checked against the working state."""
        sched = MoveSchedule(self._phase_start, self._pending)
        if sched.end != self.snapshot():
            raise InvariantError("phase schedule does not replay to the working graph")
        self._phase_start = sched.end
        self._pending = []
        return sched


def concat(start: PantsGraph, parts: list[MoveSchedule]) -> MoveSchedule:
    out = MoveSchedule(start, [], start)
    for p in parts:
        out = out + p
    return out
