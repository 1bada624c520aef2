"""Elementary moves, simultaneous batches and schedules in the cubical pants graph.

An elementary move acts on an interior non-loop edge ``e = (u, v)``: one
half-edge at ``u`` other than ``e`` and one at ``v`` other than ``e`` trade
owners.  This is the nearest-neighbour interchange across ``e``; the union of
the two pairs of pants along ``e`` is a four-holed sphere and the swap picks
the other curve separating its boundary in two pairs.  Partners never change,
so edge ids are stable along a schedule.

A batch of ``k`` moves with pairwise vertex-disjoint supports costs ``sqrt(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal

from .errors import MalformedMoveError, OverlappingBatchError, ReplayError
from .pants_graph import PantsGraph

Disjointness = Literal["vertex", "edge"]

SCHEDULE_FORMAT = "pantslab-schedule/1"


@dataclass(frozen=True, order=True)
class Move:
    """Swap half-edges ``swap[0]`` and ``swap[1]`` across edge ``edge``."""

    edge: int
    swap: tuple[int, int]

    def mirrored(self) -> "Move":
        return Move(self.edge, (self.swap[1], self.swap[0]))


def _check(graph: PantsGraph, move: Move) -> tuple[int, int]:
    if not 0 <= move.edge < len(graph.edges):
        raise MalformedMoveError(f"no edge {move.edge}")
    h0, h1 = graph.edges[move.edge]
    u, v = graph.owner[h0], graph.owner[h1]
    if u == v:
        raise MalformedMoveError(f"edge {move.edge} is a loop")
    if graph.valence[u] != 3 or graph.valence[v] != 3:
        raise MalformedMoveError(f"edge {move.edge} is a leaf edge")
    a, b = move.swap
    m = len(graph.owner)
    if not (0 <= a < m and 0 <= b < m):
        raise MalformedMoveError(f"swap {move.swap} out of range")
    if graph.owner[a] == v and graph.owner[b] == u:
        a, b = b, a
    if graph.owner[a] != u or graph.owner[b] != v or a == h0 or b == h1:
        raise MalformedMoveError(
            f"swap {move.swap} must pick one non-edge half-edge at each end of edge {move.edge}")
    return u, v


def support(graph: PantsGraph, move: Move) -> frozenset[int]:
    return frozenset(_check(graph, move))


def apply(graph: PantsGraph, move: Move) -> PantsGraph:
    """Apply one elementary move; genus and punctures are preserved."""
    _check(graph, move)
    owner = list(graph.owner)
    a, b = move.swap
    owner[a], owner[b] = owner[b], owner[a]
    return PantsGraph(graph.num_vertices, tuple(owner), graph.partner)


def moves_on_edge(graph: PantsGraph, e: int, *, all_choices: bool = False) -> list[Move]:
    """Moves on edge ``e``.

    The four half-edge choices give two distinct graphs (swapping ``a, b`` or
    their complements yields the same pair partition); by default one move per
    outcome is returned.
    """
    h0, h1 = graph.edges[e]
    u, v = graph.owner[h0], graph.owner[h1]
    at_u = [h for h in graph.halves[u] if h != h0]
    at_v = [h for h in graph.halves[v] if h != h1]
    firsts = at_u if all_choices else at_u[:1]
    return [Move(e, (a, b)) for a in firsts for b in at_v]


def all_moves(graph: PantsGraph, *, all_choices: bool = False) -> list[Move]:
    return [m for e in graph.movable_edges for m in moves_on_edge(graph, e, all_choices=all_choices)]


def neighbors(graph: PantsGraph, quotient: bool = False):
    """Graphs one elementary move away.

    Without ``quotient`` a set of labelled graphs (all four choices per edge);
    with it a dict from canonical form to one representative.
    """
    if not quotient:
        return {apply(graph, m) for m in all_moves(graph, all_choices=True)}
    from .canonical import canonicalize
    out = {}
    for m in all_moves(graph):
        h = apply(graph, m)
        out.setdefault(canonicalize(h), h)
    return out


# -- batches -------------------------------------------------------------

@dataclass(frozen=True)
class MoveBatch:
    """A set of moves performed simultaneously, stored in edge order."""

    moves: tuple[Move, ...]

    def __init__(self, moves: Iterable[Move]):
        object.__setattr__(self, "moves", tuple(sorted(moves)))

    @property
    def k(self) -> int:
        return len(self.moves)

    @property
    def cost(self) -> float:
        return math.sqrt(len(self.moves))

    def to_list(self) -> list[list[int]]:
        return [[m.edge, m.swap[0], m.swap[1]] for m in self.moves]

    @classmethod
    def from_list(cls, data) -> "MoveBatch":
        return cls(Move(int(e), (int(a), int(b))) for e, a, b in data)


def apply_batch(graph: PantsGraph, batch: MoveBatch, disjoint: Disjointness = "vertex") -> PantsGraph:
    """Apply all moves of ``batch``.

    ``vertex``: supports must be pairwise vertex-disjoint and the moves then
    commute.  ``edge``: edges must be distinct and the moves are replayed in
    edge order, each checked against the graph at its turn.
    """
    if disjoint == "edge":
        seen: dict[int, Move] = {}
        for m in batch.moves:
            if m.edge in seen:
                raise OverlappingBatchError(f"edge {m.edge} used twice", (seen[m.edge], m))
            seen[m.edge] = m
        for m in batch.moves:
            graph = apply(graph, m)
        return graph
    if disjoint != "vertex":
        raise ValueError(f"unknown disjointness {disjoint!r}")
    used: dict[int, Move] = {}
    for m in batch.moves:
        for x in _check(graph, m):
            if x in used:
                raise OverlappingBatchError(
                    f"moves on edges {used[x].edge} and {m.edge} share vertex {x}", (used[x], m))
            used[x] = m
    owner = list(graph.owner)
    for m in batch.moves:
        a, b = m.swap
        owner[a], owner[b] = owner[b], owner[a]
    return PantsGraph(graph.num_vertices, tuple(owner), graph.partner)


def enumerate_batches(graph: PantsGraph, disjoint: Disjointness = "vertex",
                      cap: int = 2 ** 20) -> tuple[list[tuple[MoveBatch, PantsGraph]], bool]:
    """Every non-empty admissible batch with its result.

    One swap per distinct outcome is used for every edge.  Returns
    ``(batches, complete)``; ``complete`` is False when ``cap`` batches were
    produced before the enumeration finished.
    """
    out: list[tuple[MoveBatch, PantsGraph]] = []
    edges = graph.movable_edges

    if disjoint == "vertex":
        choices = {e: moves_on_edge(graph, e) for e in edges}
        ends = {e: graph.endpoints(e) for e in edges}

        def rec(i: int, used: frozenset, chosen: list[Move]) -> bool:
            if i == len(edges):
                if chosen:
                    if len(out) >= cap:
                        return False
                    b = MoveBatch(chosen)
                    out.append((b, apply_batch(graph, b)))
                return True
            if not rec(i + 1, used, chosen):
                return False
            e = edges[i]
            u, v = ends[e]
            if u in used or v in used:
                return True
            for m in choices[e]:
                if not rec(i + 1, used | {u, v}, chosen + [m]):
                    return False
            return True

        return out, rec(0, frozenset(), [])

    def rec_edge(i: int, g: PantsGraph, chosen: list[Move]) -> bool:
        if i == len(edges):
            if chosen:
                if len(out) >= cap:
                    return False
                out.append((MoveBatch(chosen), g))
            return True
        if not rec_edge(i + 1, g, chosen):
            return False
        e = edges[i]
        if g.is_loop(e) or not g.is_interior_edge(e):
            return True
        for m in moves_on_edge(g, e):
            if not rec_edge(i + 1, apply(g, m), chosen + [m]):
                return False
        return True

    return out, rec_edge(0, graph, [])


# -- schedules -----------------------------------------------------------

@dataclass
class MoveSchedule:
    """A path in the cubical pants graph: batches replayed from ``start``."""

    start: PantsGraph
    batches: list[MoveBatch] = field(default_factory=list)
    end: PantsGraph | None = None
    disjoint: Disjointness = "vertex"

    def __post_init__(self):
        if self.end is None:
            self.end = self.replay()

    @property
    def total_cost(self) -> float:
        return sum(b.cost for b in self.batches)

    @property
    def unit_moves(self) -> int:
        return sum(b.k for b in self.batches)

    def replay(self) -> PantsGraph:
        g = self.start
        for i, b in enumerate(self.batches):
            try:
                g = apply_batch(g, b, self.disjoint)
            except MalformedMoveError as exc:
                raise ReplayError(f"batch {i} does not apply: {exc}") from exc
        return g

    def verify(self) -> None:
        if self.replay() != self.end:
            raise ReplayError("replayed graph differs from the recorded end graph")

    def __add__(self, other: "MoveSchedule") -> "MoveSchedule":
        if other.start != self.end:
            raise ReplayError("schedules do not chain: end and start differ")
        return MoveSchedule(self.start, self.batches + other.batches, other.end, self.disjoint)

    def to_dict(self) -> dict:
        return {
            "format": SCHEDULE_FORMAT,
            "disjoint": self.disjoint,
            "start": self.start.to_dict(),
            "batches": [{"moves": b.to_list(), "cost": b.cost} for b in self.batches],
            "end": self.end.to_dict(),
            "total_cost": self.total_cost,
            "unit_moves": self.unit_moves,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MoveSchedule":
        return cls(PantsGraph.from_dict(data["start"]),
                   [MoveBatch.from_list(b["moves"]) for b in data["batches"]],
                   PantsGraph.from_dict(data["end"]),
                   data.get("disjoint", "vertex"))


def schedule_cost(schedule: MoveSchedule) -> tuple[float, int]:
    """``(sum sqrt(k_i), sum k_i)`` after checking that the schedule replays."""
    schedule.verify()
    return schedule.total_cost, schedule.unit_moves
