"""Tree normalization: trimming into a branching tree, then melting into a line.

Both phases work on a *tree view* of a working graph: a set of active
interior vertices and a set of tree edges joining them into a tree.  Every
other half-edge at an active vertex is a pendant and behaves like a leaf,
whatever hangs behind it.  For a genus-0 graph the active set is all
interior vertices; loop sorting reuses the same code on a spanning tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DomainError, InvariantError
from ..moves import Move, MoveSchedule
from ..pants_graph import PantsGraph, validate
from .work import WorkGraph


@dataclass
class TrimState:
    """Outcome of trimming.

    ``levels[i]`` is the set of Y-branch centres removed at stage ``i``,
    ``root`` the last remaining vertex.  ``leaf_counts[i]`` is the number
    of leaves of the stage-``i`` tree and ``isolated[i]`` the number of
    isolated leaves after that stage's pairing.
    """

    graph: PantsGraph
    active: frozenset[int]
    tree_edges: frozenset[int]
    levels: list[list[int]] = field(default_factory=list)
    root: int = -1
    leaf_counts: list[int] = field(default_factory=list)
    isolated: list[int] = field(default_factory=list)
    batch_sizes: list[int] = field(default_factory=list)
    schedule: MoveSchedule | None = None

    @property
    def isolated_violations(self) -> list[int]:
        """Stages where isolated leaves exceed ``floor(m/2) - 1``."""
        return [i for i, (m, k) in enumerate(zip(self.leaf_counts, self.isolated))
                if k >= 0 and k > m // 2 - 1]

    @property
    def shrink_violations(self) -> list[int]:
        """Stages where the leaf count fails ``m_{i+1} <= 3/4 m_i``."""
        return [i for i in range(len(self.leaf_counts) - 1)
                if 4 * self.leaf_counts[i + 1] > 3 * self.leaf_counts[i]]

    @property
    def cost(self) -> float:
        return self.schedule.total_cost if self.schedule else 0.0


def _forest_matching(nodes: list[int], adj: dict[int, list[int]]) -> list[tuple[int, int]]:
    # maximum matching on a forest: repeatedly match a degree-1 vertex to its neighbour
    deg = {v: len(adj[v]) for v in nodes}
    alive = set(nodes)
    stack = sorted((v for v in nodes if deg[v] == 1), reverse=True)
    pairs = []
    while stack:
        v = stack.pop()
        if v not in alive or deg[v] != 1:
            continue
        w = next(x for x in adj[v] if x in alive)
        pairs.append((v, w))
        for x in (v, w):
            alive.discard(x)
            for y in adj[x]:
                if y in alive:
                    deg[y] -= 1
                    if deg[y] == 1:
                        stack.append(y)
    return pairs


def trim_view(w: WorkGraph, active: set[int], tree_edges: set[int]) -> TrimState:
    """Trim the tree view in place on ``w``; batches are recorded on ``w``."""
    state = TrimState(w.snapshot(), frozenset(active), frozenset(tree_edges))
    alive = set(active)

    def leaf_halves(v: int) -> list[int]:
        return [h for h in w.halves[v] if w.edge_of[h] not in tree_edges or w.nbr(h) not in alive]

    while len(alive) > 1:
        m = sum(len(leaf_halves(v)) for v in alive)
        state.leaf_counts.append(m)
        if len(alive) == 2:
            v = max(alive)
            state.levels.append([v])
            state.isolated.append(-1)
            state.batch_sizes.append(0)
            alive.discard(v)
            continue
        bases = sorted(v for v in alive if len(leaf_halves(v)) == 1)
        base_set = set(bases)
        adj = {v: [w.nbr(h) for h in w.halves[v]
                   if w.edge_of[h] in tree_edges and w.nbr(h) in base_set] for v in bases}
        moves: list[Move] = []
        for u, x in _forest_matching(bases, adj):
            e_half = next(h for h in w.halves[u] if w.nbr(h) == x and w.edge_of[h] in tree_edges)
            e = w.edge_of[e_half]
            a = next(h for h in w.halves[u] if h != e_half and h not in leaf_halves(u))
            y = leaf_halves(x)[0]
            moves.append(Move(e, (a, y)))
        w.apply(moves)
        state.batch_sizes.append(len(moves))
        counts = {v: len(leaf_halves(v)) for v in alive}
        state.isolated.append(sum(1 for k in counts.values() if k == 1))
        cherries = sorted(v for v, k in counts.items() if k == 2)
        if not cherries:
            raise InvariantError("trim stage produced no Y-branch")
        state.levels.append(cherries)
        alive.difference_update(cherries)
    state.root = next(iter(alive))
    return state


def melt_view(w: WorkGraph, state: TrimState) -> tuple[list[int], list[int]]:
    """Melt a trimmed tree view into a line; returns ``(line, batch sizes)``."""
    active = state.active
    tree_edges = state.tree_edges
    level = {state.root: len(state.levels)}
    for i, vs in enumerate(state.levels):
        for v in vs:
            level[v] = i
    line = [state.root]
    on_line = {state.root}

    def inner(v: int) -> list[int]:
        # half-edges of v leading to an active vertex off the line
        return [h for h in w.halves[v]
                if w.edge_of[h] in tree_edges and w.nbr(h) in active and w.nbr(h) not in on_line]

    def extend() -> None:
        for side in (-1, 0):
            while True:
                hs = inner(line[side])
                if not hs:
                    break
                h = max(hs, key=lambda h: (level[w.nbr(h)], -w.nbr(h)))
                x = w.nbr(h)
                on_line.add(x)
                if side == -1:
                    line.append(x)
                else:
                    line.insert(0, x)

    sizes = []
    for j in range(len(state.levels) - 1, -1, -1):
        extend()
        moves = []
        inserts = []
        for i in range(1, len(line) - 1):
            vp = line[i]
            hs = inner(vp)
            if not hs:
                continue
            h = hs[0]
            v = w.nbr(h)
            if level[v] != j:
                continue
            nxt = next(x for x in w.halves[vp] if w.nbr(x) == line[i + 1] and w.edge_of[x] in tree_edges)
            c = min(x for x in w.halves[v] if x != w.partner[h])
            moves.append(Move(w.edge_of[h], (nxt, c)))
            inserts.append((i, v))
        w.apply(moves)
        sizes.append(len(moves))
        for i, v in reversed(inserts):
            line.insert(i + 1, v)
            on_line.add(v)
    extend()
    if len(on_line) != len(active):
        raise InvariantError(f"melting left {len(active) - len(on_line)} vertices off the line")
    return line, sizes


def _tree_view(graph: PantsGraph) -> tuple[set[int], set[int]]:
    rep = validate(graph)
    if not rep.ok:
        from ..errors import InvalidGraphError
        raise InvalidGraphError("; ".join(rep.issues))
    if rep.genus != 0:
        raise DomainError(f"expected a tree, got genus {rep.genus}")
    active = set(graph.interior_vertices)
    edges = {e for e in range(len(graph.edges)) if graph.is_interior_edge(e)}
    return active, edges


def trim(tree: PantsGraph) -> tuple[PantsGraph, TrimState, MoveSchedule]:
    """Trim a genus-0 graph; returns ``(S, state, schedule)``."""
    active, edges = _tree_view(tree)
    w = WorkGraph(tree)
    state = trim_view(w, active, edges)
    state.schedule = w.checkpoint()
    state.graph = state.schedule.end
    return state.graph, state, state.schedule


def melt(state: TrimState) -> MoveSchedule:
    """Melt the trimmed tree ``state.graph`` into the linear tree."""
    if state.root < 0:
        raise DomainError("trim state has no root; run trim first")
    w = WorkGraph(state.graph)
    melt_view(w, state)
    return w.checkpoint()


def to_linear(tree: PantsGraph) -> MoveSchedule:
    """Trim then melt: a schedule from ``tree`` to the linear tree."""
    active, edges = _tree_view(tree)
    if all(sum(1 for _, e in tree.interior_adjacency[v] if e in edges) <= 2 for v in active):
        # already a caterpillar
        return WorkGraph(tree).checkpoint()
    _, state, s1 = trim(tree)
    return s1 + melt(state)
