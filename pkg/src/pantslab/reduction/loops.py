"""Loop sorting, the tail iteration to a treelike graph, and treelike-to-treelike paths.

A *loop vertex* carries a loop; the *tail* is a treelike subgraph (all its
cycles are loops) hanging off the rest of the graph by one edge.  The core
is everything else.  Loop sorting takes a spanning tree of the core, melts
it into a line and then repeatedly merges neighbouring pendants of the
same type, loop-type (a loop vertex, the tail, or a merged branch of
those) or plain, until the loop-type pendants form one branch.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..errors import DomainError, InvalidGraphError, InvariantError
from ..moves import Move, MoveBatch, MoveSchedule
from ..pants_graph import PantsGraph, validate
from .cycles import CycleSet, find_cycles_view, genus_reduce_view
from .trees import melt_view, trim_view
from .work import WorkGraph

LOOP, PLAIN = "L", "N"


@dataclass
class PhaseRecord:
    phase: str
    batch_sizes: list[int]
    cost: float
    effective_genus: int


@dataclass
class ReductionTrace:
    """Per-phase log of a reduction run."""

    phases: list[PhaseRecord] = field(default_factory=list)
    effective_genus: list[int] = field(default_factory=list)
    cycle_counts: list[int] = field(default_factory=list)

    @property
    def total_cost(self) -> float:
        return sum(p.cost for p in self.phases)

    def rows(self) -> list[dict]:
        return [{"phase": p.phase, "batch_sizes": " ".join(map(str, p.batch_sizes)),
                 "cost": p.cost, "effective_genus": p.effective_genus} for p in self.phases]


# -- helpers -------------------------------------------------------------

def _side(w: WorkGraph, half: int) -> set[int]:
    """Vertices reached from ``owner[partner[half]]`` without crossing ``half``'s edge."""
    e = w.edge_of[half]
    start = w.nbr(half)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for h in w.halves[x]:
            if w.edge_of[h] == e:
                continue
            y = w.nbr(h)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _core(w: WorkGraph, tail: set[int]) -> set[int]:
    return {v for v in range(w.num_vertices)
            if w.valence[v] == 3 and v not in tail and not w.is_loop_vertex(v)}


def _spanning_tree(w: WorkGraph, core: set[int]) -> set[int]:
    """BFS tree edges of the core, rooted at a far vertex found by a double sweep."""
    def bfs(s: int):
        via = {s: -1}
        order = [s]
        for x in order:
            for h in w.halves[x]:
                y = w.nbr(h)
                if y in core and y not in via:
                    via[y] = w.edge_of[h]
                    order.append(y)
        return order, via

    order, _ = bfs(min(core))
    order, via = bfs(order[-1])
    if len(order) != len(core):
        raise InvariantError("core is disconnected")
    return {e for e in via.values() if e >= 0}


def _is_treelike(w: WorkGraph, genus: int) -> bool:
    return w.loop_count() == genus


def _effective_genus(w: WorkGraph, tail: set[int]) -> int:
    core = {v for v in range(w.num_vertices) if w.valence[v] == 3 and v not in tail}
    e_core = sum(1 for a, b in w.edges if w.owner[a] in core and w.owner[b] in core)
    return e_core - len(core) + 1 + (1 if tail else 0)


# -- loop sorting --------------------------------------------------------

@dataclass
class _Line:
    w: WorkGraph
    tree_edges: set[int]
    order: list[int]
    kind: dict[int, str]

    def __post_init__(self):
        self.members = set(self.order)

    def pendants(self, v: int) -> list[int]:
        return [h for h in self.w.halves[v]
                if self.w.edge_of[h] not in self.tree_edges or self.w.nbr(h) not in self.members]

    def toward(self, v: int, x: int) -> int:
        return next(h for h in self.w.halves[v]
                    if self.w.nbr(h) == x and self.w.edge_of[h] in self.tree_edges)

    def drop(self, v: int, keeper: int) -> None:
        # v left the line as a branch hanging from keeper
        self.order.remove(v)
        self.members.discard(v)
        h = self.toward(keeper, v)
        types = {self.kind[p] for p in self.pendants(v)}
        self.kind[h] = LOOP if types == {LOOP} else PLAIN if types == {PLAIN} else "?"
        if self.kind[h] == "?":
            raise InvariantError("merged branch mixes loop and plain pendants")

    def loop_pendants(self) -> list[int]:
        return [h for v in self.order for h in self.pendants(v) if self.kind[h] == LOOP]


def _free_end_merges(line: _Line) -> None:
    while len(line.order) >= 2:
        changed = False
        for end, nxt in ((line.order[0], line.order[1]), (line.order[-1], line.order[-2])):
            ps = line.pendants(end)
            if len(ps) == 2 and line.kind[ps[0]] == line.kind[ps[1]]:
                line.drop(end, nxt)
                changed = True
                break
        if not changed:
            return


def _consolidated(line: _Line) -> bool:
    loops = line.loop_pendants()
    if len(loops) <= 1:
        return True
    if len(line.order) == 1:
        return True
    plain = [h for v in line.order for h in line.pendants(v) if line.kind[h] == PLAIN]
    return not plain


def _merge_move(line: _Line, i: int) -> tuple[Move, int, int]:
    """Move merging the pendants of ``order[i]`` and ``order[i+1]``; returns (move, dropped, keeper)."""
    w = line.w
    order = line.order
    u, v = order[i], order[i + 1]
    e = w.edge_of[line.toward(u, v)]
    pu, pv = line.pendants(u), line.pendants(v)
    last = len(order) - 1
    if i == 0:
        # u is the left end with two pendants; keep the one matching v's pendant
        p = pv[0] if len(pv) == 1 else next(h for h in pv if line.kind[h] == LOOP)
        t = line.kind[p]
        other = next((h for h in pu if line.kind[h] != t), None)
        if other is None:
            other = pu[0]
        return Move(e, (other, p)), u, v
    if i + 1 == last:
        p = pu[0]
        t = line.kind[p]
        other = next((h for h in pv if line.kind[h] != t), pv[0])
        return Move(e, (p, other)), v, u
    prev = line.toward(u, order[i - 1])
    return Move(e, (prev, pv[0])), u, v


def _same_type(line: _Line, i: int) -> bool:
    order = line.order
    a = {line.kind[h] for h in line.pendants(order[i])}
    b = {line.kind[h] for h in line.pendants(order[i + 1])}
    return bool(a & b)


def sort_round(line: _Line) -> tuple[int, int]:
    """Blocks of four: fix alternating blocks, then merge same-type neighbours."""
    w = line.w
    order = line.order
    last = len(order) - 1
    swaps = []
    for b in range(0, len(order), 4):
        block = list(range(b, min(b + 4, len(order))))
        if len(block) < 4 or block[0] == 0 or block[-1] == last:
            continue
        ts = [line.kind[line.pendants(order[i])[0]] for i in block]
        if all(ts[k] != ts[k + 1] for k in range(3)):
            u, v = order[block[1]], order[block[2]]
            swaps.append(Move(w.edge_of[line.toward(u, v)],
                              (line.pendants(u)[0], line.pendants(v)[0])))
    w.apply(swaps)

    merges = []
    drops = []
    for b in range(0, len(order), 4):
        i = b
        stop = min(b + 4, len(order)) - 1
        while i < stop:
            if _same_type(line, i):
                move, gone, keeper = _merge_move(line, i)
                merges.append(move)
                drops.append((gone, keeper))
                i += 2
            else:
                i += 1
    w.apply(merges)
    for gone, keeper in drops:
        line.drop(gone, keeper)
    return len(swaps), len(merges)


def sort_loops_view(w: WorkGraph, tail: set[int]) -> tuple[set[int], list[int]]:
    """Gather every loop and the tail into one branch; returns ``(new tail, batch sizes)``."""
    core = _core(w, tail)
    if not core:
        return set(range(w.num_vertices)) - {v for v in range(w.num_vertices) if w.valence[v] == 1}, []
    tree_edges = _spanning_tree(w, core)
    kind: dict[int, str] = {}
    for v in core:
        for h in w.halves[v]:
            if w.edge_of[h] in tree_edges:
                continue
            x = w.nbr(h)
            kind[h] = LOOP if (x in tail or (x not in core and w.is_loop_vertex(x))) else PLAIN
    if not any(t == LOOP for t in kind.values()):
        raise DomainError("no loops to sort")

    sizes: list[int] = []
    state = trim_view(w, core, tree_edges)
    sizes += state.batch_sizes
    order, melt_sizes = melt_view(w, state)
    sizes += melt_sizes
    line = _Line(w, tree_edges, order, kind)
    # pendant halves never change identity except at merges, which relabel in drop()
    rounds = 0
    while True:
        _free_end_merges(line)
        if _consolidated(line):
            break
        s, m = sort_round(line)
        sizes += [s, m]
        rounds += 1
        if rounds > 4 * len(core) + 8:
            raise InvariantError("loop sorting does not terminate")

    loops = line.loop_pendants()
    if len(loops) == 1:
        new_tail = _side(w, loops[0])
    else:
        (v,) = line.order
        plain = [h for h in line.pendants(v) if line.kind[h] == PLAIN]
        if plain:
            cut = plain[0]
            new_tail = _side(w, w.partner[cut])
        else:
            new_tail = set(v for v in range(w.num_vertices) if w.valence[v] == 3)
    return new_tail, [s for s in sizes if s]


def split_edge(graph: PantsGraph) -> int | None:
    """An edge ``e`` with ``graph - e = A + B``, ``A`` treelike holding every loop and ``B`` loop-free."""
    w = WorkGraph(graph)
    loops = [e for e, (a, b) in enumerate(graph.edges) if graph.owner[a] == graph.owner[b]]
    if not loops:
        return None
    for e, (a, b) in enumerate(graph.edges):
        if e in loops or not graph.is_interior_edge(e):
            continue
        for h in (a, b):
            side = _side(w, h)
            if len(side) == graph.num_vertices:
                break
            e_in = sum(1 for c, d in graph.edges if graph.owner[c] in side and graph.owner[d] in side)
            n_loops = sum(1 for le in loops if graph.owner[graph.edges[le][0]] in side)
            rank = e_in - len(side) + 1
            if n_loops == len(loops) and rank == n_loops:
                return e
    return None


def sort_loops(graph: PantsGraph) -> MoveSchedule:
    """Schedule after which all loops sit in one treelike branch (see :func:`split_edge`)."""
    graph.checked()
    if not graph.loop_vertices:
        raise DomainError("graph has no loops")
    w = WorkGraph(graph)
    if w.loop_count() == graph.genus:
        return w.checkpoint()
    sort_loops_view(w, set())
    return w.checkpoint()


# -- full pipeline -------------------------------------------------------

def to_treelike(graph: PantsGraph, max_rounds: int = 10_000) -> tuple[MoveSchedule, ReductionTrace]:
    """Cycles to loops, loops into the tail, repeat until all genus sits in loops."""
    rep = validate(graph)
    if not rep.ok:
        raise InvalidGraphError("; ".join(rep.issues))
    genus = rep.genus
    w = WorkGraph(graph)
    trace = ReductionTrace(effective_genus=[genus])
    parts: list[MoveSchedule] = []
    tail: set[int] = set()
    for _ in range(max_rounds):
        if _is_treelike(w, genus):
            break
        allowed = {v for v in range(w.num_vertices) if w.valence[v] == 3 and v not in tail}
        cycles = find_cycles_view(w, allowed)
        trace.cycle_counts.append(len(cycles))
        sizes = genus_reduce_view(w, cycles)
        sched = w.checkpoint()
        parts.append(sched)
        trace.phases.append(PhaseRecord("genus_reduce", sizes, sched.total_cost, trace.effective_genus[-1]))
        if _is_treelike(w, genus):
            break
        tail, sizes = sort_loops_view(w, tail)
        sched = w.checkpoint()
        parts.append(sched)
        g_eff = _effective_genus(w, tail)
        trace.phases.append(PhaseRecord("loop_sort", sizes, sched.total_cost, g_eff))
        trace.effective_genus.append(g_eff)
    else:
        raise InvariantError(f"no treelike graph after {max_rounds} rounds")
    out = MoveSchedule(graph, [], graph)
    for p in parts:
        out = out + p
    return out, trace


def is_treelike(graph: PantsGraph) -> bool:
    return sum(1 for a, b in graph.edges if graph.owner[a] == graph.owner[b]) == graph.genus


# -- treelike to treelike ------------------------------------------------

def _linear_form(w: WorkGraph) -> tuple[list[int], dict[int, str], list[int]]:
    """Melt the loop-stripped tree into a line; ``kind`` marks loop and leaf pendants."""
    core = _core(w, set())
    tree_edges = {w.edge_of[h] for v in core for h in w.halves[v] if w.nbr(h) in core}
    kind = {h: (LOOP if w.valence[w.nbr(h)] == 3 else PLAIN)
            for v in core for h in w.halves[v] if w.nbr(h) not in core}
    state = trim_view(w, core, tree_edges)
    order, sizes = melt_view(w, state)
    return order, kind, state.batch_sizes + sizes


def _sort_types(w: WorkGraph, order: list[int], kind: dict[int, str]) -> list[int]:
    """Odd-even transposition sort moving loop pendants towards the start of the line."""
    sizes = []
    pos = {v: i for i, v in enumerate(order)}

    def pend(v):
        return [h for h in w.halves[v] if w.nbr(h) not in pos]

    def toward(v, x):
        return next(h for h in w.halves[v] if w.nbr(h) == x)

    idle = 0
    for r in range(2 * len(order) + 4):
        moves = []
        for i in range(r % 2, len(order) - 1, 2):
            u, v = order[i], order[i + 1]
            a = [h for h in pend(u) if kind[h] == PLAIN]
            b = [h for h in pend(v) if kind[h] == LOOP]
            if a and b:
                moves.append(Move(w.edge_of[toward(u, v)], (a[0], b[0])))
        idle = 0 if moves else idle + 1
        if idle == 2:
            break
        w.apply(moves)
        sizes.append(len(moves))
    return [s for s in sizes if s]


def _line_iso(wa: WorkGraph, la: list[int], wb: WorkGraph, lb: list[int],
              ka: dict[int, str], kb: dict[int, str]) -> dict[int, int] | None:
    """Half-edge map from graph b onto graph a matching two normalized lines."""
    for seq in (lb, lb[::-1]):
        hmap: dict[int, int] = {}
        ok = True
        sa, sb = set(la), set(seq)
        for i, (x, y) in enumerate(zip(la, seq)):
            nb = [la[i - 1] if i > 0 else None, la[i + 1] if i + 1 < len(la) else None]
            nbb = [seq[i - 1] if i > 0 else None, seq[i + 1] if i + 1 < len(seq) else None]
            for p, q in zip(nb, nbb):
                if p is not None:
                    hmap[next(h for h in wb.halves[y] if wb.nbr(h) == q)] = \
                        next(h for h in wa.halves[x] if wa.nbr(h) == p)
            pa = sorted((h for h in wa.halves[x] if wa.nbr(h) not in sa), key=lambda h: ka[h])
            pb = sorted((h for h in wb.halves[y] if wb.nbr(h) not in sb), key=lambda h: kb[h])
            if [ka[h] for h in pa] != [kb[h] for h in pb]:
                ok = False
                break
            for hb, ha in zip(pb, pa):
                hmap[hb] = ha
                hmap[wb.partner[hb]] = wa.partner[ha]
                if kb[hb] == LOOP:
                    xb, xa = wb.nbr(hb), wa.nbr(ha)
                    lb_ = [h for h in wb.halves[xb] if h != wb.partner[hb]]
                    la_ = [h for h in wa.halves[xa] if h != wa.partner[ha]]
                    for s, t in zip(lb_, la_):
                        hmap[s] = t
        if ok:
            return hmap
    return None


def treelike_to_treelike(a: PantsGraph, b: PantsGraph) -> MoveSchedule:
    """Schedule from ``a`` to a relabelling of ``b`` through the normalized line.

    With punctures the loop and leaf pendants are also sorted along the line
    by odd-even transposition.
    """
    for x in (a, b):
        x.checked()
        if not is_treelike(x):
            raise DomainError("input is not treelike")
    if (a.genus, a.punctures) != (b.genus, b.punctures):
        raise DomainError("treelike graphs differ in (g, n)")
    if a == b:
        return MoveSchedule(a, [], a)
    wa, wb = WorkGraph(a), WorkGraph(b)
    la, ka, _ = _linear_form(wa)
    lb, kb, _ = _linear_form(wb)
    if a.punctures:
        _sort_types(wa, la, ka)
        _sort_types(wb, lb, kb)
    sa, sb = wa.checkpoint(), wb.checkpoint()
    hmap = _line_iso(wa, la, wb, lb, ka, kb)
    if hmap is None or len(hmap) != len(a.owner):
        raise InvariantError("normalized lines are not isomorphic")
    back = []
    for batch in reversed(sb.batches):
        moves = []
        for m in batch.moves:
            x, y = b.edges[m.edge]
            e = sa.end.edge_of[hmap[x]]
            moves.append(Move(e, (hmap[m.swap[0]], hmap[m.swap[1]])))
        back.append(MoveBatch(moves))
    return sa + MoveSchedule(sa.end, back)
