"""Half-edge multigraphs with vertices of valence 1 or 3.

A pants decomposition of a surface of genus ``g`` with ``n`` punctures is
recorded as a connected graph with one valence-3 vertex per pair of pants,
one edge per curve, and one valence-1 vertex per puncture.  Loops and
parallel edges are ordinary here, which is why the representation is
half-edge based: every half-edge has an owner vertex and a partner
half-edge, and the partner map is a fixed-point free involution.

Edges are indexed by sorting the pairs ``(h, partner[h])`` with
``h < partner[h]`` on ``h``.  Moves only change owners, never partners, so
edge ids survive every move and schedules can refer to them.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidGraphError

INFINITE_GIRTH = math.inf

JSON_FORMAT = "pantslab-graph/1"


@dataclass(frozen=True)
class PantsGraph:
    """Immutable half-edge multigraph.

    ``owner[h]`` is the vertex carrying half-edge ``h`` and ``partner[h]``
    the half-edge it is glued to.  Nothing is validated on construction;
    call :func:`validate` or :meth:`checked`.
    """

    num_vertices: int
    owner: tuple[int, ...]
    partner: tuple[int, ...]

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Sequence[int]]) -> "PantsGraph":
        """Build a graph from ``(u, v)`` pairs; edge ``i`` gets half-edges ``2i`` and ``2i+1``."""
        owner: list[int] = []
        partner: list[int] = []
        for i, (u, v) in enumerate(edges):
            owner.extend((u, v))
            partner.extend((2 * i + 1, 2 * i))
        return cls(num_vertices, tuple(owner), tuple(partner))

    @classmethod
    def from_pairs(cls, num_vertices: int, pairs: Iterable[Sequence[int]],
                   owner: Sequence[int]) -> "PantsGraph":
        partner = [-1] * len(owner)
        for a, b in pairs:
            if partner[a] != -1 or partner[b] != -1:
                raise InvalidGraphError(f"half-edge paired twice in ({a}, {b})")
            partner[a] = b
            partner[b] = a
        if -1 in partner:
            raise InvalidGraphError(f"half-edge {partner.index(-1)} is unpaired")
        return cls(num_vertices, tuple(owner), tuple(partner))

    def checked(self) -> "PantsGraph":
        """Return ``self`` or raise :class:`InvalidGraphError` listing every violation."""
        report = validate(self)
        if not report.ok:
            raise InvalidGraphError("; ".join(report.issues))
        return self

    # -- derived structure ------------------------------------------------

    @property
    def num_half_edges(self) -> int:
        return len(self.owner)

    @cached_property
    def halves(self) -> tuple[tuple[int, ...], ...]:
        """Half-edges at each vertex, in increasing id order."""
        out: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for h, v in enumerate(self.owner):
            out[v].append(h)
        return tuple(tuple(hs) for hs in out)

    @cached_property
    def valence(self) -> tuple[int, ...]:
        return tuple(len(hs) for hs in self.halves)

    @cached_property
    def leaf_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.valence) if d == 1)

    @cached_property
    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.valence) if d == 3)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((h, p) for h, p in enumerate(self.partner) if h < p)

    @cached_property
    def edge_of(self) -> tuple[int, ...]:
        out = [0] * len(self.owner)
        for i, (a, b) in enumerate(self.edges):
            out[a] = out[b] = i
        return tuple(out)

    def endpoints(self, e: int) -> tuple[int, int]:
        a, b = self.edges[e]
        return self.owner[a], self.owner[b]

    def is_loop(self, e: int) -> bool:
        u, v = self.endpoints(e)
        return u == v

    def is_interior_edge(self, e: int) -> bool:
        u, v = self.endpoints(e)
        return self.valence[u] == 3 and self.valence[v] == 3

    @cached_property
    def movable_edges(self) -> tuple[int, ...]:
        """Interior non-loop edges: the ones an elementary move can act on."""
        return tuple(e for e in range(len(self.edges))
                     if self.is_interior_edge(e) and not self.is_loop(e))

    @cached_property
    def loop_vertices(self) -> tuple[int, ...]:
        """Vertices carrying a loop (each is the base of a length-1 cycle)."""
        return tuple(sorted({self.owner[a] for a, b in self.edges if self.owner[a] == self.owner[b]}))

    @property
    def punctures(self) -> int:
        return len(self.leaf_vertices)

    @property
    def genus(self) -> int:
        v_int = len(self.interior_vertices)
        e_int = sum(1 for e in range(len(self.edges)) if self.is_interior_edge(e))
        return e_int - v_int + 1

    @cached_property
    def interior_adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each vertex, ``(neighbour, edge id)`` over interior edges (loops listed once)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for e, (a, b) in enumerate(self.edges):
            u, v = self.owner[a], self.owner[b]
            if self.valence[u] != 3 or self.valence[v] != 3:
                continue
            adj[u].append((v, e))
            if u != v:
                adj[v].append((u, e))
        return tuple(tuple(x) for x in adj)

    # -- relabeling -------------------------------------------------------

    def relabel(self, vertex_perm: Sequence[int], half_perm: Sequence[int]) -> "PantsGraph":
        """Rename vertex ``v`` to ``vertex_perm[v]`` and half-edge ``h`` to ``half_perm[h]``."""
        m = len(self.owner)
        owner = [0] * m
        partner = [0] * m
        for h in range(m):
            nh = half_perm[h]
            owner[nh] = vertex_perm[self.owner[h]]
            partner[nh] = half_perm[self.partner[h]]
        return PantsGraph(self.num_vertices, tuple(owner), tuple(partner))

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"vertices": self.num_vertices,
                "pairs": [list(p) for p in self.edges],
                "owner": list(self.owner)}

    @classmethod
    def from_dict(cls, data: dict) -> "PantsGraph":
        try:
            return cls.from_pairs(int(data["vertices"]), data["pairs"], [int(v) for v in data["owner"]])
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidGraphError(f"malformed graph JSON: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PantsGraph":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "P") -> str:
        """Graphviz rendering; leaves are drawn as points, one line per edge id."""
        lines = [f"graph {name} {{"]
        for v in range(self.num_vertices):
            shape = "point" if self.valence[v] == 1 else "circle"
            lines.append(f"  v{v} [shape={shape}];")
        for e, (a, b) in enumerate(self.edges):
            lines.append(f"  v{self.owner[a]} -- v{self.owner[b]} [label=\"e{e}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- validation ----------------------------------------------------------

@dataclass
class ValidationReport:
    issues: list[str] = field(default_factory=list)
    genus: int | None = None
    punctures: int | None = None

    @property
    def ok(self) -> bool:
        return not self.issues


def validate(graph: PantsGraph) -> ValidationReport:
    """List every violated invariant; an empty report means a legal pants graph."""
    rep = ValidationReport()
    m = len(graph.owner)
    if len(graph.partner) != m:
        rep.issues.append("owner and partner tables differ in length")
        return rep
    if graph.num_vertices <= 0:
        rep.issues.append("graph has no vertices")
        return rep
    for h in range(m):
        p = graph.partner[h]
        if not 0 <= p < m:
            rep.issues.append(f"half-edge {h} has out-of-range partner {p}")
        elif p == h:
            rep.issues.append(f"half-edge {h} is its own partner")
        elif graph.partner[p] != h:
            rep.issues.append(f"partner map is not an involution at half-edge {h}")
        if not 0 <= graph.owner[h] < graph.num_vertices:
            rep.issues.append(f"half-edge {h} has out-of-range owner {graph.owner[h]}")
    if rep.issues:
        return rep

    for v, d in enumerate(graph.valence):
        if d not in (1, 3):
            rep.issues.append(f"vertex {v} has valence {d} (must be 1 or 3)")
    n_int = len(graph.interior_vertices)
    if n_int == 0:
        rep.issues.append("graph has no interior (valence-3) vertex")

    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for h in graph.halves[v]:
            w = graph.owner[graph.partner[h]]
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != graph.num_vertices:
        rep.issues.append(f"graph is disconnected ({len(seen)} of {graph.num_vertices} vertices reachable)")

    if rep.issues:
        return rep
    n = graph.punctures
    g = graph.genus
    e_int = sum(1 for e in range(len(graph.edges)) if graph.is_interior_edge(e))
    if g < 0 or n_int != 2 * g - 2 + n or e_int != 3 * g - 3 + n:
        rep.issues.append(f"Euler count failed: V_int={n_int}, E_int={e_int}, g={g}, n={n}")
        return rep
    rep.genus, rep.punctures = g, n
    return rep


# -- metrics -------------------------------------------------------------

@dataclass(frozen=True)
class GraphMetrics:
    genus: int
    punctures: int
    girth: float
    cycle_rank: int
    leaf_count: int


def girth(graph: PantsGraph) -> float:
    """Length of the shortest cycle of the interior graph, ``inf`` for a tree.

    BFS from every vertex; the first non-tree edge seen from root ``s``
    closes a walk of length ``d(x) + d(y) + 1`` which bounds a cycle, and the
    minimum over roots is exact.
    """
    adj = graph.interior_adjacency
    if any(w == v for v, nbrs in enumerate(adj) for w, _ in nbrs):
        return 1
    pairs_seen: set[tuple[int, int]] = set()
    for v, nbrs in enumerate(adj):
        for w, _ in nbrs:
            if v < w:
                if (v, w) in pairs_seen:
                    return 2
                pairs_seen.add((v, w))
    best = INFINITE_GIRTH
    for s in graph.interior_vertices:
        dist = {s: 0}
        via = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y, e in adj[x]:
                if e == via[x]:
                    continue
                if y in dist:
                    best = min(best, dist[x] + dist[y] + 1)
                else:
                    dist[y] = dist[x] + 1
                    via[y] = e
                    queue.append(y)
    return best


def metrics(graph: PantsGraph) -> GraphMetrics:
    rep = validate(graph)
    if not rep.ok:
        raise InvalidGraphError("; ".join(rep.issues))
    return GraphMetrics(genus=rep.genus, punctures=rep.punctures, girth=girth(graph),
                        cycle_rank=rep.genus, leaf_count=graph.punctures)


def girth_moore_bound(genus: int) -> float:
    """``2 log2(2g/3) + 2``: a cycle-free ball of radius r has 3*2^r - 2 vertices."""
    return 2 * math.log2(2 * genus / 3) + 2


def girth_moore_check(graph: PantsGraph) -> bool:
    """Whether the girth of a closed cubic graph respects the Moore-type bound."""
    m = metrics(graph)
    if m.punctures:
        raise InvalidGraphError("girth_moore_check needs a graph without leaves")
    if m.genus < 2:
        raise InvalidGraphError("girth_moore_check needs genus >= 2")
    return m.girth <= girth_moore_bound(m.genus)
