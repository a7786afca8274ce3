"""Quivers, ADE classification, Euler form, sink mutation, vertex removal.

Vertices are 0-indexed integers. Arrows are stored in a canonical sorted
order so that everything downstream (tables, enumerations, CLI output) is
byte-stable across runs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import NotASink, NotDynkin

_E_RANKS = (6, 7, 8)


@dataclass(frozen=True)
class DynkinType:
    """A simply-laced Dynkin type: A_n (n>=1), D_n (n>=4), E_6, E_7, E_8."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        f, n = self.family, self.rank
        ok = (
            (f == "A" and n >= 1)
            or (f == "D" and n >= 4)
            or (f == "E" and n in _E_RANKS)
        )
        if not ok:
            raise NotDynkin(f"invalid Dynkin type {f}{n}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        text = text.strip().upper().replace("_", "")
        if len(text) < 2 or text[0] not in "ADE" or not text[1:].isdigit():
            raise NotDynkin(f"cannot parse Dynkin type {text!r}")
        return cls(text[0], int(text[1:]))

    @property
    def root_count(self) -> int:
        """Number of positive roots (= number of indecomposables)."""
        n = self.rank
        if self.family == "A":
            return n * (n + 1) // 2
        if self.family == "D":
            return n * (n - 1)
        return {6: 36, 7: 63, 8: 120}[n]


@dataclass(frozen=True)
class Quiver:
    """A finite quiver on vertices 0..n-1 with an acyclic arrow set."""

    n: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        arrows = tuple(sorted((int(s), int(t)) for s, t in self.arrows))
        for s, t in arrows:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"arrow ({s},{t}) out of range")
        object.__setattr__(self, "arrows", arrows)
        topological_order(self)  # raises on a directed cycle

    def is_sink(self, v: int) -> bool:
        return all(s != v for s, _ in self.arrows)

    def is_source(self, v: int) -> bool:
        return all(t != v for _, t in self.arrows)

    def sinks(self) -> list[int]:
        return [v for v in range(self.n) if self.is_sink(v)]

    def arrows_into(self, v: int) -> list[int]:
        return [k for k, (_, t) in enumerate(self.arrows) if t == v]

    def arrows_out_of(self, v: int) -> list[int]:
        return [k for k, (s, _) in enumerate(self.arrows) if s == v]

    def to_json_dict(self) -> dict:
        return {"vertices": self.n, "arrows": [list(a) for a in self.arrows]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Quiver":
        if not isinstance(data, dict):
            raise ValueError("quiver JSON must be an object")
        try:
            n = data["vertices"]
            arrows = data["arrows"]
        except (KeyError, TypeError) as exc:
            raise ValueError("quiver JSON needs 'vertices' and 'arrows'") from exc
        if not isinstance(n, int) or not isinstance(arrows, list):
            raise ValueError("malformed quiver JSON")
        pairs = []
        for a in arrows:
            if not (isinstance(a, (list, tuple)) and len(a) == 2):
                raise ValueError(f"malformed arrow {a!r}")
            pairs.append((a[0], a[1]))
        return cls(n, tuple(pairs))


def topological_order(q: Quiver) -> list[int]:
    """Deterministic topological order (smallest vertex first among sources)."""
    indeg = [0] * q.n
    succ: list[list[int]] = [[] for _ in range(q.n)]
    for s, t in q.arrows:
        indeg[t] += 1
        succ[s].append(t)
    heap = [v for v in range(q.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != q.n:
        raise ValueError("quiver has a directed cycle")
    return order


def _undirected_edges(q: Quiver) -> list[tuple[int, int]]:
    return [(min(s, t), max(s, t)) for s, t in q.arrows]


def classify(q: Quiver) -> DynkinType:
    """ADE type of the underlying graph, independent of orientation.

    Raises NotDynkin for anything else (cycle, multiple edge, affine or
    wilder shapes, disconnected graphs).
    """
    n = q.n
    if n == 0:
        raise NotDynkin("empty quiver")
    edges = _undirected_edges(q)
    if len(set(edges)) != len(edges):
        raise NotDynkin("multiple edges between the same pair of vertices")
    if len(edges) != n - 1:
        raise NotDynkin("underlying graph is not a tree")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise NotDynkin("underlying graph is disconnected")

    degrees = [len(adj[v]) for v in range(n)]
    if any(d > 3 for d in degrees):
        raise NotDynkin("vertex of degree > 3")
    branch_vertices = [v for v in range(n) if degrees[v] == 3]
    if not branch_vertices:
        return DynkinType("A", n)
    if len(branch_vertices) > 1:
        raise NotDynkin("more than one branch vertex")
    center = branch_vertices[0]
    lengths = []
    for start in adj[center]:
        length = 1
        prev, cur = center, start
        while degrees[cur] == 2:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
            length += 1
        lengths.append(length)
    a, b, c = sorted(lengths)
    if a == 1 and b == 1:
        return DynkinType("D", c + 3)
    if (a, b) == (1, 2) and c in (2, 3, 4):
        return DynkinType("E", c + 4)
    raise NotDynkin(f"branch lengths {(a, b, c)} are not of ADE shape")


def euler_form(q: Quiver, d, e) -> int:
    """Bilinear form <d, e> = sum_v d_v e_v - sum_{a: i->j} d_i e_j."""
    d = [int(x) for x in d]
    e = [int(x) for x in e]
    if len(d) != q.n or len(e) != q.n:
        raise ValueError("dimension vector length mismatch")
    total = sum(dv * ev for dv, ev in zip(d, e))
    total -= sum(d[s] * e[t] for s, t in q.arrows)
    return total


def sink_mutation(q: Quiver, v: int) -> Quiver:
    """Reverse all arrows ending at the sink v."""
    if not (0 <= v < q.n):
        raise ValueError(f"vertex {v} out of range")
    if not q.is_sink(v):
        raise NotASink(f"vertex {v} has an outgoing arrow")
    arrows = tuple((t, s) if t == v else (s, t) for s, t in q.arrows)
    return Quiver(q.n, arrows)


def source_mutation(q: Quiver, v: int) -> Quiver:
    """Reverse all arrows starting at the source v (inverse of sink_mutation)."""
    if not (0 <= v < q.n):
        raise ValueError(f"vertex {v} out of range")
    if not q.is_source(v):
        raise NotASink(f"vertex {v} has an incoming arrow")
    arrows = tuple((t, s) if s == v else (s, t) for s, t in q.arrows)
    return Quiver(q.n, arrows)


def remove_vertex(q: Quiver, v: int) -> Quiver:
    """Delete v and all incident arrows; remaining vertices shift down."""
    if not (0 <= v < q.n):
        raise ValueError(f"vertex {v} out of range")

    def renum(w: int) -> int:
        return w if w < v else w - 1

    arrows = tuple(
        (renum(s), renum(t)) for s, t in q.arrows if s != v and t != v
    )
    return Quiver(q.n - 1, arrows)


def dynkin_edges(dt: DynkinType) -> list[tuple[int, int]]:
    """Canonical tree edges for the given type, on vertices 0..rank-1."""
    n = dt.rank
    if dt.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if dt.family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]


def dynkin_quiver(dt: DynkinType) -> Quiver:
    """The canonical orientation: each tree edge (u, v) becomes u -> v."""
    return Quiver(dt.rank, tuple(dynkin_edges(dt)))


def all_orientations(dt: DynkinType, bound: int = 8) -> list[Quiver]:
    """Every orientation of the Dynkin tree (2^edges quivers, no dedup)."""
    if dt.rank > bound:
        raise ValueError(f"rank {dt.rank} exceeds orientation sweep bound {bound}")
    edges = dynkin_edges(dt)
    out = []
    for mask in range(1 << len(edges)):
        arrows = tuple(
            (u, v) if not (mask >> k) & 1 else (v, u)
            for k, (u, v) in enumerate(edges)
        )
        out.append(Quiver(dt.rank, arrows))
    return out
