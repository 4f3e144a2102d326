"""Defining graphs of right-angled Coxeter groups.

A defining graph is a finite simplicial graph whose vertices are the
Coxeter generators; two generators commute exactly when they are joined by
an edge.  This module reads and writes the plain-text graph format, checks
the standing hypotheses (connected, triangle-free, no separating vertices
or edges), detects joins, and builds the four-cycle graph used by the CFS
criterion.  It also generates the family ``gamma_d``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
from networkx.utils import UnionFind

__all__ = [
    "DefiningGraph",
    "FourCycle",
    "FourCycleGraph",
    "GraphFormatError",
    "ValidationReport",
    "complete_bipartite",
    "cycle_graph",
    "enumerate_four_cycles",
    "format_graph",
    "four_cycle_graph",
    "gamma_d",
    "is_cfs",
    "is_join",
    "parse_graph",
    "validate",
]

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class GraphFormatError(ValueError):
    """Raised for malformed graph files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class DefiningGraph:
    """A finite simplicial graph with an ordered vertex list.

    The vertex order is the generator order used by every normal form
    downstream.  ``origin`` records how the graph was produced (for example
    ``"gamma_d:3"``) and does not take part in equality.
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    origin: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        names = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {sorted(e)}")
            if not e <= names:
                raise ValueError(f"edge {sorted(e)} uses an unknown vertex")

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        origin: str | None = None,
    ) -> DefiningGraph:
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges), origin)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """Neighbour sets by generator index."""
        nbrs: list[set[int]] = [set() for _ in self.vertices]
        for e in self.edges:
            u, v = (self.index[x] for x in e)
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def adjacent(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbors(self, v: str) -> list[str]:
        return [self.vertices[j] for j in sorted(self.adjacency[self.index[v]])]

    def degree(self, v: str) -> int:
        return len(self.adjacency[self.index[v]])

    def sorted_edges(self) -> list[tuple[str, str]]:
        """Edges as pairs ordered by vertex index, sorted."""
        out = []
        for e in self.edges:
            u, v = sorted(e, key=self.index.__getitem__)
            out.append((u, v))
        return sorted(out, key=lambda p: (self.index[p[0]], self.index[p[1]]))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.sorted_edges())
        return g

    def complement(self) -> DefiningGraph:
        pairs = [
            (u, v)
            for u, v in itertools.combinations(self.vertices, 2)
            if not self.adjacent(u, v)
        ]
        return DefiningGraph.from_edges(self.vertices, pairs)

    def induced(self, keep: Iterable[str]) -> DefiningGraph:
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        return DefiningGraph(verts, frozenset(e for e in self.edges if e <= keep))


def parse_graph(text: str) -> DefiningGraph:
    """Parse the graph file format.

    Comment lines start with ``#``.  Exactly one ``vertices:`` line lists the
    generator names in order; each ``edge u v`` line adds an edge.  Duplicate
    edges are merged.
    """
    vertices: list[str] | None = None
    edges: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            if vertices is not None:
                raise GraphFormatError("second 'vertices:' line", lineno)
            vertices = line[len("vertices:"):].split()
            for v in vertices:
                if not _NAME.match(v):
                    raise GraphFormatError(f"bad vertex name {v!r}", lineno)
            if len(set(vertices)) != len(vertices):
                raise GraphFormatError("duplicate vertex name", lineno)
            continue
        parts = line.split()
        if parts[0] == "edge":
            if len(parts) != 3:
                raise GraphFormatError("expected 'edge <u> <v>'", lineno)
            edges.append((parts[1], parts[2], lineno))
            continue
        raise GraphFormatError(f"unrecognised line {line!r}", lineno)
    if vertices is None:
        raise GraphFormatError("missing 'vertices:' line")
    known = set(vertices)
    pairs = set()
    for u, v, lineno in edges:
        for x in (u, v):
            if x not in known:
                raise GraphFormatError(f"unknown vertex {x!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at {u!r}", lineno)
        pairs.add(frozenset((u, v)))
    return DefiningGraph(tuple(vertices), frozenset(pairs))


def format_graph(g: DefiningGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append("vertices: " + " ".join(g.vertices))
    lines.extend(f"edge {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


# --- standard graphs -------------------------------------------------------


def cycle_graph(n: int, prefix: str = "") -> DefiningGraph:
    """The cycle C_n on vertices ``1..n`` (optionally prefixed)."""
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return DefiningGraph.from_edges(
        names, [(names[i], names[(i + 1) % n]) for i in range(n)], origin=f"C{n}"
    )


def complete_bipartite(m: int, n: int) -> DefiningGraph:
    left = [f"x{i}" for i in range(m)]
    right = [f"y{j}" for j in range(n)]
    return DefiningGraph.from_edges(
        left + right, [(u, v) for u in left for v in right], origin=f"K{m},{n}"
    )


def gamma_d(d: int) -> DefiningGraph:
    """The graph whose right-angled Coxeter group has divergence of degree ``d``.

    Vertices ``a0..ad, b0..bd``; the base 4-cycle a0-a1-b0-b1 plus, for each
    ``2 <= i <= d``, the edges a0-ai, b0-ai, b(i-1)-bi and a(i-1)-bi.
    """
    if d < 1:
        raise ValueError(f"gamma_d needs d >= 1, got {d}")
    a = [f"a{i}" for i in range(d + 1)]
    b = [f"b{i}" for i in range(d + 1)]
    edges = [(a[0], a[1]), (a[1], b[0]), (b[0], b[1]), (b[1], a[0])]
    for i in range(2, d + 1):
        edges += [(a[0], a[i]), (b[0], a[i]), (b[i - 1], b[i]), (a[i - 1], b[i])]
    return DefiningGraph.from_edges(a + b, edges, origin=f"gamma_d:{d}")


# --- validation ------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking the standing hypotheses on a defining graph.

    ``separating_edges`` are bridges.  ``separating_edge_pairs`` lists edges
    whose two endpoints together disconnect the graph (the closed-edge
    notion relevant to one-endedness); they are reported but do not enter
    ``is_valid``.
    """

    triangle_free: bool
    connected: bool
    separating_vertices: tuple[str, ...]
    separating_edges: tuple[tuple[str, str], ...]
    too_small: bool = False
    triangles: tuple[tuple[str, str, str], ...] = ()
    separating_edge_pairs: tuple[tuple[str, str], ...] = ()

    @property
    def is_valid(self) -> bool:
        return (
            self.triangle_free
            and self.connected
            and not self.separating_vertices
            and not self.separating_edges
            and not self.too_small
        )

    def lines(self) -> list[str]:
        fmt = lambda items: " ".join("-".join(x) if isinstance(x, tuple) else x for x in items)
        out = [
            f"valid: {str(self.is_valid).lower()}",
            f"triangle_free: {str(self.triangle_free).lower()}",
            f"connected: {str(self.connected).lower()}",
            f"separating_vertices: {fmt(self.separating_vertices)}",
            f"separating_edges: {fmt(self.separating_edges)}",
        ]
        if self.too_small:
            out.append("too_small: true")
        if self.triangles:
            out.append(f"triangles: {fmt(self.triangles)}")
        if self.separating_edge_pairs:
            out.append(f"separating_edge_pairs: {fmt(self.separating_edge_pairs)}")
        return out


def _triangles(g: DefiningGraph) -> list[tuple[str, str, str]]:
    adj = g.adjacency
    found = []
    for u in range(g.n):
        for v in adj[u]:
            if v <= u:
                continue
            for w in adj[u] & adj[v]:
                if w > v:
                    found.append((g.vertices[u], g.vertices[v], g.vertices[w]))
    return found


def validate(g: DefiningGraph) -> ValidationReport:
    """Check that ``g`` is connected, triangle-free, without cut vertices or bridges."""
    key = g.index.__getitem__
    triangles = _triangles(g)
    too_small = g.n < 4
    if g.n == 0:
        return ValidationReport(True, False, (), (), too_small=True)
    G = g.to_networkx()
    connected = nx.is_connected(G)
    cut_vertices = tuple(sorted(nx.articulation_points(G), key=key))
    bridges = tuple(
        sorted((tuple(sorted(e, key=key)) for e in nx.bridges(G)), key=lambda p: (key(p[0]), key(p[1])))
    )
    pairs = []
    if connected:
        for u, v in g.sorted_edges():
            rest = G.subgraph([x for x in g.vertices if x not in (u, v)])
            if rest.number_of_nodes() and not nx.is_connected(rest):
                pairs.append((u, v))
    return ValidationReport(
        triangle_free=not triangles,
        connected=connected,
        separating_vertices=cut_vertices,
        separating_edges=bridges,
        too_small=too_small,
        triangles=tuple(triangles),
        separating_edge_pairs=tuple(pairs),
    )


def is_join(g: DefiningGraph) -> tuple[tuple[str, ...], tuple[str, ...]] | None:
    """Return a join decomposition ``(V1, V2)`` of ``g``, or ``None``.

    ``g`` is a join exactly when its complement is disconnected.  ``V1`` is
    the complement component containing the first vertex; ``V2`` is the
    rest.  Both keep the generator order.
    """
    if g.n < 2:
        return None
    comp = g.complement()
    adj = comp.adjacency
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) == g.n:
        return None
    first = tuple(v for i, v in enumerate(g.vertices) if i in seen)
    second = tuple(v for i, v in enumerate(g.vertices) if i not in seen)
    return first, second


# --- four-cycles -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class FourCycle:
    """An embedded 4-cycle, stored as generator indices in canonical cyclic order.

    Canonical means the least of the eight rotations/reflections under the
    generator order, so it starts at the smallest index.
    """

    cycle: tuple[int, int, int, int]

    @classmethod
    def canonical(cls, cyc: Sequence[int]) -> FourCycle:
        c = list(cyc)
        variants = []
        for k in range(4):
            rot = c[k:] + c[:k]
            variants.append(tuple(rot))
            variants.append(tuple([rot[0]] + rot[1:][::-1]))
        return cls(min(variants))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.cycle)

    def edge_set(self) -> frozenset[frozenset[int]]:
        c = self.cycle
        return frozenset(frozenset((c[i], c[(i + 1) % 4])) for i in range(4))

    def names(self, g: DefiningGraph) -> tuple[str, ...]:
        return tuple(g.vertices[i] for i in self.cycle)

    def label(self, g: DefiningGraph) -> str:
        return "_".join(self.names(g))


def enumerate_four_cycles(g: DefiningGraph) -> list[FourCycle]:
    """All embedded 4-cycles of ``g``, each once, sorted canonically.

    A 4-cycle is determined by a non-adjacent pair of opposite corners and
    two of their common neighbours, which must themselves be non-adjacent.
    """
    adj = g.adjacency
    found = set()
    for u, v in itertools.combinations(range(g.n), 2):
        if v in adj[u]:
            continue
        common = sorted(adj[u] & adj[v])
        for s, t in itertools.combinations(common, 2):
            if t in adj[s]:
                continue
            found.add(FourCycle.canonical((u, s, v, t)))
    return sorted(found)


def _linked(c1: FourCycle, c2: FourCycle) -> bool:
    shared = c1.edge_set() & c2.edge_set()
    for e, f in itertools.combinations(shared, 2):
        if e & f:
            return True
    return False


@dataclass(frozen=True)
class FourCycleGraph:
    """The four-cycle graph: nodes are 4-cycles, linked when they share two adjacent edges."""

    nodes: tuple[FourCycle, ...]
    links: frozenset[tuple[int, int]]
    components: tuple[tuple[int, ...], ...]
    supports: tuple[frozenset[int], ...]

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.links if a == i} | {a for a, b in self.links if b == i})


def four_cycle_graph(g: DefiningGraph) -> FourCycleGraph:
    nodes = tuple(enumerate_four_cycles(g))
    links = set()
    uf = UnionFind(range(len(nodes)))
    for i, j in itertools.combinations(range(len(nodes)), 2):
        if _linked(nodes[i], nodes[j]):
            links.add((i, j))
            uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(nodes)):
        groups.setdefault(uf[i], []).append(i)
    components = tuple(sorted((tuple(sorted(m)) for m in groups.values()), key=lambda m: m[0]))
    supports = tuple(frozenset().union(*(nodes[i].support for i in comp)) for comp in components)
    return FourCycleGraph(nodes, frozenset(links), components, supports)


def is_cfs(g: DefiningGraph) -> list[FourCycle] | None:
    """A component of the four-cycle graph with full support, or ``None``."""
    fg = four_cycle_graph(g)
    full = frozenset(range(g.n))
    for comp, support in zip(fg.components, fg.supports):
        if support == full:
            return [fg.nodes[i] for i in comp]
    return None
