"""Chambers, vertex types, complexes of groups and their coverings.

A spherical type is a frozenset of generator names: empty, a single
generator, or a commuting pair.  The special subgroup ``W_T`` of a spherical
``T`` is elementary abelian, so its elements are stored as subsets of ``T``
with symmetric difference as the product.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx

from ..graph import DefiningGraph, validate
from .complex import Edge, Square, SquareComplex, square_alignment

__all__ = [
    "ComplexOfGroups",
    "CoveringData",
    "CoveringReport",
    "VertexTypeMap",
    "build_chamber",
    "canonical_complex_of_groups",
    "chamber_vertex",
    "check_cog_covering",
    "format_type",
    "glue_chambers",
    "mirror",
    "parallelism_classes",
]

SphericalType = frozenset[str]


def format_type(t: Iterable[str] | str) -> str:
    if isinstance(t, str):
        return t
    return "{" + ",".join(sorted(t)) + "}"


def chamber_vertex(t: Iterable[str]) -> str:
    return "T(" + ",".join(sorted(t)) + ")"


@dataclass(frozen=True)
class VertexTypeMap:
    """Vertex types, either all V/E/F kinds or all spherical types."""

    kind: str
    types: Mapping[str, str | SphericalType]

    def __post_init__(self):
        if self.kind not in ("VEF", "spherical"):
            raise ValueError(f"unknown type kind {self.kind!r}")

    def __getitem__(self, v: str):
        return self.types[v]

    def problems(self, c: SquareComplex, g: DefiningGraph | None = None) -> list[str]:
        """Consistency of the types with the edges of ``c``.

        Spherical types must grow by one generator along each edge and be
        spherical in ``g``; V/E/F kinds must step V->E->F along each edge.
        """
        out = []
        order = {"V": 0, "E": 1, "F": 2}
        for e in c.edges:
            a, b = self.types.get(e.initial), self.types.get(e.terminal)
            if a is None or b is None:
                out.append(f"edge {e.name} has an untyped endpoint")
            elif self.kind == "VEF":
                if order[b] != order[a] + 1:
                    out.append(f"edge {e.name} goes from {a} to {b}")
            elif not (a < b and len(b) == len(a) + 1):
                out.append(f"edge {e.name} goes from {format_type(a)} to {format_type(b)}")
        if self.kind == "spherical" and g is not None:
            for v, t in self.types.items():
                if len(t) > 2 or not set(t) <= set(g.vertices) or (len(t) == 2 and not g.adjacent(*sorted(t))):
                    out.append(f"vertex {v} has non-spherical type {format_type(t)}")
        return out


def build_chamber(g: DefiningGraph) -> tuple[SquareComplex, VertexTypeMap]:
    """The chamber cellulated by small squares, one square per edge of ``g``.

    Vertices are ``T(...)`` for each spherical subset; edges point from
    smaller to larger type.
    """
    rep = validate(g)
    if not rep.is_valid:
        raise ValueError("invalid defining graph\n" + "\n".join(rep.lines()))
    empty = frozenset()
    types: dict[str, SphericalType] = {chamber_vertex(empty): empty}
    for v in g.vertices:
        types[chamber_vertex([v])] = frozenset([v])
    pairs = g.sorted_edges()
    for u, v in pairs:
        types[chamber_vertex([u, v])] = frozenset([u, v])
    o = chamber_vertex(empty)
    edges = [Edge(f"{o}->{chamber_vertex([v])}", o, chamber_vertex([v])) for v in g.vertices]
    squares = []
    for u, v in pairs:
        top = chamber_vertex([u, v])
        eu = Edge(f"{chamber_vertex([u])}->{top}", chamber_vertex([u]), top)
        ev = Edge(f"{chamber_vertex([v])}->{top}", chamber_vertex([v]), top)
        edges += [eu, ev]
        squares.append(
            Square(
                f"K({u},{v})",
                ((f"{o}->{chamber_vertex([u])}", 1), (eu.name, 1), (ev.name, -1), (f"{o}->{chamber_vertex([v])}", -1)),
            )
        )
    c = SquareComplex(tuple(types), tuple(edges), tuple(squares), name="chamber")
    return c, VertexTypeMap("spherical", types)


def mirror(K: SquareComplex, types: VertexTypeMap, s: str) -> tuple[list[str], list[str]]:
    """Vertices and edges of the mirror of type ``s``: the star of ``T(s)`` above it."""
    root = chamber_vertex([s])
    out_edges = sorted(K.out_edges(root))
    verts = [root] + sorted(K.edge[e].terminal for e in out_edges)
    return verts, out_edges


# --- complexes of groups --------------------------------------------------------------


@dataclass(frozen=True)
class ComplexOfGroups:
    """Local group ``W_T`` at each vertex, as its generating set ``T``.

    Monomorphisms along edges are inclusions, so they need no storage.
    """

    base: SquareComplex
    local_groups: Mapping[str, SphericalType]

    @property
    def is_trivial(self) -> bool:
        return all(not t for t in self.local_groups.values())


def canonical_complex_of_groups(g: DefiningGraph) -> tuple[ComplexOfGroups, VertexTypeMap]:
    K, types = build_chamber(g)
    return ComplexOfGroups(K, dict(types.types)), types


def trivial_complex_of_groups(Y: SquareComplex) -> ComplexOfGroups:
    return ComplexOfGroups(Y, {v: frozenset() for v in Y.vertices})


@dataclass(frozen=True)
class CoveringData:
    """A morphism ``f: Y -> K`` with an element ``phi(e)`` of the local group at ``f(t(e))``."""

    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    square_map: Mapping[str, str]
    phi: Mapping[str, SphericalType]


@dataclass
class CoveringReport:
    ok: bool
    sheets: int | None
    errors: list[tuple[str, str]] = field(default_factory=list)
    checked: int = 0

    def error_kinds(self) -> set[str]:
        return {k for k, _ in self.errors}

    def lines(self) -> list[str]:
        out = [
            f"cog_covering: {'PASS' if self.ok else 'FAIL'}",
            f"chambers: {self.sheets if self.sheets is not None else '-'}",
            f"fibers_checked: {self.checked}",
        ]
        out += [f"error: {k}: {w}" for k, w in self.errors]
        return out


def check_cog_covering(
    Y: SquareComplex,
    y_types: VertexTypeMap | None,
    target: ComplexOfGroups,
    data: CoveringData,
    *,
    max_errors: int = 20,
) -> CoveringReport:
    """Check that ``data`` is a covering from the trivial complex of groups over ``Y``.

    Error kinds: ``nondegenerate`` (bad morphism), ``type`` (types or phi
    values outside the local group), ``fiber-size`` and ``coset-collision``.
    """
    K = target.base
    groups = target.local_groups
    errors: list[tuple[str, str]] = []

    def err(kind: str, msg: str):
        if len(errors) < max_errors:
            errors.append((kind, msg))

    f_v, f_e, f_s = data.vertex_map, data.edge_map, data.square_map
    kverts = set(K.vertices)
    for v in Y.vertices:
        if f_v.get(v) not in kverts:
            err("nondegenerate", f"vertex {v} has no image")
    for e in Y.edges:
        img = K.edge.get(f_e.get(e.name, ""))
        if img is None or (f_v.get(e.initial), f_v.get(e.terminal)) != (img.initial, img.terminal):
            err("nondegenerate", f"edge {e.name} is not mapped onto an edge")
    for sq in Y.squares:
        img = K.square.get(f_s.get(sq.name, ""))
        if img is None or square_alignment(sq, img, f_e) is None:
            err("nondegenerate", f"square {sq.name} is not mapped bijectively onto a square")
    if errors:
        return CoveringReport(False, None, errors)

    for v in Y.vertices:
        got = Counter(f_e[e] for e in Y.out_edges(v))
        want = Counter(K.out_edges(f_v[v]))
        if got != want:
            err("nondegenerate", f"edges leaving {v} do not biject onto edges leaving {f_v[v]}")

    if y_types is not None:
        for v in Y.vertices:
            if y_types.types.get(v) != groups[f_v[v]]:
                err("type", f"vertex {v} has type {format_type(y_types.types.get(v, '?'))} but maps to {f_v[v]}")
    for e in Y.edges:
        t = groups[f_v[e.terminal]]
        x = data.phi.get(e.name, frozenset())
        if not x <= t:
            err("type", f"phi({e.name}) = {format_type(x)} is not in W_{format_type(t)}")

    into: dict[str, dict[str, list[str]]] = {v: {} for v in Y.vertices}
    for e in Y.edges:
        into[e.terminal].setdefault(f_e[e.name], []).append(e.name)
    checked = 0
    for v in Y.vertices:
        T = groups[f_v[v]]
        for kname in K.in_edges(f_v[v]):
            checked += 1
            Tp = groups[K.edge[kname].initial]
            fiber = sorted(into[v].get(kname, []))
            quotient = 2 ** (len(T) - len(Tp))
            if len(fiber) != quotient:
                err("fiber-size", f"vertex {v} over {kname}: {len(fiber)} edges, need {quotient}")
                continue
            # cosets of W_T' in W_T are determined by the letters outside T'
            cosets = Counter(frozenset(data.phi.get(e, frozenset()) - Tp) for e in fiber)
            if len(cosets) != len(fiber):
                err("coset-collision", f"vertex {v} over {kname}: edges {' '.join(fiber)} land in one coset")
    sheets = sum(1 for v in Y.vertices if not groups[f_v[v]])
    return CoveringReport(not errors, sheets, errors, checked)


def parallelism_classes(Y: SquareComplex) -> dict[str, str]:
    """Map each edge to a class representative; opposite sides of a square are parallel."""
    uf = nx.utils.UnionFind(e.name for e in Y.edges)
    for sq in Y.squares:
        b = sq.boundary
        uf.union(b[0][0], b[2][0])
        uf.union(b[1][0], b[3][0])
    rep = {}
    for block in uf.to_sets():
        least = min(block)
        for x in block:
            rep[x] = least
    return rep


def glue_chambers(
    g: DefiningGraph, copies: Iterable[str], gluings: Iterable[tuple[str, str, str]]
) -> tuple[SquareComplex, VertexTypeMap, dict[tuple[str, str], str]]:
    """Copies of the chamber with pairs of equal-type mirrors identified.

    ``gluings`` lists ``(copy, copy, generator)``.  Returns the glued
    complex, its spherical types and the map ``(copy, chamber vertex) ->
    glued vertex``.  A glued vertex is named after the least of its
    ``copy:vertex`` representatives.
    """
    K, ktypes = build_chamber(g)
    copies = list(copies)
    vuf = nx.utils.UnionFind(f"{j}:{v}" for j in copies for v in K.vertices)
    euf = nx.utils.UnionFind(f"{j}:{e.name}" for j in copies for e in K.edges)
    for j, k, s in gluings:
        verts, edges = mirror(K, ktypes, s)
        for v in verts:
            vuf.union(f"{j}:{v}", f"{k}:{v}")
        for e in edges:
            euf.union(f"{j}:{e}", f"{k}:{e}")
    vname = {}
    for block in vuf.to_sets():
        rep = min(block)
        for x in block:
            vname[x] = rep
    ename = {}
    for block in euf.to_sets():
        rep = min(block)
        for x in block:
            ename[x] = rep
    verts = sorted(set(vname.values()))
    types = {v: ktypes[v.split(":", 1)[1]] for v in verts}
    edges = {}
    for j in copies:
        for e in K.edges:
            n = ename[f"{j}:{e.name}"]
            edge = Edge(n, vname[f"{j}:{e.initial}"], vname[f"{j}:{e.terminal}"])
            if edges.setdefault(n, edge) != edge:
                raise ValueError(f"gluing identifies edge {n} inconsistently")
    squares = []
    for j in copies:
        for sq in K.squares:
            squares.append(Square(f"{j}:{sq.name}", tuple((ename[f"{j}:{e}"], s) for e, s in sq.boundary)))
    Y = SquareComplex(tuple(verts), tuple(edges[n] for n in sorted(edges)), tuple(squares), name="glued chambers")
    where = {(j, v): vname[f"{j}:{v}"] for j in copies for v in K.vertices}
    return Y, VertexTypeMap("spherical", types), where
