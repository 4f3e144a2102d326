"""Oriented square complexes stored as explicit cell lists.

A square is a cyclic sequence of four edge traversals ``(edge, sign)``; sign
``+1`` runs from the edge's initial to its terminal vertex.  Corner ``k`` of
a square sits at the start of traversal ``k``, between traversals ``k - 1``
and ``k``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

__all__ = [
    "CellListError",
    "CellMap",
    "CoveringMapReport",
    "Edge",
    "Square",
    "SquareComplex",
    "check_covering_map",
    "condition_star_violations",
    "format_cell_list",
    "isomorphic_under",
    "parse_cell_list",
    "square_alignment",
    "square_subdivision",
]

Traversal = tuple[str, int]
# an edge end seen from a vertex: (edge name, "i" or "t")
End = tuple[str, str]


class CellListError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Edge:
    name: str
    initial: str
    terminal: str


@dataclass(frozen=True)
class Square:
    name: str
    boundary: tuple[Traversal, Traversal, Traversal, Traversal]

    def word(self) -> str:
        return " ".join(e if s > 0 else f"{e}^-1" for e, s in self.boundary)


def _start(e: Edge, sign: int) -> str:
    return e.initial if sign > 0 else e.terminal


def _finish(e: Edge, sign: int) -> str:
    return e.terminal if sign > 0 else e.initial


def _out_end(name: str, sign: int) -> End:
    return (name, "i" if sign > 0 else "t")


def _in_end(name: str, sign: int) -> End:
    return (name, "t" if sign > 0 else "i")


@dataclass(frozen=True)
class SquareComplex:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise CellListError("duplicate vertex")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise CellListError("duplicate edge name")
        for e in self.edges:
            if e.initial not in vs or e.terminal not in vs:
                raise CellListError(f"edge {e.name} has an unknown endpoint")
        emap = {e.name: e for e in self.edges}
        if len({s.name for s in self.squares}) != len(self.squares):
            raise CellListError("duplicate square name")
        for sq in self.squares:
            if len(sq.boundary) != 4:
                raise CellListError(f"square {sq.name} needs 4 sides")
            for k, (e, sign) in enumerate(sq.boundary):
                if e not in emap or sign not in (1, -1):
                    raise CellListError(f"square {sq.name}: bad side {e!r}")
                nxt, nsign = sq.boundary[(k + 1) % 4]
                if nxt not in emap:
                    raise CellListError(f"square {sq.name}: bad side {nxt!r}")
                if _finish(emap[e], sign) != _start(emap[nxt], nsign):
                    raise CellListError(f"square {sq.name}: boundary does not close up at side {k}")

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    @cached_property
    def square(self) -> dict[str, Square]:
        return {s.name: s for s in self.squares}

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.squares)

    def euler_characteristic(self) -> int:
        v, e, f = self.counts()
        return v - e + f

    def corner_vertex(self, sq: Square, k: int) -> str:
        e, sign = sq.boundary[k]
        return _start(self.edge[e], sign)

    @cached_property
    def _incidence(self):
        ends: dict[str, list[End]] = {v: [] for v in self.vertices}
        outs: dict[str, list[str]] = {v: [] for v in self.vertices}
        ins: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            ends[e.initial].append((e.name, "i"))
            ends[e.terminal].append((e.name, "t"))
            outs[e.initial].append(e.name)
            ins[e.terminal].append(e.name)
        corners: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        for sq in self.squares:
            for k in range(4):
                corners[self.corner_vertex(sq, k)].append((sq.name, k))
        return ends, outs, ins, corners

    def out_edges(self, v: str) -> list[str]:
        return self._incidence[1][v]

    def in_edges(self, v: str) -> list[str]:
        return self._incidence[2][v]

    def corners(self, v: str) -> list[tuple[str, int]]:
        """Square corners at ``v``: the number of (small) squares containing it."""
        return self._incidence[3][v]

    def link(self, v: str) -> tuple[list[End], list[tuple[tuple[str, int], End, End]]]:
        """Link of ``v``: edge ends at ``v``, and one link edge per square corner."""
        ends = self._incidence[0][v]
        links = []
        for name, k in self.corners(v):
            sq = self.square[name]
            e_prev, s_prev = sq.boundary[(k - 1) % 4]
            e_here, s_here = sq.boundary[k]
            links.append(((name, k), _in_end(e_prev, s_prev), _out_end(e_here, s_here)))
        return ends, links

    def link_graph(self, v: str):
        import networkx as nx

        ends, links = self.link(v)
        g = nx.MultiGraph()
        g.add_nodes_from(ends)
        for _, a, b in links:
            g.add_edge(a, b)
        return g


def condition_star_violations(c: SquareComplex) -> list[str]:
    """Squares whose boundary sign pattern is not a rotation of (+, +, -, -)."""
    good = {(1, 1, -1, -1), (1, -1, -1, 1), (-1, -1, 1, 1), (-1, 1, 1, -1)}
    return [sq.name for sq in c.squares if tuple(s for _, s in sq.boundary) not in good]


# --- plain-text cell lists ---------------------------------------------------------


def _parse_side(tok: str, line: int) -> Traversal:
    if tok.endswith("^-1"):
        return tok[:-3], -1
    if "^" in tok:
        raise CellListError(f"bad side {tok!r}", line)
    return tok, 1


def parse_cell_list(text: str) -> tuple[SquareComplex, dict[str, str], dict[str, str]]:
    """Parse the cell-list format.

    Lines (``#`` starts a comment)::

        vertex <name> [<label>]
        edge <name> <initial> <terminal> [<label>]
        square <name> <side> <side> <side> <side> [<label>]

    A side is an edge name, suffixed ``^-1`` when traversed backwards.  The
    optional trailing labels name the image cell under some map and are
    returned as ``(complex, edge_labels, square_labels)``; vertex labels are
    merged into ``edge_labels`` under the key ``"vertex:<name>"``.
    """
    vertices: list[str] = []
    edges: list[Edge] = []
    squares: list[Square] = []
    elabels: dict[str, str] = {}
    slabels: dict[str, str] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kind, args = toks[0], toks[1:]
        if kind == "vertex" and len(args) in (1, 2):
            vertices.append(args[0])
            if len(args) == 2:
                elabels["vertex:" + args[0]] = args[1]
        elif kind == "edge" and len(args) in (3, 4):
            edges.append(Edge(*args[:3]))
            if len(args) == 4:
                elabels[args[0]] = args[3]
        elif kind == "square" and len(args) in (5, 6):
            sides = tuple(_parse_side(t, no) for t in args[1:5])
            squares.append(Square(args[0], sides))  # type: ignore[arg-type]
            if len(args) == 6:
                slabels[args[0]] = args[5]
        else:
            raise CellListError(f"cannot parse {raw.strip()!r}", no)
    try:
        c = SquareComplex(tuple(vertices), tuple(edges), tuple(squares))
    except CellListError as exc:
        raise CellListError(str(exc)) from None
    return c, elabels, slabels


def format_cell_list(c: SquareComplex, comment: str | None = None) -> str:
    out = [f"# {line}" for line in (comment or "").splitlines()]
    out += [f"vertex {v}" for v in c.vertices]
    out += [f"edge {e.name} {e.initial} {e.terminal}" for e in c.edges]
    out += [f"square {sq.name} {sq.word()}" for sq in c.squares]
    return "\n".join(out) + "\n"


# --- subdivision -------------------------------------------------------------------------


def midpoint(e: str) -> str:
    return f"m({e})"


def centre(sq: str) -> str:
    return f"c({sq})"


def square_subdivision(c: SquareComplex) -> tuple[SquareComplex, dict[str, str]]:
    """First square subdivision, with V/E/F kinds for the new vertices.

    Edge ``e`` splits into half-edges ``e:i`` and ``e:t`` running from its
    endpoints to ``m(e)``; square ``S`` gets spokes ``S:k`` from the midpoint
    of side ``k`` to ``c(S)`` and small squares ``S:k`` at corner ``k``.  All
    new edges point from V to E to F.
    """
    kinds = {v: "V" for v in c.vertices}
    verts = list(c.vertices)
    edges: list[Edge] = []
    for e in c.edges:
        m = midpoint(e.name)
        verts.append(m)
        kinds[m] = "E"
        edges.append(Edge(f"{e.name}:i", e.initial, m))
        edges.append(Edge(f"{e.name}:t", e.terminal, m))
    squares: list[Square] = []
    for sq in c.squares:
        ctr = centre(sq.name)
        verts.append(ctr)
        kinds[ctr] = "F"
        for k, (e, _) in enumerate(sq.boundary):
            edges.append(Edge(f"{sq.name}:{k}", midpoint(e), ctr))
        for k in range(4):
            e_here, s_here = sq.boundary[k]
            e_prev, s_prev = sq.boundary[(k - 1) % 4]
            here = f"{e_here}:{'i' if s_here > 0 else 't'}"
            prev = f"{e_prev}:{'t' if s_prev > 0 else 'i'}"
            boundary = ((here, 1), (f"{sq.name}:{k}", 1), (f"{sq.name}:{(k - 1) % 4}", -1), (prev, -1))
            squares.append(Square(f"{sq.name}:{k}", boundary))
    sub = SquareComplex(tuple(verts), tuple(edges), tuple(squares), name=f"subdivided {c.name}".strip())
    return sub, kinds


# --- cell maps ------------------------------------------------------------------------------


@dataclass(frozen=True)
class CellMap:
    """A dimension-preserving map between square complexes, given cell by cell."""

    source: SquareComplex
    target: SquareComplex
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    square_map: Mapping[str, str]

    @classmethod
    def identity(cls, c: SquareComplex) -> CellMap:
        return cls(
            c,
            c,
            {v: v for v in c.vertices},
            {e.name: e.name for e in c.edges},
            {s.name: s.name for s in c.squares},
        )


@dataclass
class CoveringMapReport:
    ok: bool
    sheets: int | None
    fibers: dict[str, Counter] = field(default_factory=dict)
    errors: list[tuple[str, str]] = field(default_factory=list)

    def error_kinds(self) -> set[str]:
        return {k for k, _ in self.errors}

    def lines(self) -> list[str]:
        out = [f"covering: {'PASS' if self.ok else 'FAIL'}", f"sheets: {self.sheets if self.sheets is not None else '-'}"]
        out += [f"error: {k}: {w}" for k, w in self.errors]
        return out


def square_alignment(src: Square, dst: Square, edge_map: Mapping[str, str]) -> list[int] | None:
    """Position in ``dst`` of each side of ``src``, or None if the images do not match.

    Rotations and reflections of the boundary are allowed; a reflection
    reverses the traversal direction of every side.
    """
    img = [(edge_map.get(e), s) for e, s in src.boundary]
    for shift in range(4):
        if all(img[k] == dst.boundary[(k + shift) % 4] for k in range(4)):
            return [(k + shift) % 4 for k in range(4)]
        if all(
            img[k][0] == dst.boundary[(shift - k) % 4][0] and img[k][1] == -dst.boundary[(shift - k) % 4][1]
            for k in range(4)
        ):
            return [(shift - k) % 4 for k in range(4)]
    return None


def check_covering_map(psi: CellMap) -> CoveringMapReport:
    """Check that ``psi`` is a combinatorial covering map.

    The map must send cells to cells compatibly with boundaries, induce a
    bijection from the link of every vertex onto the link of its image, and
    have the same number of preimages over every target vertex.
    """
    Y, Z = psi.source, psi.target
    errors: list[tuple[str, str]] = []
    zverts = set(Z.vertices)
    for v in Y.vertices:
        if psi.vertex_map.get(v) not in zverts:
            errors.append(("boundary", f"vertex {v} has no image"))
    for e in Y.edges:
        img = Z.edge.get(psi.edge_map.get(e.name, ""))
        if img is None:
            errors.append(("boundary", f"edge {e.name} has no image"))
        elif (psi.vertex_map.get(e.initial), psi.vertex_map.get(e.terminal)) != (img.initial, img.terminal):
            errors.append(("boundary", f"edge {e.name} endpoints do not map to those of {img.name}"))
    align: dict[str, list[int]] = {}
    for sq in Y.squares:
        img = Z.square.get(psi.square_map.get(sq.name, ""))
        a = None if img is None else square_alignment(sq, img, psi.edge_map)
        if a is None:
            errors.append(("boundary", f"square {sq.name} boundary does not map onto a square"))
        else:
            align[sq.name] = a
    if errors:
        return CoveringMapReport(False, None, {}, errors)

    def corner_image(name: str, k: int) -> tuple[str, int]:
        a = align[name]
        # corner k lies between sides k-1 and k; under a reflection it is the
        # corner between their images, which is the larger-index one of the two
        j, jp = a[k], a[(k - 1) % 4]
        return psi.square_map[name], (j if (jp + 1) % 4 == j else jp)

    for v in Y.vertices:
        w = psi.vertex_map[v]
        ends_y, links_y = Y.link(v)
        ends_z, links_z = Z.link(w)
        mapped_ends = Counter((psi.edge_map[e], side) for e, side in ends_y)
        if mapped_ends != Counter(ends_z):
            errors.append(("link", f"vertex {v}: edge ends do not biject onto the link of {w}"))
            continue
        mapped_corners = Counter(corner_image(n, k) for (n, k), _, _ in links_y)
        if mapped_corners != Counter(c for c, _, _ in links_z):
            errors.append(("link", f"vertex {v}: square corners do not biject onto the link of {w}"))
    fibers = {
        "vertex": Counter(psi.vertex_map[v] for v in Y.vertices),
        "edge": Counter(psi.edge_map[e.name] for e in Y.edges),
        "square": Counter(psi.square_map[s.name] for s in Y.squares),
    }
    sizes = {fibers["vertex"].get(w, 0) for w in Z.vertices}
    if len(sizes) != 1:
        errors.append(("fiber", f"vertex fibers have sizes {sorted(sizes)}"))
        sheets = None
    else:
        sheets = sizes.pop()
        for kind, cells in (("edge", [e.name for e in Z.edges]), ("square", [s.name for s in Z.squares])):
            if any(fibers[kind].get(c, 0) != sheets for c in cells):
                errors.append(("fiber", f"{kind} fibers are not all of size {sheets}"))
    return CoveringMapReport(not errors, sheets, fibers, errors)


def isomorphic_under(A: SquareComplex, B: SquareComplex, vmap: Mapping[str, str]) -> list[str]:
    """Problems preventing ``vmap`` from extending to a cell isomorphism ``A -> B``.

    Both complexes must be simple in the sense that edges are determined by
    their oriented endpoint pairs and squares by their cyclic vertex
    sequences; an empty list means the extension exists.
    """
    problems = []
    if sorted(vmap) != sorted(A.vertices) or sorted(vmap.values()) != sorted(B.vertices):
        problems.append("vertex map is not a bijection")
        return problems

    def edge_keys(c: SquareComplex, rename=lambda v: v) -> Counter:
        return Counter((rename(e.initial), rename(e.terminal)) for e in c.edges)

    def square_keys(c: SquareComplex, rename=lambda v: v) -> Counter:
        out = Counter()
        for sq in c.squares:
            cyc = [rename(c.corner_vertex(sq, k)) for k in range(4)]
            rots = [tuple(cyc[k:] + cyc[:k]) for k in range(4)]
            rots += [tuple(reversed(r)) for r in rots]
            out[min(rots)] += 1
        return out

    ka, kb = edge_keys(A, vmap.__getitem__), edge_keys(B)
    if max(kb.values(), default=1) > 1 or max(edge_keys(A).values(), default=1) > 1:
        problems.append("complexes have parallel edges")
    elif ka != kb:
        problems.append("edges do not correspond")
    sa, sb = square_keys(A, vmap.__getitem__), square_keys(B)
    if max(sb.values(), default=1) > 1:
        problems.append("squares are not determined by their corners")
    elif sa != sb:
        problems.append("squares do not correspond")
    return problems

