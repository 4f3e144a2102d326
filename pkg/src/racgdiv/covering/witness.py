"""The explicit common cover for d = 2.

``Q`` is an eight-sheeted cover of the presentation complex ``X_2``.  Its
square subdivision ``Y``, typed by the midpoint table and carrying the
covering elements from the phi table, is a covering of the canonical
complex of groups over the chamber of ``W(Gamma_2)``.  ``Y`` is also built
a second way, as eight chambers glued along mirrors, and the two builds are
compared cell by cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from ..graph import DefiningGraph, gamma_d
from .chamber import (
    CoveringData,
    VertexTypeMap,
    build_chamber,
    canonical_complex_of_groups,
    chamber_vertex,
    check_cog_covering,
    format_type,
    glue_chambers,
    parallelism_classes,
)
from .complex import (
    CellListError,
    CellMap,
    SquareComplex,
    centre,
    check_covering_map,
    condition_star_violations,
    isomorphic_under,
    midpoint,
    parse_cell_list,
    square_subdivision,
)
from .presentation import build_presentation_complex

__all__ = [
    "VerificationReport",
    "build_q2",
    "build_y_glued",
    "build_y_subdivided",
    "load_data",
    "negative_controls",
    "verify_d2_cover",
]


def load_data(name: str) -> str:
    return resources.files("racgdiv.covering").joinpath("data", name).read_text()


def parse_type_token(tok: str) -> str:
    """``i+`` -> ``a<i>``, ``i-`` -> ``b<i>``; ``1`` stands for the identity."""
    if tok == "1":
        return ""
    if len(tok) < 2 or tok[-1] not in "+-" or not tok[:-1].isdigit():
        raise ValueError(f"bad type {tok!r}")
    return ("a" if tok[-1] == "+" else "b") + tok[:-1]


def _rows(text: str, keyword: str, width: int) -> list[list[str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if toks[0] != keyword or len(toks) != width + 1:
            raise CellListError(f"expected '{keyword}' with {width} fields", no)
        out.append(toks[1:])
    return out


def build_q2(text: str | None = None) -> tuple[SquareComplex, CellMap]:
    """``Q`` and its cell map onto ``X_2``."""
    Q, elabels, slabels = parse_cell_list(load_data("q2.txt") if text is None else text)
    X = build_presentation_complex(2)
    vmap = {v: elabels.get("vertex:" + v, "") for v in Q.vertices}
    emap = {e.name: elabels.get(e.name, "") for e in Q.edges}
    return Q, CellMap(Q, X, vmap, emap, dict(slabels))


def _midpoint_types(Q: SquareComplex, text: str) -> dict[str, str]:
    types = {}
    for e, t in _rows(text, "type", 2):
        if e not in Q.edge:
            raise ValueError(f"type table names unknown edge {e}")
        types[e] = parse_type_token(t)
    missing = [e.name for e in Q.edges if e.name not in types]
    if missing:
        raise ValueError(f"type table misses edges {' '.join(missing)}")
    return types


def build_y_subdivided(
    Q: SquareComplex, g: DefiningGraph, types_text: str | None = None
) -> tuple[SquareComplex, VertexTypeMap]:
    """Square subdivision of ``Q`` with spherical types.

    Old vertices get the empty type, midpoints the tabulated generator, and
    square centres the union of the types of their four side midpoints.
    """
    mids = _midpoint_types(Q, load_data("q2_types.txt") if types_text is None else types_text)
    Y, _ = square_subdivision(Q)
    types: dict[str, frozenset[str]] = {v: frozenset() for v in Q.vertices}
    for e, s in mids.items():
        types[midpoint(e)] = frozenset([s])
    for sq in Q.squares:
        t = frozenset(mids[e] for e, _ in sq.boundary)
        if len(t) != 2 or not g.adjacent(*sorted(t)):
            raise ValueError(f"square {sq.name}: side types {format_type(t)} do not form an edge of the graph")
        types[centre(sq.name)] = t
    return Y, VertexTypeMap("spherical", types)


def typed_morphism(Y: SquareComplex, types: VertexTypeMap, K: SquareComplex) -> tuple[dict, dict, dict]:
    """The type-preserving morphism ``Y -> K``, cell by cell."""
    vmap = {v: chamber_vertex(types[v]) for v in Y.vertices}
    emap = {e.name: f"{vmap[e.initial]}->{vmap[e.terminal]}" for e in Y.edges}
    by_top = {}
    for sq in K.squares:
        top = K.edge[sq.boundary[1][0]].terminal
        by_top[top] = sq.name
    smap = {}
    for sq in Y.squares:
        corners = [vmap[Y.corner_vertex(sq, k)] for k in range(4)]
        top = max(corners, key=len)
        smap[sq.name] = by_top.get(top, "")
    return vmap, emap, smap


def phi_from_table(Y: SquareComplex, types: VertexTypeMap, text: str | None = None) -> dict[str, frozenset[str]]:
    """Covering elements, constant on parallelism classes, identity off the table."""
    cls = parallelism_classes(Y)
    value: dict[str, frozenset[str]] = {}
    for v, t, x in _rows(load_data("q2_phi.txt") if text is None else text, "phi", 3):
        want = frozenset([parse_type_token(t)])
        hits = [e.name for e in Y.edges if e.initial == v and types[e.terminal] == want]
        if len(hits) != 1:
            raise ValueError(f"phi table: {len(hits)} edges leave {v} towards type {t}")
        rep = cls[hits[0]]
        x = parse_type_token(x)
        elem = frozenset([x]) if x else frozenset()
        if value.setdefault(rep, elem) != elem:
            raise ValueError(f"phi table gives two values to the class of {hits[0]}")
    return {e.name: value.get(cls[e.name], frozenset()) for e in Y.edges}


def build_y_glued(Q: SquareComplex, g: DefiningGraph, types_text: str | None = None):
    """``Y`` as one chamber per vertex of ``Q``, glued along the mirror typed by each edge of ``Q``.

    Returns the glued complex, its types, and the vertex correspondence from
    the subdivided build.
    """
    mids = _midpoint_types(Q, load_data("q2_types.txt") if types_text is None else types_text)
    gluings = [(e.initial, e.terminal, mids[e.name]) for e in Q.edges]
    Y, types, where = glue_chambers(g, Q.vertices, gluings)
    vmap = {v: where[(v, chamber_vertex([]))] for v in Q.vertices}
    for e in Q.edges:
        a = where[(e.initial, chamber_vertex([mids[e.name]]))]
        b = where[(e.terminal, chamber_vertex([mids[e.name]]))]
        if a != b:
            raise ValueError(f"edge {e.name}: its two chambers do not share the mirror")
        vmap[midpoint(e.name)] = a
    for sq in Q.squares:
        t = sorted({mids[e] for e, _ in sq.boundary})
        images = {where[(Q.corner_vertex(sq, k), chamber_vertex(t))] for k in range(4)}
        if len(images) != 1:
            raise ValueError(f"square {sq.name}: its corner chambers do not meet in one vertex")
        vmap[centre(sq.name)] = images.pop()
    return Y, types, vmap


@dataclass
class VerificationReport:
    ok: bool
    stages: list[tuple[str, bool, str]] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)
    sheets: int | None = None
    chambers: int | None = None

    def error_kinds(self) -> set[str]:
        return {k for k, _ in self.errors}

    def lines(self) -> list[str]:
        out = [f"result: {'PASS' if self.ok else 'FAIL'}"]
        out.append(f"sheets: {self.sheets if self.sheets is not None else '-'}")
        out.append(f"chambers: {self.chambers if self.chambers is not None else '-'}")
        out += [f"stage: {name}: {'ok' if good else 'FAIL'}{': ' + detail if detail else ''}" for name, good, detail in self.stages]
        out += [f"error: {k}: {w}" for k, w in self.errors]
        return out


def verify_d2_cover(
    q_text: str | None = None, types_text: str | None = None, phi_text: str | None = None
) -> VerificationReport:
    """Run every stage of the d = 2 construction; data overrides allow negative controls."""
    rep = VerificationReport(False)

    def stage(name: str, good: bool, detail: str = "") -> bool:
        rep.stages.append((name, good, detail))
        return good

    try:
        Q, psi = build_q2(q_text)
    except CellListError as exc:
        rep.errors.append(("boundary", str(exc)))
        stage("parse Q", False, str(exc))
        return rep
    stage("parse Q", True, "cells {} {} {}".format(*Q.counts()))
    bad = condition_star_violations(Q)
    if not stage("orientation condition on Q", not bad, " ".join(bad)):
        rep.errors.append(("boundary", f"squares {' '.join(bad)} violate the orientation condition"))
        return rep
    cover = check_covering_map(psi)
    rep.sheets = cover.sheets
    rep.errors += cover.errors
    if not stage("Q covers X_2", cover.ok, f"sheets {cover.sheets}" if cover.ok else ""):
        return rep
    chi = Q.euler_characteristic()
    if not stage("euler characteristic", chi == cover.sheets * psi.target.euler_characteristic(), f"chi(Q) = {chi}"):
        return rep

    g = gamma_d(2)
    try:
        Y, types = build_y_subdivided(Q, g, types_text)
        phi = phi_from_table(Y, types, phi_text)
    except ValueError as exc:
        rep.errors.append(("type", str(exc)))
        stage("type Y", False, str(exc))
        return rep
    probs = types.problems(Y, g)
    if not stage("type Y", not probs, "cells {} {} {}".format(*Y.counts())):
        rep.errors += [("type", p) for p in probs]
        return rep

    target, _ = canonical_complex_of_groups(g)
    vmap, emap, smap = typed_morphism(Y, types, target.base)
    cog = check_cog_covering(Y, types, target, CoveringData(vmap, emap, smap, phi))
    rep.chambers = cog.sheets
    rep.errors += cog.errors
    if not stage("Y covers the chamber complex of groups", cog.ok, f"chambers {cog.sheets}"):
        return rep

    Y2, types2, corr = build_y_glued(Q, g, types_text)
    iso = isomorphic_under(Y, Y2, corr)
    same_types = all(types[v] == types2[corr[v]] for v in Y.vertices)
    if not stage("glued chambers match subdivided Q", not iso and same_types, "; ".join(iso)):
        rep.errors.append(("isomorphism", "; ".join(iso) or "types differ"))
        return rep
    # transport phi along the isomorphism (edges are determined by endpoints)
    by_ends = {(e.initial, e.terminal): e.name for e in Y2.edges}
    phi2 = {by_ends[(corr[e.initial], corr[e.terminal])]: phi[e.name] for e in Y.edges}
    v2, e2, s2 = typed_morphism(Y2, types2, target.base)
    cog2 = check_cog_covering(Y2, types2, target, CoveringData(v2, e2, s2, phi2))
    rep.errors += cog2.errors
    if not stage("glued build covers the chamber complex of groups", cog2.ok, f"chambers {cog2.sheets}"):
        return rep
    rep.ok = True
    return rep


def _corrupt_square(text: str) -> str:
    lines = text.splitlines()
    s2 = next(line for line in lines if line.startswith("square S2 "))
    out = []
    for line in lines:
        if line.startswith("square S1 "):
            out.append("square S1 " + s2.split(None, 2)[2])
        else:
            out.append(line)
    return "\n".join(out) + "\n"


def negative_controls() -> list[tuple[str, str, set[str]]]:
    """``(control, expected error kind, error kinds reported)`` for three corrupted inputs."""
    out = []
    bad_q = verify_d2_cover(q_text=_corrupt_square(load_data("q2.txt")))
    out.append(("square S1 given the word of S2", "link", bad_q.error_kinds()))
    bad_phi = load_data("q2_phi.txt").replace("phi v4 0- 0-", "phi v4 0- 1")
    out.append(("phi of class (v4, 0-) set to 1", "coset-collision", verify_d2_cover(phi_text=bad_phi).error_kinds()))
    g = gamma_d(2)
    target, types = canonical_complex_of_groups(g)
    K = target.base
    ident = CoveringData(
        {v: v for v in K.vertices},
        {e.name: e.name for e in K.edges},
        {s.name: s.name for s in K.squares},
        {},
    )
    single = check_cog_covering(K, types, target, ident)
    out.append(("single chamber, identity morphism", "fiber-size", single.error_kinds()))
    return out
