"""The one-vertex square complex with edges a0..ad, and its vertex census."""

from __future__ import annotations

import re

import networkx as nx

from ..graph import gamma_d
from .complex import Edge, Square, SquareComplex, centre, midpoint, square_subdivision

__all__ = [
    "build_presentation_complex",
    "census_by_counting",
    "census_kinds",
    "census_small_squares",
    "whitehead_link",
    "whitehead_link_matches_gamma",
]


def build_presentation_complex(d: int) -> SquareComplex:
    """Presentation complex of ``<a0..ad | a0 a1 = a1 a0, a_i^-1 a0 a_i = a_(i-1)>``.

    Square ``R1`` reads ``a0 a1 a0^-1 a1^-1`` and ``R<i>`` reads
    ``a_i^-1 a0 a_i a_(i-1)^-1`` for ``2 <= i <= d``.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    edges = tuple(Edge(f"a{i}", "v", "v") for i in range(d + 1))
    squares = [Square("R1", (("a0", 1), ("a1", 1), ("a0", -1), ("a1", -1)))]
    for i in range(2, d + 1):
        squares.append(Square(f"R{i}", ((f"a{i}", -1), ("a0", 1), (f"a{i}", 1), (f"a{i - 1}", -1))))
    return SquareComplex(("v",), edges, tuple(squares), name=f"X_{d}")


def whitehead_link(d: int) -> nx.MultiGraph:
    """Link of the vertex: edge ends ``(a_i, "i"|"t")``, one edge per square corner."""
    return build_presentation_complex(d).link_graph("v")


def whitehead_link_matches_gamma(d: int) -> bool:
    link = whitehead_link(d)
    if any(u == v for u, v in link.edges()) or nx.number_of_edges(nx.Graph(link)) != link.number_of_edges():
        return False
    return nx.is_isomorphic(nx.Graph(link), gamma_d(d).to_networkx())


def census_kinds(d: int) -> list[str]:
    return ["V"] + [f"E:a{i}" for i in range(d + 1)] + ["F"]


_EDGE_KIND = re.compile(r"E:a(\d+)")


def census_small_squares(d: int, kind: str) -> int:
    """Small squares at a vertex of the subdivided complex, by the vertex's position.

    ``kind`` is ``V`` (the old vertex), ``E:a<i>`` (midpoint of ``a_i``) or
    ``F`` (a square centre).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if kind == "V":
        return 4 * d
    if kind == "F":
        return 4
    m = _EDGE_KIND.fullmatch(kind)
    if not m or int(m.group(1)) > d:
        raise ValueError(f"unknown vertex kind {kind!r}; expected one of {' '.join(census_kinds(d))}")
    i = int(m.group(1))
    if i == 0:
        return 2 * (d + 1)
    return 4 if i == d else 6


def census_by_counting(d: int) -> dict[str, int]:
    """The census read off the subdivided presentation complex by counting corners."""
    Z, _ = square_subdivision(build_presentation_complex(d))
    out = {"V": len(Z.corners("v"))}
    for i in range(d + 1):
        out[f"E:a{i}"] = len(Z.corners(midpoint(f"a{i}")))
    counts = {len(Z.corners(centre(f"R{i}"))) for i in range(1, d + 1)}
    if len(counts) != 1:
        raise AssertionError(f"square centres disagree: {counts}")
    out["F"] = counts.pop()
    return out
