"""Local search for types around a vertex of a common cover, for general d.

Suppose ``Y`` covers the subdivided presentation complex and also covers
the chamber complex of groups with trivial local groups.  Then around a
vertex over the old vertex:

* its neighbours are the edge ends at the vertex, and they receive distinct
  generators of the defining graph (the morphism is nondegenerate);
* each neighbour sits in as many small squares as its image midpoint, and
  that must equal ``2 * degree`` of its generator;
* the centre of each big square at ``sigma`` has a pair type, the union of
  the types of its two sides at ``sigma``, which must be an edge of the
  graph; since all four sides of the big square meet the centre, opposite
  sides carry equal types, and the far sides must pass the square count too.

Any ``Y`` yields an assignment satisfying all of these, so an empty search
rules ``Y`` out.  The search is exhaustive over assignments of the
``2(d+1)`` edge ends.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..graph import gamma_d
from .complex import SquareComplex
from .presentation import build_presentation_complex, census_small_squares

__all__ = ["ObstructionResult", "assignment_violations", "obstruction_check"]

End = tuple[str, str]


@dataclass
class ObstructionResult:
    d: int
    consistent: bool
    link_compatible: int
    satisfying: list[dict[End, str]] = field(default_factory=list)
    failure_sites: Counter = field(default_factory=Counter)
    trace: list[str] = field(default_factory=list)
    red_flags: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"d: {self.d}",
            f"result: {'consistent' if self.consistent else 'obstruction'}",
            f"link_compatible_assignments: {self.link_compatible}",
            f"satisfying_assignments: {len(self.satisfying)}",
        ]
        if self.satisfying:
            a = self.satisfying[0]
            out.append("witness: " + " ".join(f"{e}:{s}={a[(e, s)]}" for e, s in sorted(a)))
        for site, n in sorted(self.failure_sites.items()):
            out.append(f"failing_site: {site} ({n} assignments)")
        out += [f"trace: {t}" for t in self.trace]
        out += [f"red_flag: {r}" for r in self.red_flags]
        if not self.consistent:
            out.append(
                "note: this rules out a single complex covering both; "
                "it says nothing about commensurability by other means"
            )
        return out


class _Model:
    def __init__(self, d: int):
        self.d = d
        self.X: SquareComplex = build_presentation_complex(d)
        self.g = gamma_d(d)
        self.gens = list(self.g.vertices)
        self.ends, links = self.X.link("v")
        self.census = {e: census_small_squares(d, f"E:{e[0]}") for e in self.ends}
        self.corners = links

    def wants(self, label: str) -> list[str]:
        n = census_small_squares(self.d, f"E:{label}")
        return [s for s in self.gens if 2 * self.g.degree(s) == n]

    def side(self, corner: tuple[str, int], j: int) -> tuple[str, int]:
        sq = self.X.square[corner[0]]
        return sq.boundary[(corner[1] + j) % 4]


def _link_assignments(m: _Model):
    """All injective assignments passing the vertex census and corner adjacency."""
    order = list(m.ends)
    at: dict[End, list[tuple[End, tuple]]] = {e: [] for e in order}
    for c, a, b in m.corners:
        at[a].append((b, c))
        at[b].append((a, c))
    assignment: dict[End, str] = {}
    used: set[str] = set()

    def extend(i: int):
        if i == len(order):
            yield dict(assignment)
            return
        end = order[i]
        for s in m.gens:
            if s in used or 2 * m.g.degree(s) != m.census[end]:
                continue
            if any(o in assignment and not m.g.adjacent(s, assignment[o]) for o, _ in at[end]):
                continue
            assignment[end] = s
            used.add(s)
            yield from extend(i + 1)
            del assignment[end]
            used.discard(s)

    yield from extend(0)


def _far_side_checks(m: _Model, a: dict[End, str]):
    """Far sides whose square count rules out the type of the opposite near side.

    Yields ``(corner, near side, far side, other near side, near type, other type)``,
    last square first.
    """
    order = sorted(m.corners, key=lambda c: (-int(c[0][0][1:]), c[0][1]))
    for corner, in_end, out_end in order:
        here = m.side(corner, 0)
        prev = m.side(corner, -1)
        # side k is opposite side k+2, side k-1 opposite side k+1
        sides = ((here, out_end, m.side(corner, 2), prev, in_end), (prev, in_end, m.side(corner, 1), here, out_end))
        for near, near_end, far, other, other_end in sides:
            s = a[near_end]
            need = census_small_squares(m.d, f"E:{far[0]}")
            if 2 * m.g.degree(s) != need:
                yield corner, near, far, other, s, a[other_end]


def assignment_violations(d: int, a: dict[End, str]) -> list[str]:
    """Every constraint broken by a full assignment of edge ends to generators."""
    m = _Model(d)
    out = []
    if sorted(a) != sorted(m.ends):
        return ["assignment does not cover the edge ends"]
    if len(set(a.values())) != len(a):
        out.append("two edge ends share a generator")
    for e in m.ends:
        if 2 * m.g.degree(a[e]) != m.census[e]:
            out.append(f"end {e} typed {a[e]} fails the square count")
    for c, x, y in m.corners:
        if not m.g.adjacent(a[x], a[y]):
            out.append(f"corner {c}: {a[x]} and {a[y]} do not commute")
    for corner, near, far, other, s, t in _far_side_checks(m, a):
        out.append(f"corner {corner}: far side {far[0]} would need type {s}")
    return out


def obstruction_check(d: int) -> ObstructionResult:
    if d < 2:
        raise ValueError("d must be >= 2")
    m = _Model(d)
    res = ObstructionResult(d, False, 0)
    first_failure = None
    for a in _link_assignments(m):
        res.link_compatible += 1
        fails = list(_far_side_checks(m, a))
        if not fails:
            res.satisfying.append(a)
            continue
        # report the corner over a0 and a_d first, when it fails
        fails.sort(key=lambda f: (f[1][0] != "a0" or f[3][0] != f"a{d}"))
        corner = fails[0][0]
        res.failure_sites[f"{corner[0]} = {m.X.square[corner[0]].word()}"] += 1
        if first_failure is None:
            first_failure = (a, fails[0])
    res.consistent = bool(res.satisfying)
    if res.consistent and d > 2:
        res.red_flags.append(f"{len(res.satisfying)} assignments survive for d = {d}; the local model is too weak")
    if not res.consistent and d == 2:
        res.red_flags.append("no assignment survives for d = 2, although a common cover exists")
    if first_failure is not None and not res.consistent:
        a, (corner, near, far, other, s, t) = first_failure
        name, k = corner
        options = m.wants(far[0])
        res.trace = [
            "base vertex has the empty type; its edge ends are typed "
            + " ".join(f"{e}:{side}={a[(e, side)]}" for e, side in sorted(a)),
            f"centre of square {name} ({m.X.square[name].word()}) at corner {k}: "
            f"its sides at the base vertex lie over {near[0]} and {other[0]}",
            f"so the centre has type {{{','.join(sorted((s, t)))}}}",
            f"the side opposite the {near[0]} side lies over {far[0]} and meets the next base vertex "
            f"across the {other[0]} midpoint; it sits in {census_small_squares(d, 'E:' + far[0])} small squares, "
            f"so its type is one of {{{','.join(options)}}}",
            f"so the centre also has type {{x,{t}}} for such an x, which excludes {s} "
            f"({s} needs {2 * m.g.degree(s)} small squares): contradiction",
        ]
    return res
