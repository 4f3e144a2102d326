"""Words, normal forms and walls in a right-angled Coxeter group.

Elements are represented by their ShortLex normal form: the
lexicographically least reduced word, as a tuple of generator indices.  In a
right-angled Coxeter group the reduced words of an element form a single
commutation class, so the normal form is the least word of that class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import islice
from typing import Iterable, Iterator, Sequence

from .graph import DefiningGraph, enumerate_four_cycles, is_join

__all__ = [
    "NonGeodesicRayError",
    "RACG",
    "RaySpec",
    "UnpieceableWordError",
    "Wall",
    "Word",
    "NormalForm",
    "build_gamma_word",
    "piece_decomposition",
]

Word = tuple[int, ...]
NormalForm = tuple[int, ...]


class UnpieceableWordError(ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"unpieceable at index {index}")


class NonGeodesicRayError(ValueError):
    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(f"ray label is not reduced at depth {depth}")


@dataclass(frozen=True)
class Wall:
    """The wall fixed by the reflection ``g s g^-1``.

    Walls compare by reflection only: many ``(g, s)`` give the same wall.
    """

    reflection: NormalForm
    wall_type: int = field(compare=False)


@dataclass(frozen=True)
class RaySpec:
    """An eventually periodic geodesic ray ``base . prefix . period^inf``."""

    base: NormalForm = ()
    prefix: Word = ()
    period: Word = ()

    def __post_init__(self):
        if not self.period:
            raise ValueError("ray period must be nonempty")

    def label(self) -> Iterator[int]:
        yield from self.prefix
        while True:
            yield from self.period

    def letters(self, i: int) -> Word:
        return tuple(islice(self.label(), i))


class RACG:
    """The right-angled Coxeter group of a defining graph.

    All operations are pure; the object only caches the commutation table.
    """

    def __init__(self, graph: DefiningGraph):
        self.graph = graph
        self.n = graph.n
        self.commutes = graph.adjacency

    def __repr__(self):
        return f"RACG({' '.join(self.graph.vertices)})"

    # -- words <-> names ----------------------------------------------------

    def word(self, text: str | Sequence[str]) -> Word:
        """Parse whitespace-separated generator names (empty = identity)."""
        names = text.split() if isinstance(text, str) else list(text)
        try:
            return tuple(self.graph.index[x] for x in names)
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r}") from None

    def names(self, w: Iterable[int]) -> str:
        return " ".join(self.graph.vertices[i] for i in w)

    # -- word problem -------------------------------------------------------

    def _cancel_position(self, x: Sequence[int], s: int) -> int:
        """Index of the letter ``s`` that ``x.s`` cancels, or -1.

        Only the last occurrence of ``s`` can cancel, and it does exactly
        when it commutes with every later letter.
        """
        c = self.commutes[s]
        for j in range(len(x) - 1, -1, -1):
            t = x[j]
            if t == s:
                return j
            if t not in c:
                return -1
        return -1

    def shortlex(self, w: Sequence[int]) -> NormalForm:
        """Least word of the commutation class of a reduced word.

        Repeatedly emits the least letter that commutes past everything
        still in front of it.
        """
        rest = list(w)
        out = []
        while rest:
            best = None
            for j, t in enumerate(rest):
                c = self.commutes[t]
                if (best is None or t < rest[best]) and all(u in c for u in rest[:j]):
                    best = j
            out.append(rest.pop(best))
        return tuple(out)

    def reduce(self, w: Iterable[int]) -> NormalForm:
        """ShortLex normal form of the element represented by ``w``."""
        red: list[int] = []
        for s in w:
            j = self._cancel_position(red, s)
            if j >= 0:
                del red[j]
            else:
                red.append(s)
        return self.shortlex(red)

    def multiply_letter(self, x: NormalForm, s: int) -> NormalForm:
        """``x . s`` for a normal form ``x``; linear time.

        A cancelled letter is simply deleted; otherwise ``s`` is inserted at
        the first position, among those it can commute back to, where it is
        smaller than the next letter.
        """
        c = self.commutes[s]
        k = len(x)
        while k > 0:
            t = x[k - 1]
            if t == s:
                return x[: k - 1] + x[k:]
            if t not in c:
                break
            k -= 1
        for p in range(k, len(x)):
            if s < x[p]:
                return x[:p] + (s,) + x[p:]
        return x + (s,)

    def multiply(self, x: NormalForm, y: Iterable[int]) -> NormalForm:
        for s in y:
            x = self.multiply_letter(x, s)
        return x

    def inverse(self, x: Sequence[int]) -> NormalForm:
        return self.reduce(reversed(x))

    def length(self, w: Iterable[int]) -> int:
        return len(self.reduce(w))

    # -- walls and geodesics --------------------------------------------------

    def wall(self, g: Sequence[int], s: int) -> Wall:
        """The wall ``g H_s``, i.e. fixed by ``g s g^-1``."""
        return Wall(self.reduce((*g, s, *reversed(g))), s)

    def wall_sequence(self, w: Sequence[int]) -> list[Wall]:
        """Walls crossed, in order, by the path from the identity labelled ``w``."""
        walls = []
        prefix: NormalForm = ()
        for s in w:
            walls.append(Wall(self.multiply(prefix, (s, *reversed(prefix))), s))
            prefix = self.multiply_letter(prefix, s)
        return walls

    def is_geodesic(self, w: Sequence[int]) -> bool:
        """True iff the path labelled ``w`` crosses no wall twice."""
        walls = self.wall_sequence(w)
        return len(set(walls)) == len(walls)

    def is_reduced(self, w: Sequence[int]) -> bool:
        return len(self.reduce(w)) == len(w)

    # -- special words ------------------------------------------------------

    def gamma_word(self) -> Word:
        """A word whose powers label a bi-infinite geodesic through the identity.

        Built as the closed depth-first walk of the complement graph from the
        first generator; each tree edge is traversed twice, so consecutive
        letters never commute and the last letter does not commute with the
        first.
        """
        if is_join(self.graph) is not None:
            raise ValueError("graph is a join: its complement is disconnected")
        adj = [
            [j for j in range(self.n) if j != i and j not in self.commutes[i]]
            for i in range(self.n)
        ]
        walk = [0]
        seen = {0}

        def visit(u: int) -> None:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    walk.append(v)
                    visit(v)
                    walk.append(u)

        visit(0)
        if len(walk) == 1:
            raise ValueError("complement graph has no edges")
        return tuple(walk[:-1])

    @cached_property
    def four_cycle_supports(self) -> list[frozenset[int]]:
        return [c.support for c in enumerate_four_cycles(self.graph)]

    def piece_decomposition(self, w: Sequence[int]) -> list[Word]:
        """Split ``w`` greedily into maximal pieces, each inside one 4-cycle's vertex set."""
        supports = self.four_cycle_supports
        pieces = []
        i = 0
        while i < len(w):
            letters: set[int] = set()
            j = i
            while j < len(w):
                trial = letters | {w[j]}
                if not any(trial <= s for s in supports):
                    break
                letters = trial
                j += 1
            if j == i:
                raise UnpieceableWordError(i)
            pieces.append(tuple(w[i:j]))
            i = j
        return pieces

    # -- rays -----------------------------------------------------------------

    def ray_point(self, ray: RaySpec, i: int) -> NormalForm:
        """The vertex at distance ``i`` along ``ray``."""
        if i < 0:
            raise ValueError("ray index must be >= 0")
        letters = ray.letters(i)
        if len(self.reduce(letters)) != i:
            raise NonGeodesicRayError(i)
        return self.multiply(ray.base, letters)

    def runs_along(self, ray: RaySpec, wall: Wall) -> bool:
        """True iff the ray's label lies in the link of the wall's type."""
        link = self.commutes[wall.wall_type]
        return all(t in link for t in (*ray.prefix, *ray.period))

    def gamma_rays(self, w: Word | None = None) -> tuple[RaySpec, RaySpec]:
        """Forward and backward halves of the bi-infinite geodesic labelled ``...www...``."""
        w = self.gamma_word() if w is None else tuple(w)
        return RaySpec(period=w), RaySpec(period=tuple(reversed(w)))


def build_gamma_word(g: DefiningGraph) -> Word:
    return RACG(g).gamma_word()


def piece_decomposition(w: Sequence[int], g: DefiningGraph) -> list[Word]:
    return RACG(g).piece_decomposition(w)
