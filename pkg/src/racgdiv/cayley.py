"""Finite exploration of the Cayley graph of a right-angled Coxeter group.

Vertices are group elements in normal form, the basepoint is the identity,
and the distance from the basepoint is the normal-form length.  Adjacent
vertices differ in length by exactly one, so a vertex path whose vertices
all have length ``>= r`` is an ``r``-avoidant path.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import DefiningGraph
from .words import RACG, NormalForm, RaySpec

__all__ = [
    "AvoidantResult",
    "BallIndex",
    "BudgetExceededError",
    "DEFAULT_ELEMENT_BUDGET",
    "DEFAULT_PAIR_BUDGET",
    "DegreeFit",
    "DivergenceSample",
    "avoidant_distance",
    "build_ball",
    "default_cap",
    "delta_estimate",
    "fit_degree",
    "geodesic_divergence_profile",
    "pair_divergence",
    "read_samples_csv",
    "samples_to_csv",
]

DEFAULT_ELEMENT_BUDGET = 1_500_000
DEFAULT_PAIR_BUDGET = 2_000_000
CSV_HEADER = ("kind", "r", "value", "exact", "cap", "stable")


class BudgetExceededError(RuntimeError):
    pass


def _group(g: DefiningGraph | RACG) -> RACG:
    return g if isinstance(g, RACG) else RACG(g)


def default_cap(r: int) -> int:
    return r + 4


# --- balls -------------------------------------------------------------------


@dataclass(frozen=True)
class BallIndex:
    """All elements of length at most ``radius``, grouped by length.

    ``spheres[k]`` is the sorted list of normal forms of length ``k``.
    """

    radius: int
    spheres: tuple[tuple[NormalForm, ...], ...]

    @property
    def elements(self) -> tuple[tuple[NormalForm, ...], ...]:
        return self.spheres

    def sphere(self, k: int) -> tuple[NormalForm, ...]:
        return self.spheres[k]

    def sizes(self) -> list[int]:
        return [len(s) for s in self.spheres]

    def __len__(self):
        return sum(self.sizes())

    def __contains__(self, x: NormalForm) -> bool:
        return len(x) <= self.radius and x in set(self.spheres[len(x)])


def build_ball(
    g: DefiningGraph | RACG, r: int, budget: int = DEFAULT_ELEMENT_BUDGET
) -> BallIndex:
    """Breadth-first enumeration of the ball of radius ``r`` about the identity."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    G = _group(g)
    spheres: list[tuple[NormalForm, ...]] = [((),)]
    total = 1
    for k in range(r):
        nxt = set()
        for x in spheres[-1]:
            for s in range(G.n):
                y = G.multiply_letter(x, s)
                if len(y) > k:
                    nxt.add(y)
        total += len(nxt)
        if total > budget:
            raise BudgetExceededError(f"ball of radius {k + 1} exceeds {budget} elements")
        spheres.append(tuple(sorted(nxt)))
    return BallIndex(r, tuple(spheres))


# --- avoidant distance ----------------------------------------------------------


@dataclass(frozen=True)
class AvoidantResult:
    """Shortest ``r``-avoidant path length found inside the annulus ``r <= |v| <= r + cap``.

    ``value`` is ``None`` when no path exists inside the annulus.  ``exact``
    certifies the value as the true avoidant distance: every path of that
    length or shorter between the endpoints fits in the annulus.  ``stable``
    means the value did not change when recomputed with ``cap + 2``.
    """

    value: int | None
    radius: int
    cap: int
    stable: bool | None
    exact: bool
    explored: int
    path: tuple[NormalForm, ...] | None = None


def _band_neighbors(G: RACG, lo: int, hi: int):
    n = G.n
    mult = G.multiply_letter

    def nbrs(v: NormalForm):
        out = []
        for s in range(n):
            y = mult(v, s)
            if lo <= len(y) <= hi:
                out.append(y)
        return out

    return nbrs


def _band_search(
    G: RACG,
    x: NormalForm,
    y: NormalForm,
    lo: int,
    hi: int,
    budget: int,
    want_path: bool,
) -> tuple[int | None, int, tuple[NormalForm, ...] | None, bool]:
    """Bidirectional BFS from ``x`` to ``y`` through vertices with ``lo <= |v| <= hi``.

    Returns ``(distance, explored, path, touched_outer)``; ``touched_outer``
    reports whether any visited vertex reached length ``hi``.
    """
    if x == y:
        return 0, 1, ((x,) if want_path else None), len(x) >= hi
    nbrs = _band_neighbors(G, lo, hi)
    # per side: vertex -> (depth, parent)
    seen: list[dict] = [{x: (0, None)}, {y: (0, None)}]
    frontier = [[x], [y]]
    touched = len(x) >= hi or len(y) >= hi
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = seen[side], seen[1 - side]
        best = None
        nxt = []
        for v in frontier[side]:
            dv = mine[v][0] + 1
            for u in nbrs(v):
                if u in mine:
                    continue
                mine[u] = (dv, v)
                nxt.append(u)
                if len(u) >= hi:
                    touched = True
                if u in other:
                    total = dv + other[u][0]
                    if best is None or total < best[0]:
                        best = (total, u)
        explored = len(seen[0]) + len(seen[1])
        if best is not None:
            path = None
            if want_path:
                head = _chain(seen[0], best[1])[::-1]
                tail = _chain(seen[1], best[1])[1:]
                path = tuple(head + tail)
            return best[0], explored, path, touched
        if explored > budget:
            raise BudgetExceededError(f"avoidant search exceeded {budget} elements")
        frontier[side] = nxt
    return None, len(seen[0]) + len(seen[1]), None, touched


def _chain(seen: dict, v) -> list:
    out = []
    while v is not None:
        out.append(v)
        v = seen[v][1]
    return out


def avoidant_distance(
    g: DefiningGraph | RACG,
    x: NormalForm,
    y: NormalForm,
    r: int,
    cap: int | None = None,
    *,
    check_stability: bool = True,
    budget: int = DEFAULT_ELEMENT_BUDGET,
    with_path: bool = False,
) -> AvoidantResult:
    """Length of a shortest path from ``x`` to ``y`` avoiding the open ball of radius ``r``.

    The search is confined to the annulus ``r <= |v| <= r + cap``.  A path
    of length ``L`` between ``x`` and ``y`` never reaches length above
    ``(|x| + |y| + L) / 2``, which gives the exactness certificate.

    With ``cap=None`` the cap climbs from the smallest usable value towards
    ``r + 4``, stopping early once a value is certified exact or the element
    budget runs out; the result reports the largest cap whose stability
    check (at ``cap + 2``) also fit the budget.
    """
    G = _group(g)
    x = G.reduce(x)
    y = G.reduce(y)
    if len(x) < r or len(y) < r:
        raise ValueError(f"endpoints must have length >= r = {r}")
    if cap is None:
        return _auto_cap(G, x, y, r, budget, with_path)
    if cap < 0:
        raise ValueError("cap must be >= 0")
    hi = r + cap
    if len(x) > hi or len(y) > hi:
        raise ValueError(f"endpoints lie outside the annulus r..r+cap = {r}..{hi}")
    value, explored, path, exact = _capped(G, x, y, r, cap, budget, with_path)
    stable: bool | None = None
    if exact:
        stable = True
    elif check_stability:
        again, more, _, _ = _capped(G, x, y, r, cap + 2, budget, False)
        explored = max(explored, more)
        stable = again == value
    return AvoidantResult(value, r, cap, stable, exact, explored, path)


def _capped(G, x, y, r, cap, budget, with_path):
    hi = r + cap
    value, explored, path, touched = _band_search(G, x, y, r, hi, budget, with_path)
    if value is None:
        # the whole component was explored without reaching the outer bound
        exact = not touched
    else:
        exact = (len(x) + len(y) + value) // 2 <= hi
    return value, explored, path, exact


def _auto_cap(G, x, y, r, budget, with_path) -> AvoidantResult:
    target = default_cap(r)
    start = max(len(x), len(y)) - r
    runs: dict[int, tuple] = {}
    for c in range(start, max(target, start) + 3):
        try:
            runs[c] = _capped(G, x, y, r, c, budget, with_path)
        except BudgetExceededError:
            break
        if runs[c][3]:
            value, explored, path, _ = runs[c]
            return AvoidantResult(value, r, c, True, True, explored, path)
    if not runs:
        raise BudgetExceededError(f"no cap fits the element budget {budget}")
    checked = [c for c in runs if c + 2 in runs and c <= max(target, start)]
    if checked:
        c = max(checked)
        stable = runs[c][0] == runs[c + 2][0]
    else:
        c = max(runs)
        stable = None
    value, explored, path, _ = runs[c]
    return AvoidantResult(value, r, c, stable, False, explored, path)


# --- divergence samples -----------------------------------------------------------


@dataclass(frozen=True)
class DivergenceSample:
    r: int
    value: int | None
    kind: str
    exact: bool
    cap: int
    stable: bool | None

    def row(self) -> tuple[str, ...]:
        fmt = lambda b: "" if b is None else str(b).lower()
        return (
            self.kind,
            str(self.r),
            "" if self.value is None else str(self.value),
            fmt(self.exact),
            str(self.cap),
            fmt(self.stable),
        )


def _cap_for(cap: int | Callable[[int], int] | None, r: int) -> int | None:
    if cap is None:
        return None
    if callable(cap):
        return cap(r)
    return cap


def pair_divergence(
    g: DefiningGraph | RACG,
    alpha: RaySpec,
    beta: RaySpec,
    r: int,
    cap: int | Callable[[int], int] | None = None,
    **kwargs,
) -> DivergenceSample:
    """Avoidant distance between ``alpha(r)`` and ``beta(r)`` for rays from the identity."""
    G = _group(g)
    if alpha.base or beta.base:
        raise ValueError("rays must be based at the identity")
    res = avoidant_distance(G, G.ray_point(alpha, r), G.ray_point(beta, r), r, _cap_for(cap, r), **kwargs)
    return DivergenceSample(r, res.value, "pair-geodesic", res.exact, res.cap, res.stable)


def _check_bi_infinite(G: RACG, forward: RaySpec, backward: RaySpec, depth: int) -> None:
    window = tuple(reversed(backward.letters(depth))) + forward.letters(depth)
    if not G.is_reduced(window):
        raise ValueError("concatenation of the two rays is not a geodesic")


def _profile_point(args) -> DivergenceSample:
    graph, forward, backward, r, c, kwargs = args
    G = RACG(graph)
    res = avoidant_distance(G, G.ray_point(backward, r), G.ray_point(forward, r), r, c, **kwargs)
    return DivergenceSample(r, res.value, "bi-infinite", res.exact, res.cap, res.stable)


def geodesic_divergence_profile(
    g: DefiningGraph | RACG,
    forward: RaySpec,
    backward: RaySpec,
    r_range: Iterable[int],
    cap: int | Callable[[int], int] | None = None,
    *,
    workers: int = 1,
    **kwargs,
) -> list[DivergenceSample]:
    """Divergence of the bi-infinite geodesic ``backward^-1 . forward`` at each radius.

    Samples come back in the order of ``r_range`` regardless of ``workers``.
    """
    G = _group(g)
    if forward.base or backward.base:
        raise ValueError("both halves must start at the identity")
    rs = list(r_range)
    if not rs:
        return []
    _check_bi_infinite(G, forward, backward, max(rs))
    jobs = [(G.graph, forward, backward, r, _cap_for(cap, r), kwargs) for r in rs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_profile_point, jobs))
    return [_profile_point(j) for j in jobs]


def _single_source(G: RACG, x: NormalForm, lo: int, hi: int, budget: int) -> dict:
    nbrs = _band_neighbors(G, lo, hi)
    dist = {x: 0}
    frontier = [x]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for u in nbrs(v):
                if u not in dist:
                    dist[u] = d
                    nxt.append(u)
        if len(dist) > budget:
            raise BudgetExceededError(f"annulus exceeds {budget} elements")
        frontier = nxt
    return dist


def _sphere_sup(G, sphere, pairs, r, hi, budget):
    by_source: dict[NormalForm, list[NormalForm]] = {}
    for x, y in pairs:
        by_source.setdefault(x, []).append(y)
    best = 0
    missing = False
    for x in sorted(by_source):
        dist = _single_source(G, x, r, hi, budget)
        for y in by_source[x]:
            if y in dist:
                best = max(best, dist[y])
            else:
                missing = True
    return (None if missing else best)


def delta_estimate(
    g: DefiningGraph | RACG,
    r: int,
    strategy: str = "exhaustive",
    cap: int | None = None,
    *,
    pairs: int = 64,
    seed: int = 0,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> DivergenceSample:
    """Largest avoidant distance between points of the sphere of radius ``r``.

    ``strategy`` is ``"exhaustive"`` (all unordered pairs, at most
    ``pair_budget`` of them) or ``"sampled"`` (``pairs`` random pairs drawn
    with ``seed``, always including the lexicographic extremes).  A sampled
    value is only a lower bound for the supremum.
    """
    G = _group(g)
    c = default_cap(r) if cap is None else cap
    sphere = build_ball(G, r, budget).sphere(r)
    total = len(sphere) * (len(sphere) - 1) // 2
    if strategy == "exhaustive":
        if total > pair_budget:
            raise BudgetExceededError(f"{total} sphere pairs exceed the pair budget {pair_budget}")
        chosen = list(itertools.combinations(sphere, 2))
    elif strategy == "sampled":
        rng = random.Random(seed)
        chosen = []
        if len(sphere) > 1:
            chosen.append((sphere[0], sphere[-1]))
            for _ in range(pairs):
                i, j = rng.sample(range(len(sphere)), 2)
                chosen.append((sphere[min(i, j)], sphere[max(i, j)]))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not chosen:
        return DivergenceSample(r, 0, "sphere-sup-sampled", strategy == "exhaustive", c, True)
    value = _sphere_sup(G, sphere, chosen, r, r + c, budget)
    again = _sphere_sup(G, sphere, chosen, r, r + c + 2, budget)
    stable = again == value
    exact = strategy == "exhaustive" and stable
    return DivergenceSample(r, value, "sphere-sup-sampled", exact, c, stable)


# --- fitting and CSV -----------------------------------------------------------------


@dataclass(frozen=True)
class DegreeFit:
    slope: float
    intercept: float
    residual: float
    n: int


def fit_degree(samples: Sequence[DivergenceSample], min_r: int = 3) -> DegreeFit:
    """Least-squares slope of log(value) against log(r), ignoring ``r < min_r``."""
    pts = [(s.r, s.value) for s in samples if s.r >= min_r and s.value]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 samples with r >= {min_r} and positive value, got {len(pts)}")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return DegreeFit(float(slope), float(intercept), float(math.sqrt(np.mean(resid**2))), len(pts))


def samples_to_csv(samples: Iterable[DivergenceSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in samples:
        w.writerow(s.row())
    return buf.getvalue()


def read_samples_csv(text: str) -> list[DivergenceSample]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError("expected CSV header " + ",".join(CSV_HEADER))
    parse_flag = lambda s: None if s == "" else s == "true"
    out = []
    for row in rows[1:]:
        if not row:
            continue
        kind, r, value, exact, cap, stable = row
        out.append(
            DivergenceSample(
                int(r), int(value) if value else None, kind, bool(parse_flag(exact)), int(cap), parse_flag(stable)
            )
        )
    return out
