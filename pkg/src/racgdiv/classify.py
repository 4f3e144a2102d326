"""Divergence class of a right-angled Coxeter group read off its defining graph."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .graph import (
    DefiningGraph,
    ValidationReport,
    enumerate_four_cycles,
    gamma_d,
    is_cfs,
    is_join,
    validate,
)
from .words import RACG

__all__ = ["DivergenceClass", "DivergenceTag", "InvalidGraphError", "classify", "gamma_degree"]


class DivergenceTag(enum.Enum):
    LINEAR = "Linear"
    QUADRATIC = "Quadratic"
    AT_LEAST_CUBIC = "AtLeastCubic"
    EXPONENTIAL = "Exponential"

    def __str__(self):
        return self.value


class InvalidGraphError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid defining graph\n" + "\n".join(report.lines()))


@dataclass(frozen=True)
class DivergenceClass:
    """A divergence class with the combinatorial evidence for it.

    ``witness_kind`` is one of ``bipartition``, ``cfs-component``,
    ``gamma-word`` or ``no-four-cycles``; ``witness`` is its text rendering.
    """

    tag: DivergenceTag
    witness_kind: str
    witness: str
    notes: tuple[str, ...] = ()
    degree: int | None = None
    warnings: tuple[str, ...] = field(default=())

    def lines(self) -> list[str]:
        out = [f"class: {self.tag}", f"witness_kind: {self.witness_kind}", f"witness: {self.witness}"]
        if self.degree is not None:
            out.append(f"degree: {self.degree}")
        out += [f"note: {n}" for n in self.notes]
        out += [f"warning: {w}" for w in self.warnings]
        return out

    def report(self) -> str:
        return "\n".join(self.lines()) + "\n"


_GAMMA_NAMES = re.compile(r"[ab]\d+")


def gamma_degree(g: DefiningGraph) -> int | None:
    """``d`` if ``g`` was generated as (or is literally equal to) ``gamma_d(d)``."""
    if g.origin and g.origin.startswith("gamma_d:"):
        return int(g.origin.split(":", 1)[1])
    if g.n % 2 or g.n < 4 or not all(_GAMMA_NAMES.fullmatch(v) for v in g.vertices):
        return None
    d = g.n // 2 - 1
    ref = gamma_d(d)
    if set(ref.vertices) == set(g.vertices) and ref.edges == g.edges:
        return d
    return None


def classify(g: DefiningGraph) -> DivergenceClass:
    """Linear, quadratic, at-least-cubic or exponential divergence of ``W(g)``.

    The decision is, in order: join, no induced 4-cycle (hyperbolic), CFS,
    otherwise at least cubic.
    """
    rep = validate(g)
    if not rep.is_valid:
        raise InvalidGraphError(rep)
    warnings = ()
    if rep.separating_edge_pairs:
        pairs = ", ".join(f"{u}-{v}" for u, v in rep.separating_edge_pairs)
        warnings = (
            f"adjacent pair(s) {pairs} separate the graph: the group splits over a finite "
            "subgroup, so it has infinitely many ends and avoidant distances can be infinite",
        )

    split = is_join(g)
    if split is not None:
        left, right = split
        return DivergenceClass(
            DivergenceTag.LINEAR, "bipartition", f"{{{' '.join(left)}}} | {{{' '.join(right)}}}", warnings=warnings
        )
    if not enumerate_four_cycles(g):
        return DivergenceClass(
            DivergenceTag.EXPONENTIAL,
            "no-four-cycles",
            "graph has no induced 4-cycle",
            notes=("group is hyperbolic",),
            warnings=warnings,
        )
    comp = is_cfs(g)
    if comp is not None:
        labels = " ".join(c.label(g) for c in comp)
        return DivergenceClass(DivergenceTag.QUADRATIC, "cfs-component", labels, warnings=warnings)

    G = RACG(g)
    d = gamma_degree(g)
    if d is not None:
        notes = [f"generated as Γ_{d}: divergence polynomial of degree {d}"]
    else:
        notes = ["exact polynomial degree is not determined by the graph test alone"]
    return DivergenceClass(
        DivergenceTag.AT_LEAST_CUBIC,
        "gamma-word",
        G.names(G.gamma_word()),
        notes=tuple(notes),
        degree=d,
        warnings=warnings,
    )
