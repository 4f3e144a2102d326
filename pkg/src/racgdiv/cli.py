"""Command-line front end.

Exit status is 0 on success, 1 when a verification fails (invalid graph,
failed covering check, obstruction search disagreeing with its red-flag
expectations) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cayley import (
    DEFAULT_ELEMENT_BUDGET,
    DEFAULT_PAIR_BUDGET,
    BudgetExceededError,
    avoidant_distance,
    build_ball,
    delta_estimate,
    fit_degree,
    geodesic_divergence_profile,
    pair_divergence,
    read_samples_csv,
    samples_to_csv,
)
from .classify import InvalidGraphError, classify
from .graph import (
    DefiningGraph,
    GraphFormatError,
    format_graph,
    four_cycle_graph,
    gamma_d,
    parse_graph,
    validate,
)
from .words import RACG, RaySpec

__all__ = ["main", "run"]


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> DefiningGraph:
    try:
        return parse_graph(_read_text(path))
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _word(G: RACG, text: str, what: str):
    try:
        return G.word(text)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None


def _cap(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("cap must be an integer or 'auto'") from None
    if v < 0:
        raise argparse.ArgumentTypeError("cap must be >= 0")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# --- subcommands -------------------------------------------------------------------------


def cmd_validate(args) -> tuple[str, int]:
    rep = validate(_load_graph(args.graph))
    return "\n".join(rep.lines()) + "\n", 0 if rep.is_valid else 1


def cmd_classify(args) -> tuple[str, int]:
    g = _load_graph(args.graph)
    try:
        return classify(g).report(), 0
    except InvalidGraphError as exc:
        return "class: invalid\n" + "\n".join(exc.report.lines()) + "\n", 1


def cmd_fourgraph(args) -> tuple[str, int]:
    g = _load_graph(args.graph)
    fg = four_cycle_graph(g)
    names = [c.label(g) for c in fg.nodes]
    out = DefiningGraph.from_edges(names, [(names[i], names[j]) for i, j in sorted(fg.links)])
    comps = "; ".join(" ".join(names[i] for i in comp) for comp in fg.components)
    comment = f"four-cycle graph: {len(names)} nodes, {len(fg.links)} links\ncomponents: {comps}"
    return format_graph(out, comment), 0


def cmd_gamma_d(args) -> tuple[str, int]:
    return format_graph(gamma_d(args.d), f"gamma_d d={args.d}"), 0


def cmd_sphere(args) -> tuple[str, int]:
    G = RACG(_load_graph(args.graph))
    ball = build_ball(G, args.r, args.budget)
    sizes = ball.sizes()
    lines = [f"radius: {args.r}", f"sphere_size: {sizes[-1]}", "sizes: " + " ".join(map(str, sizes))]
    if args.list:
        lines += [f"element: {G.names(x)}" for x in ball.sphere(args.r)]
    return "\n".join(lines) + "\n", 0


def cmd_avoidant(args) -> tuple[str, int]:
    G = RACG(_load_graph(args.graph))
    x = G.reduce(_word(G, args.x, "--x"))
    y = G.reduce(_word(G, args.y, "--y"))
    try:
        res = avoidant_distance(G, x, y, args.r, args.cap, budget=args.budget, with_path=args.path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    flag = lambda b: "-" if b is None else str(b).lower()
    lines = [
        f"x: {G.names(x)}",
        f"y: {G.names(y)}",
        f"r: {res.radius}",
        f"cap: {res.cap}",
        f"value: {res.value if res.value is not None else 'none'}",
        f"exact: {flag(res.exact)}",
        f"stable: {flag(res.stable)}",
    ]
    if res.path:
        lines += [f"path: {G.names(v) or '1'}" for v in res.path]
    return "\n".join(lines) + "\n", 0


def cmd_div_profile(args) -> tuple[str, int]:
    G = RACG(_load_graph(args.graph))
    rs = range(args.rmin, args.rmax + 1)
    if args.ray_alpha or args.ray_beta:
        if not (args.ray_alpha and args.ray_beta):
            raise UsageError("--ray-alpha and --ray-beta go together")
        alpha = RaySpec(period=_word(G, args.ray_alpha, "--ray-alpha"))
        beta = RaySpec(period=_word(G, args.ray_beta, "--ray-beta"))
        samples = [pair_divergence(G, alpha, beta, r, args.cap, budget=args.budget) for r in rs]
    else:
        if args.ray_pos:
            w = _word(G, args.ray_pos, "--ray-pos")
        else:
            try:
                w = G.gamma_word()
            except ValueError as exc:
                raise UsageError(f"no default geodesic: {exc}; pass --ray-pos") from None
        back = _word(G, args.ray_neg, "--ray-neg") if args.ray_neg else tuple(reversed(w))
        try:
            samples = geodesic_divergence_profile(
                G, RaySpec(period=w), RaySpec(period=back), rs, args.cap, workers=args.threads, budget=args.budget
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return samples_to_csv(samples), 0


def cmd_delta(args) -> tuple[str, int]:
    G = RACG(_load_graph(args.graph))
    s = delta_estimate(
        G,
        args.r,
        args.strategy,
        args.cap,
        pairs=args.pairs,
        seed=args.seed,
        pair_budget=args.pair_budget,
        budget=args.budget,
    )
    return samples_to_csv([s]), 0


def cmd_fit(args) -> tuple[str, int]:
    try:
        samples = read_samples_csv(_read_text(args.input))
        fit = fit_degree(samples, args.min_r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [f"slope: {fit.slope:.4f}", f"intercept: {fit.intercept:.4f}", f"residual: {fit.residual:.4f}", f"samples: {fit.n}"]
    return "\n".join(lines) + "\n", 0


def cmd_covering(args) -> tuple[str, int]:
    from .covering import census_by_counting, census_small_squares, negative_controls, obstruction_check, verify_d2_cover
    from .covering.presentation import census_kinds

    if args.action == "verify-q2":
        rep = verify_d2_cover()
        lines = rep.lines()
        ok = rep.ok
        if args.controls:
            for name, want, got in negative_controls():
                hit = want in got
                ok = ok and hit
                lines.append(f"control: {name}: expected {want}: got {','.join(sorted(got)) or 'none'}: {'ok' if hit else 'MISSED'}")
        return "\n".join(lines) + "\n", 0 if ok else 1
    if args.d is None:
        raise UsageError(f"covering {args.action} needs --d")
    if args.d < 2:
        raise UsageError("--d must be >= 2")
    if args.action == "obstruction":
        res = obstruction_check(args.d)
        return "\n".join(res.lines()) + "\n", 1 if res.red_flags else 0
    counted = census_by_counting(args.d)
    lines = [f"d: {args.d}"]
    ok = True
    for kind in census_kinds(args.d):
        want = census_small_squares(args.d, kind)
        ok = ok and want == counted[kind]
        lines.append(f"{kind}: {want} counted {counted[kind]}")
    lines.append(f"census: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n", 0 if ok else 1


# --- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write output to this file instead of stdout")
    common.add_argument("--threads", type=_positive, default=1, help="worker processes for profiles")
    common.add_argument("--budget", type=_positive, default=DEFAULT_ELEMENT_BUDGET, help="element budget per search")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled strategies")

    p = argparse.ArgumentParser(prog="racgdiv", description="Divergence of right-angled Coxeter groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.add_argument("graph", help="graph file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("validate", cmd_validate, "check the standing hypotheses on a graph")
    graph_cmd("classify", cmd_classify, "divergence class of the group")
    graph_cmd("fourgraph", cmd_fourgraph, "emit the four-cycle graph as a graph file")

    sp = sub.add_parser("gamma-d", parents=[common], help="emit the graph gamma_d")
    sp.add_argument("--d", type=_positive, required=True)
    sp.set_defaults(func=cmd_gamma_d)

    sp = graph_cmd("sphere", cmd_sphere, "sphere sizes about the identity")
    sp.add_argument("--r", type=_nonneg, required=True)
    sp.add_argument("--list", action="store_true", help="also list the sphere's normal forms")

    sp = graph_cmd("avoidant", cmd_avoidant, "avoidant distance between two elements")
    sp.add_argument("--x", required=True, help="word, generator names separated by spaces")
    sp.add_argument("--y", required=True)
    sp.add_argument("--r", type=_nonneg, required=True)
    sp.add_argument("--cap", type=_cap, default=None, help="annulus width, or auto (default)")
    sp.add_argument("--path", action="store_true", help="print a shortest avoidant path")

    sp = graph_cmd("div-profile", cmd_div_profile, "divergence profile of a geodesic as CSV")
    sp.add_argument("--ray-pos", help="period of the forward ray (default: the graph's gamma word)")
    sp.add_argument("--ray-neg", help="period of the backward ray (default: reversed forward period)")
    sp.add_argument("--ray-alpha", help="period of the first ray of a pair (pair divergence)")
    sp.add_argument("--ray-beta", help="period of the second ray of a pair")
    sp.add_argument("--rmin", type=_nonneg, default=1)
    sp.add_argument("--rmax", type=_nonneg, required=True)
    sp.add_argument("--cap", type=_cap, default=None)

    sp = graph_cmd("delta", cmd_delta, "sup of avoidant distances over sphere pairs, as CSV")
    sp.add_argument("--r", type=_nonneg, required=True)
    sp.add_argument("--strategy", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--pairs", type=_positive, default=64, help="random pairs for the sampled strategy")
    sp.add_argument("--pair-budget", type=_positive, default=DEFAULT_PAIR_BUDGET)
    sp.add_argument("--cap", type=_cap, default=None)

    sp = sub.add_parser("fit", parents=[common], help="log-log slope of a profile CSV")
    sp.add_argument("--input", required=True, help="CSV file, or - for stdin")
    sp.add_argument("--min-r", type=_nonneg, default=3)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("covering", parents=[common], help="covering constructions")
    sp.add_argument("action", choices=["verify-q2", "obstruction", "census"])
    sp.add_argument("--d", type=int)
    sp.add_argument("--controls", action="store_true", help="also run the negative controls (verify-q2)")
    sp.set_defaults(func=cmd_covering)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, status = args.func(args)
    except UsageError as exc:
        print(f"racgdiv: error: {exc}", file=stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"racgdiv: budget exceeded: {exc}", file=stderr)
        return 1
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
