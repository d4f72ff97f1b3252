"""Command-line front end.

Exit status: 0 on success (a losing position is still a success), 1 when
the input game cannot be read or is invalid, 2 on usage errors, 3 when a
step, node or saturation budget runs out.
"""

import argparse
import json
import sys

from .analysis import compute_repairs, report
from .errors import (
    BudgetExceededError,
    BuchiProvError,
    ConvergenceError,
    ParseError,
    SizeLimitError,
    UnassignedVariableError,
)
from .fixpoint import DEFAULT_SATURATION_BOUND, GFP_MODES, Trace, solve_win0
from .game import RepairSpec, game_to_dot, load_game, solve_boolean
from .interpretation import make_pi_strat
from .poly import poly_eval
from .semirings import builtin_targets
from .strategies import (
    DEFAULT_NODE_BUDGET,
    Absorption,
    absorbs,
    classify,
    dominant_sum,
    enumerate_winning,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _split_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_pairs(values, flag):
    pairs = []
    for value in values:
        for item in _split_list(value):
            u, sep, w = item.partition(":")
            if not sep or not u or not w:
                raise UsageError(f"{flag}: expected u:w, got {item!r}")
            pairs.append((u, w))
    return pairs


def _parse_assignment(text, semiring):
    out = {}
    for item in _split_list(text or ""):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--assign: expected name=value, got {item!r}")
        try:
            out[name.strip()] = semiring.parse_value(value)
        except ValueError as exc:
            raise UsageError(f"--assign: {exc}") from None
    return out


def _position(game, args, required=True):
    v = getattr(args, "position", None)
    if v is None:
        if required:
            raise UsageError("-p/--position is required for this command")
        return None
    if v not in game:
        raise UsageError(f"-p/--position: no position named {v!r} in the game")
    return v


def _tracked(game, args):
    if args.track is None:
        return None
    labels = []
    for value in args.track:
        labels.extend(_split_list(value))
    unknown = [lb for lb in labels if not game.has_label(lb)]
    if unknown:
        raise UsageError(f"--track: unknown edge label(s) {', '.join(unknown)}")
    return labels


def _solve(game, args, tracked=None, trace=None):
    interp = make_pi_strat(game, tracked)
    return solve_win0(
        game,
        interp,
        mode=args.gfp_mode,
        saturation_bound=args.saturation_bound,
        max_steps=args.max_steps,
        trace=trace,
    )


def _dump(data, out):
    out.write(json.dumps(data, indent=2, sort_keys=False) + "\n")


def _report_table(rep):
    lines = [f"position {rep.position}: winner {'yes' if rep.winner else 'no'}"]
    if rep.monomials:
        width = max(len(str(m.monomial)) for m in rep.monomials)
        lines.append(f"{'monomial'.ljust(width)}  kind")
        for m in rep.monomials:
            kind = "positional" if m.positional else "nonpositional"
            lines.append(f"{str(m.monomial).ljust(width)}  {kind}")
    c = rep.counts
    lines.append(
        f"{c['monomials']} monomial(s), {c['positional']} positional, "
        f"{c['nonpositional']} nonpositional"
    )
    return "\n".join(lines)


# --- commands ----------------------------------------------------------------


def cmd_solve(game, args, out, err):
    v = _position(game, args, required=False)
    tracked = _tracked(game, args)
    trace = Trace() if args.trace else None
    values = _solve(game, args, tracked, trace)
    if trace is not None:
        for line in trace.lines:
            err.write(line + "\n")
    targets = [v] if v is not None else list(game.positions)
    if args.json:
        reports = [report(values[p], game, p).to_json() for p in targets]
        _dump(reports[0] if v is not None else reports, out)
        return EXIT_OK
    for p in targets:
        line = str(values[p]) if v is not None else f"{p}: {values[p]}"
        out.write(line + "\n")
        if args.report:
            out.write(_report_table(report(values[p], game, p)) + "\n")
    return EXIT_OK


def cmd_strategies(game, args, out, err):
    v = _position(game, args)
    entries = enumerate_winning(game, v, args.budget)
    interp = make_pi_strat(game)
    oracle = dominant_sum(game, interp, v, args.budget)
    solved = _solve(game, args)[v]
    rows = []
    for e in entries:
        dominated = any(absorbs(o.profile, e.profile) is Absorption.STRICT for o in entries)
        rows.append(
            {
                "profile": e.profile.to_json(),
                "monomial": str(e.profile.to_monomial()),
                "kind": classify(e.profile, game),
                "dominant": not dominated,
                "automata": e.multiplicity,
            }
        )
    agree = oracle == solved
    if args.json:
        _dump(
            {
                "position": v,
                "strategies": rows,
                "dominant_sum": str(oracle),
                "fixpoint": str(solved),
                "agree": agree,
            },
            out,
        )
    else:
        for r in rows:
            flag = "dominant" if r["dominant"] else "absorbed"
            out.write(f"{r['monomial']}  {r['kind']}  {flag}  automata={r['automata']}\n")
        out.write(f"dominant sum: {oracle}\n")
        out.write(f"fixed point:  {solved}\n")
        out.write(f"oracle: {'agree' if agree else 'MISMATCH'}\n")
    return EXIT_OK if agree else EXIT_INPUT


def cmd_repair(game, args, out, err):
    v = _position(game, args)
    removable = []
    for value in args.remove or []:
        removable.extend(_split_list(value))
    addable = _parse_pairs(args.add or [], "--add")
    spec = RepairSpec(frozenset(addable), frozenset(removable))
    problems = spec.violations(game)
    if problems:
        raise UsageError("--add/--remove: " + "; ".join(problems))
    result = compute_repairs(
        game,
        spec,
        v,
        posbool=not args.full_exponents,
        mode=args.gfp_mode,
        saturation_bound=args.saturation_bound,
        max_steps=args.max_steps,
    )
    if args.json:
        _dump(result.to_json(), out)
        return EXIT_OK
    out.write(f"position {v}: winner {'yes' if result.winner else 'no'}\n")
    out.write(f"value: {result.polynomial}\n")
    if not result.repairs:
        out.write("no repair within the given edges\n")
    for r in result.repairs:
        edges = "{" + ", ".join(r.sorted_edges()) + "}"
        out.write(f"{edges}  {'minimal' if r.minimal else 'non-minimal'}\n")
    return EXIT_OK


def cmd_eval(game, args, out, err):
    v = _position(game, args)
    levels = None
    if args.levels:
        levels = [lv.strip() for lv in args.levels.split("<") if lv.strip()]
    elif args.semiring == "minmax":
        raise UsageError("--levels is required with --semiring minmax")
    try:
        target = builtin_targets(levels)[args.semiring]
    except ValueError as exc:
        raise UsageError(f"--levels: {exc}") from None
    assignment = _parse_assignment(args.assign, target)
    poly = _solve(game, args)[v]
    try:
        value = poly_eval(poly, assignment, target)
    except UnassignedVariableError as exc:
        raise UsageError(f"--assign: {exc}") from None
    if args.json:
        _dump({"position": v, "semiring": target.name, "polynomial": str(poly),
               "value": target.format(value)}, out)
    else:
        out.write(target.format(value) + "\n")
    return EXIT_OK


def cmd_export_dot(game, args, out, err):
    if not args.strategy:
        out.write(game_to_dot(game))
        return EXIT_OK
    v = _position(game, args)
    entries = enumerate_winning(game, v, args.budget)
    if not entries:
        raise UsageError(f"--strategy: Player 0 has no winning strategy from {v}")
    if not 0 <= args.index < len(entries):
        raise UsageError(f"--index: expected 0..{len(entries) - 1}, got {args.index}")
    out.write(entries[args.index].representative.to_dot())
    return EXIT_OK


def cmd_check(game, args, out, err):
    # load_game already rejected invalid games; report the summary
    win = solve_boolean(game)
    region = [v for v in game.positions if win[v] == 0]
    if args.json:
        _dump({"valid": True, "positions": len(game.positions), "edges": len(game.edges),
               "winning_region": region}, out)
    else:
        out.write(f"ok: {len(game.positions)} positions, {len(game.edges)} edges\n")
        out.write("player 0 wins from: " + (", ".join(region) if region else "(none)") + "\n")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "strategies": cmd_strategies,
    "repair": cmd_repair,
    "eval": cmd_eval,
    "export-dot": cmd_export_dot,
    "check": cmd_check,
}


# --- argument parsing --------------------------------------------------------


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def build_parser():
    parser = argparse.ArgumentParser(
        prog="buchiprov",
        description="Semiring provenance of Büchi games: strategies and repairs.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("game", help="game file (text format or .json)")
    common.add_argument("-p", "--position", help="query position")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    solving = argparse.ArgumentParser(add_help=False)
    solving.add_argument("--gfp-mode", choices=GFP_MODES, default="accelerated")
    solving.add_argument("--saturation-bound", type=_positive_int,
                         default=DEFAULT_SATURATION_BOUND)
    solving.add_argument("--max-steps", type=_positive_int, default=None)

    p = sub.add_parser("solve", parents=[common, solving],
                       help="provenance polynomial of the winning formula")
    p.add_argument("--track", action="append", metavar="L1,L2,...",
                   help="track only these edge labels (default: all)")
    p.add_argument("--trace", action="store_true", help="print iterates to stderr")
    p.add_argument("--report", action="store_true", help="add the per-monomial report")

    p = sub.add_parser("strategies", parents=[common, solving],
                       help="enumerate winning strategies and compare with the fixed point")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_NODE_BUDGET,
                   help="node budget for the enumeration")

    p = sub.add_parser("repair", parents=[common, solving], help="minimal edge repairs")
    p.add_argument("--remove", action="append", metavar="L1,L2,...",
                   help="edge labels that may be removed")
    p.add_argument("--add", action="append", metavar="U:W,...",
                   help="position pairs that may be joined by a new edge")
    p.add_argument("--full-exponents", action="store_true",
                   help="keep exponents instead of computing in PosBool")

    p = sub.add_parser("eval", parents=[common, solving],
                       help="evaluate the polynomial in an application semiring")
    p.add_argument("--semiring", choices=("boolean", "viterbi", "tropical", "minmax"),
                   required=True)
    p.add_argument("--assign", metavar="x=VALUE,...", help="values of the edge variables")
    p.add_argument("--levels", metavar="LOW<...<HIGH", help="levels of the min-max semiring")

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz DOT of the game or a strategy")
    p.add_argument("--strategy", action="store_true",
                   help="export a winning strategy automaton from -p instead of the game")
    p.add_argument("--index", type=int, default=0,
                   help="which winning profile, in canonical order (default 0)")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_NODE_BUDGET)

    sub.add_parser("check", parents=[common], help="validate a game file")
    return parser


def run(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        game = load_game(args.game)
    except OSError as exc:
        err.write(f"error: cannot read {args.game}: {exc.strerror or exc}\n")
        return EXIT_INPUT
    except (ParseError, ValueError, KeyError, BuchiProvError) as exc:
        err.write(f"error: {args.game}: {exc}\n")
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](game, args, out, err)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (BudgetExceededError, ConvergenceError, SizeLimitError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except BuchiProvError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())
