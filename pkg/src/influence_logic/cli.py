"""Command-line interface.

Exit codes: 0 for success or a true verdict, 1 for a false verdict or a
rejected proof, 2 for malformed input.
"""

import argparse
import json
import sys

from . import __version__
from .canonical import build_preventive_canonical, build_promotional_canonical
from .files import (
    derivation_from_json,
    derivation_to_json,
    dump_json,
    hypotheses_from_json,
    load_json,
    network_from_json,
    network_to_json,
    spend_from_json,
)
from .formula import FormulaSyntaxError, SemanticsMode, evaluate, parse_agent_set, parse_atom, parse_formula
from .logic import check_derivation, decide_derivable, prev_derivation, promo_derivation
from .network import InputError, diffuse_fixpoint, render_set
from .numbers import format_fraction, to_fraction
from .solver import min_blocking_budget, min_promotion_budget


class UsageError(Exception):
    pass


def _mode(text):
    try:
        return SemanticsMode.coerce(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _verdict(flag, out):
    out.write("true\n" if flag else "false\n")
    return 0 if flag else 1


def cmd_diffuse(args, out):
    net = network_from_json(load_json(args.network))
    spend = spend_from_json(load_json(args.spend)) if args.spend else None
    trace = diffuse_fixpoint(net, parse_agent_set(args.seed), spend)
    if args.trace:
        for step in trace.steps[:-1]:
            out.write(render_set(step) + "\n")
    else:
        out.write(render_set(trace.final) + "\n")
    return 0


def cmd_eval(args, out):
    net = network_from_json(load_json(args.network))
    formula = parse_formula(args.formula)
    return _verdict(evaluate(net, formula, args.mode), out)


def cmd_budget(args, out):
    net = network_from_json(load_json(args.network))
    A, B = parse_agent_set(args.source), parse_agent_set(args.target)
    if args.mode is SemanticsMode.PROMOTIONAL:
        r = min_promotion_budget(net, A, B)
        if not r.feasible:
            out.write("infeasible\n")
        else:
            out.write(f"min_budget {format_fraction(r.min_budget)}\n")
            spend = ", ".join(f"{a}: {format_fraction(v)}" for a, v in r.witness.items())
            out.write("witness {" + spend + "}\n")
        return 0
    r = min_blocking_budget(net, A, B)
    if not r.blockable:
        out.write("unblockable\n")
    else:
        out.write(
            f"blocking_infimum {format_fraction(r.infimum)} "
            f"attained {'true' if r.attained else 'false'} clamp {render_set(r.witness_set)}\n"
        )
    return 0


def _budget_list(text):
    if not text:
        return []
    return [to_fraction(part, "budget") for part in text.replace(" ", "").split(",") if part]


def cmd_canon(args, out):
    X = hypotheses_from_json(load_json(args.hypotheses))
    if args.system is SemanticsMode.PROMOTIONAL:
        built = build_promotional_canonical(X)
        doc = network_to_json(built.network)
        doc["names"] = built.name_map()
    else:
        budgets = _budget_list(args.budgets)
        if not budgets and not X.hypotheses:
            raise UsageError("preventive construction needs --budgets or hypotheses with budgets")
        built = build_preventive_canonical(X, budgets)
        doc = network_to_json(built.network)
        doc["names"] = built.name_map()
        doc["epsilon"] = format_fraction(built.epsilon)
        doc["budgets"] = [format_fraction(p) for p in built.budgets]
    out.write(dump_json(doc))
    if args.names:
        with open(args.names, "w", encoding="utf-8") as fh:
            fh.write(dump_json(doc["names"]))
    return 0


def cmd_derive(args, out):
    X = hypotheses_from_json(load_json(args.hypotheses))
    query = parse_atom(args.query)
    stray = (query.left | query.right) - X.universe
    if stray:
        raise InputError(f"unknown agent {sorted(stray)[0]!r} in query")
    ok = decide_derivable(args.system, X, query.left, query.right, query.budget)
    code = _verdict(ok, out)
    if ok and args.explain:
        if args.system is SemanticsMode.PROMOTIONAL:
            d = promo_derivation(X, query.left, query.right, query.budget)
        else:
            d = prev_derivation(X, query.left, query.right, query.budget)
        text = dump_json(derivation_to_json(d))
        if args.explain == "-":
            out.write(text)
        else:
            with open(args.explain, "w", encoding="utf-8") as fh:
                fh.write(text)
    return code


def cmd_check(args, out):
    X = hypotheses_from_json(load_json(args.hypotheses)) if args.hypotheses else None
    d = derivation_from_json(load_json(args.proof), args.system.value)
    report = check_derivation(d, X)
    out.write(str(report) + "\n")
    return 0 if report else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="influence-logic",
        description="Threshold diffusion with marketing budgets and its two influence logics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diffuse", help="run diffusion from a seed set")
    p.add_argument("--network", required=True)
    p.add_argument("--seed", required=True, help="agents, e.g. 'a,c' or '{a,c}'; '' for none")
    p.add_argument("--spend", help="JSON spend file")
    p.add_argument("--trace", action="store_true", help="print every step of the chain")
    p.set_defaults(func=cmd_diffuse)

    p = sub.add_parser("eval", help="evaluate a formula on a network")
    p.add_argument("--network", required=True)
    p.add_argument("--mode", type=_mode, required=True, help="promo or prev")
    p.add_argument("--formula", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("budget", help="minimum promotion or blocking budget")
    p.add_argument("--network", required=True)
    p.add_argument("--mode", type=_mode, required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("canon", help="build the canonical network of a hypothesis file")
    p.add_argument("--system", type=_mode, required=True)
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--budgets", help="comma-separated budgets (preventive system)")
    p.add_argument("--names", help="also write the agent name map to this file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("derive", help="decide derivability of an atom from hypotheses")
    p.add_argument("--system", type=_mode, required=True)
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--query", required=True, help="atom such as '{b,c} |>3 {d}'")
    p.add_argument("--explain", metavar="FILE", help="write a checkable proof ('-' for stdout)")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("--system", type=_mode, required=True)
    p.add_argument("--hypotheses")
    p.add_argument("--proof", required=True)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, out)
    except (InputError, FormulaSyntaxError, UsageError, ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
