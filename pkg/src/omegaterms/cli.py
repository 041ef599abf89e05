"""Command-line front end.

Exit codes: 0 holds / duplicator / plain report, 1 fails / spoiler,
2 input error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import automata, games, logic, monoids, orders
from .errors import ResourceLimitError, ValidationError
from .terms import parse_term, render_term

EXIT = {"holds": 0, "duplicator": 0, "value": 0, "fails": 1, "spoiler": 1}


def _emit(args, outcome, report, lines):
    if args.json:
        print(json.dumps({"outcome": outcome, **report}, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return EXIT[outcome]


def cmd_decide(args):
    s, t = parse_term(args.s), parse_term(args.t)
    d = orders.decide_aperiodic_identity(s, t, args.max_nodes)
    left, right = orders.render_order(d.left), orders.render_order(d.right)
    return _emit(args, d.verdict,
                 {"s": render_term(s), "t": render_term(t), "left": left, "right": right},
                 [d.verdict, f"left:  {left}", f"right: {right}"])


def cmd_monoid_check(args):
    M = monoids.load_monoid(args.monoid)
    check = monoids.identity_holds(M, args.s, args.t)
    outcome = "holds" if check.holds else "fails"
    lines = [outcome]
    if check.witness:
        lines += [f"  {a} -> {m}" for a, m in sorted(check.witness.items())]
    return _emit(args, outcome, {"monoid": M.name, "witness": check.witness}, lines)


def cmd_syntactic(args):
    if args.dfa:
        D = automata.load_dfa(args.dfa)
        source = args.dfa
    else:
        D = automata.regex_to_dfa(args.regex, args.alphabet)
        source = args.regex
    M, _ = automata.syntactic_monoid(D)
    M = monoids.FiniteMonoid(M.elements, M.identity, M.table, f"syntactic monoid of {source}")
    aperiodic, da = monoids.is_aperiodic(M), monoids.in_DA(M)
    table = monoids.to_json_dict(M)
    width = max(len(e) for e in M.elements)
    lines = [f"order: {M.size}", f"aperiodic: {str(aperiodic).lower()}",
             f"DA: {str(da).lower()}", "table:"]
    lines += ["  " + " ".join(x.ljust(width) for x in row) for row in table["table"]]
    return _emit(args, "value", {"order": M.size, "aperiodic": aperiodic, "DA": da,
                                 "monoid": table}, lines)


def cmd_game(args):
    F = logic.parse_fragment(args.fragment)
    S = games.Configuration(F, logic.Valuation(args.u), logic.Valuation(args.v))
    out = games.solve(S, args.certificate, args.max_nodes)
    cert = logic.render_formula(out.certificate) if out.certificate is not None else None
    lines = [out.winner] + ([f"certificate: {cert}"] if cert else [])
    return _emit(args, out.winner, {"fragment": str(F), "certificate": cert}, lines)


def cmd_rho(args):
    e = orders.rho_expand(parse_term(args.t), args.max_nodes)
    if args.canonical:
        e = orders.canonical_form(e)
    text = orders.render_order(e)
    return _emit(args, "value", {"expr": text}, [text])


def cmd_enum(args):
    found = list(monoids.enumerate_monoids(args.order, args.aperiodic, max_order=args.max_order))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for M in found:
            monoids.dump_monoid(M, os.path.join(args.out, f"{M.name}.json"))
    if args.json:
        print(json.dumps({"outcome": "value", "count": len(found),
                          "monoids": [monoids.to_json_dict(M) for M in found]}, sort_keys=True))
    else:
        for M in found:
            print(json.dumps(monoids.to_json_dict(M), sort_keys=True))
    return 0


def cmd_literals(args):
    F = logic.parse_fragment(args.fragment)
    xs = [x for x in args.vars.split(",") if x]
    lits = [logic.render_formula(l) for l in logic.literals(F, xs, set(args.alphabet))]
    return _emit(args, "value", {"literals": lits}, lits)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--max-nodes", type=int, default=argparse.SUPPRESS,
                        help="node budget for expansions and game search")
    common.add_argument("--max-order", type=int, default=argparse.SUPPRESS,
                        help="largest monoid order to enumerate")

    p = argparse.ArgumentParser(prog="omegaterms", parents=[common],
                                description="Identities of pi-terms, finite monoids and word games.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("decide", parents=[common], help="does s = t hold in all aperiodic monoids?")
    q.add_argument("s")
    q.add_argument("t")
    q.set_defaults(func=cmd_decide)

    q = sub.add_parser("monoid-check", parents=[common], help="check s = t in one monoid")
    q.add_argument("monoid", help="monoid JSON file")
    q.add_argument("s")
    q.add_argument("t")
    q.set_defaults(func=cmd_monoid_check)

    q = sub.add_parser("syntactic", parents=[common], help="syntactic monoid of a language")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--regex", help="pattern over letters, |, *, (), 0 and 1")
    src.add_argument("--dfa", help="DFA JSON file")
    q.add_argument("--alphabet", help="letters of the regex alphabet (default: those used)")
    q.set_defaults(func=cmd_syntactic)

    q = sub.add_parser("game", parents=[common], help="solve the fragment game on two words")
    q.add_argument("fragment", help='e.g. "FO[<,lab]:depth=2"')
    q.add_argument("u")
    q.add_argument("v")
    q.add_argument("--certificate", action="store_true",
                   help="print a separating formula when Spoiler wins")
    q.set_defaults(func=cmd_game)

    q = sub.add_parser("rho", parents=[common], help="rho-expansion of a pi-term")
    q.add_argument("t")
    q.add_argument("--canonical", action="store_true", help="print the canonical form instead")
    q.set_defaults(func=cmd_rho)

    q = sub.add_parser("enum", parents=[common], help="enumerate monoids of a given order")
    q.add_argument("order", type=int)
    q.add_argument("--aperiodic", action="store_true")
    q.add_argument("--out", help="also write one JSON file per monoid into this directory")
    q.set_defaults(func=cmd_enum)

    q = sub.add_parser("literals", parents=[common], help="list the literals of a fragment")
    q.add_argument("fragment")
    q.add_argument("--vars", default="x", help="comma-separated variables")
    q.add_argument("--alphabet", default="ab")
    q.set_defaults(func=cmd_literals)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.max_nodes = getattr(args, "max_nodes", None) or orders.MAX_NODES
    args.max_order = getattr(args, "max_order", None) or monoids.DEFAULT_MAX_ORDER
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
