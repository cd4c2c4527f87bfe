"""Command-line entry point.

Exit codes: 0 affirmative, 1 negative (fails, refuted, rejected), 2 usage or
data error.  Every run prints the ``beliefuse-output v1`` header first.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, boolean
from .dbmerge import (
    DatabaseError,
    entails,
    entails_split,
    incons_degree,
    merge_trusting,
    nontrivial_consequence,
    parse_db_file,
    split_simulation,
)
from .decision import SearchBudget, SearchError, check_entailment_bounded, find_countermodel
from .extops import (
    TheoryError,
    audit_arb_order,
    audit_sum_dalal,
    describe_models,
    majority_merge,
    parse_theories,
)
from .formula import TOP, Box, Group, ICMerge, ParseError, parse, parse_index, render, render_index
from .kripke import ModelError, load_model, save_model
from .orders import OrderError, check_arb_conditions, validate_supplied_orders
from .proof import DEFAULT_LIBRARY, ScriptError, check_proof, parse_script
from .semantics import Evaluator, SemanticsError, Strategy

HEADER = "beliefuse-output v1"

OK, NO, ERR = 0, 1, 2

_DATA_ERRORS = (
    DatabaseError,
    ModelError,
    OrderError,
    ParseError,
    ScriptError,
    SearchError,
    SemanticsError,
    TheoryError,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _strategy(text: str) -> Strategy:
    try:
        return Strategy.coerce(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _names(m, mask) -> str:
    return "{" + ", ".join(sorted(m.names(mask))) + "}"


# ---------------------------------------------------------------------------


def cmd_check(args, out) -> int:
    m = load_model(_read(args.model))
    f = parse(args.formula)
    ev = Evaluator(m, _strategy(args.strategy))
    if args.world is not None:
        v = ev.verdict(args.world, f)
        out.append(f"{'holds' if v.holds else 'fails'} at {args.world}: {render(f)}")
        if args.verbose and v.witness is not None:
            out.append("accessible: {" + ", ".join(sorted(v.witness)) + "}")
        return OK if v.holds else NO
    ext = ev.ext(f)
    bad = m.full & ~ext
    if not bad:
        out.append(f"holds at every world: {render(f)}")
    else:
        out.append(f"fails at {_names(m, bad)}: {render(f)}")
    if args.verbose and isinstance(f, Box) and ev.relational(f.index):
        for w in range(m.size):
            out.append(f"  {m.worlds[w]} -> {_names(m, ev.rel(w, f.index))}")
    return NO if bad else OK


def cmd_prove(args, out) -> int:
    script = parse_script(_read(args.script), args.script)
    res = check_proof(script, DEFAULT_LIBRARY)
    out.append(res.summary())
    if res.ok and not res.local:
        out.append("note: premises were generalised; the conclusion follows globally only")
    return OK if res.ok else NO


def cmd_sat(args, out) -> int:
    budget = SearchBudget(args.max_worlds, n_agents=args.agents, prune=not args.no_prune)
    strategy = _strategy(args.strategy)
    if args.premise:
        res = check_entailment_bounded([parse(p) for p in args.premise], parse(args.formula), strategy, budget)
    else:
        res = find_countermodel(parse(args.formula), strategy, budget)
    if not res.found:
        out.append(res.message)
        return OK
    out.append(f"countermodel at {res.world}:")
    out.append(save_model(res.model).rstrip("\n"))
    return NO


def cmd_merge(args, out) -> int:
    data = parse_db_file(_read(args.dbs))
    query = parse(args.query) if args.query else None
    strategy = _strategy(args.strategy)
    mode = args.mode
    if mode == "pl1":
        sigma = data.base()
        out.append(f"incons: {incons_degree(sigma)}")
        if query is None:
            return OK
        ans = nontrivial_consequence(sigma, query)
        out.append(f"{'nontrivial consequence' if ans else 'not a nontrivial consequence'}: {render(query)}")
        return OK if ans else NO
    if args.order is None:
        raise UsageError("--order is required for this mode")
    dbs = data.databases
    if mode == "literal-trusting":
        lits = merge_trusting(dbs, args.order)
        out.append("merged: " + " ; ".join(sorted(render(x) for x in lits)))
        if query is None:
            return OK
        ans = boolean.implies(sorted(lits, key=render), query)
    elif mode == "split-sim":
        s = split_simulation(dbs, args.order)
        names = ", ".join(f"{k}={s.labels[k]}" for k in sorted(s.labels))
        out.append(f"sub-databases: {names}")
        if query is None:
            return OK
        ans = entails_split(dbs, args.order, query, strategy)
    else:
        if query is None:
            raise UsageError("a query formula is required")
        ans = entails(dbs, args.order, query, strategy)
    if query is not None:
        out.append(f"{'entailed' if ans else 'not entailed'}: {render(query)}")
    return OK if ans else NO


def cmd_fuse(args, out) -> int:
    op = args.op
    if op == "majority":
        ts = parse_theories(_read(args.path))
        if not ts:
            raise UsageError("no theories in input")
        wt = None
        if args.weights:
            try:
                wt = [int(x) for x in args.weights.split(",")]
            except ValueError:
                raise UsageError("--weights takes comma-separated positive integers") from None
        models = majority_merge(ts, wt)
        atoms = ts[0].atoms
        out.append("models: " + describe_models(models, atoms))
        if not args.query:
            return OK
        q = parse(args.query)
        sat = boolean.models([q], atoms)
        ans = all(sat >> k & 1 for k in models)
        out.append(f"{'entailed' if ans else 'not entailed'}: {render(q)}")
        return OK if ans else NO
    m = load_model(_read(args.path))
    if op == "audit":
        report = audit_arb_order(m)
        syn = audit_sum_dalal(m) if m.size <= 4 else None
        out.extend(report.lines())
        if syn is not None:
            out.extend(syn.lines())
        return OK if report.ok and (syn is None or syn.ok) else NO
    # op == "ic"
    if not args.group:
        raise UsageError("--group is required for --op ic")
    try:
        group = frozenset(int(x) for x in args.group.split(","))
    except ValueError:
        raise UsageError("--group takes comma-separated agent numbers") from None
    constraint = parse(args.constraint) if args.constraint else TOP
    if not args.query:
        raise UsageError("a query formula is required for --op ic")
    body = parse(args.query)
    ev = Evaluator(m, _strategy(args.strategy))
    f = Box(ICMerge(constraint, group), body)
    bad = m.full & ~ev.ext(f)
    out.append(f"{'holds at every world' if not bad else 'fails at ' + _names(m, bad)}: {render(f)}")
    if constraint == TOP:
        plain = ev.ext(Box(Group(group), body))
        meets = [w for w in range(m.size) if ev.rel(w, Group(group))]
        agree = all((plain >> w & 1) == ((m.full & ~bad) >> w & 1) for w in meets)
        out.append(f"reduction to [{{{','.join(map(str, sorted(group)))}}}]: {'agrees' if agree else 'differs'}")
        if not agree:
            return NO
    return NO if bad else OK


def cmd_fmt(args, out) -> int:
    if args.index:
        out.append(render_index(parse_index(args.formula)))
    else:
        out.append(render(parse(args.formula)))
    return OK


def cmd_validate(args, out) -> int:
    m = load_model(_read(args.model))
    msgs = validate_supplied_orders(m)
    if m.metric is not None:
        msgs += [str(v) for v in check_arb_conditions(m, max_reports=args.max_reports)]
    msgs = list(dict.fromkeys(msgs))
    out.append(f"model: {m.size} worlds, {m.n_agents} agents")
    if not msgs:
        out.append("PASS")
        return OK
    out.extend(msgs)
    return NO


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="beliefuse", description="Belief fusion logic toolkit.")
    p.add_argument("--version", action="version", version=f"beliefuse {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="evaluate a formula on a model")
    c.add_argument("model")
    c.add_argument("formula")
    c.add_argument("--strategy", default="cut")
    c.add_argument("--world")
    c.add_argument("--verbose", "-v", action="store_true")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("prove", help="verify a proof script")
    c.add_argument("script")
    c.set_defaults(func=cmd_prove)

    c = sub.add_parser("sat", help="bounded countermodel search")
    c.add_argument("formula")
    c.add_argument("--max-worlds", type=int, default=3)
    c.add_argument("--strategy", default="cut")
    c.add_argument("--agents", type=int)
    c.add_argument("--premise", action="append", default=[])
    c.add_argument("--no-prune", action="store_true")
    c.set_defaults(func=cmd_sat)

    c = sub.add_parser("merge", help="merge databases and query the result")
    c.add_argument("dbs")
    c.add_argument("query", nargs="?")
    c.add_argument("--order")
    c.add_argument("--strategy", default="cut")
    c.add_argument("--mode", choices=("general", "literal-trusting", "split-sim", "pl1"), default="general")
    c.set_defaults(func=cmd_merge)

    c = sub.add_parser("fuse", help="meta-level fusion operators and audits")
    c.add_argument("path")
    c.add_argument("query", nargs="?")
    c.add_argument("--op", choices=("majority", "ic", "audit"), default="majority")
    c.add_argument("--weights")
    c.add_argument("--group")
    c.add_argument("--constraint")
    c.add_argument("--strategy", default="cut")
    c.set_defaults(func=cmd_fuse)

    c = sub.add_parser("fmt", help="print a formula in canonical form")
    c.add_argument("formula")
    c.add_argument("--index", action="store_true", help="treat the input as an index")
    c.set_defaults(func=cmd_fmt)

    c = sub.add_parser("validate", help="audit a model and its supplied orders")
    c.add_argument("model")
    c.add_argument("--max-reports", type=int, default=20)
    c.set_defaults(func=cmd_validate)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    print(HEADER, file=stdout, flush=True)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERR
    out: list = []
    try:
        code = args.func(args, out)
    except (UsageError, KeyError, ValueError, *_DATA_ERRORS) as e:
        print(f"error: {e}", file=stderr)
        return ERR
    if out:
        print("\n".join(out), file=stdout)
    return code

if __name__ == "__main__":
    sys.exit(main())
