"""Print the worked merging examples: Kripke truths, proof scripts and bounded checks."""
from __future__ import annotations

import argparse
from pathlib import Path

from beliefuse import Evaluator, Strategy, assignment_model, parse
from beliefuse.dbmerge import entails, entails_split, parse_db_file, split_simulation
from beliefuse.decision import SearchBudget, check_entailment_bounded
from beliefuse.proof import DEFAULT_LIBRARY, check_proof, load_corpus

DATA = Path(__file__).resolve().parent.parent / "data"


def example1(data: Path):
    dbs = parse_db_file((data / "example1.dbs").read_text()).databases
    m = assignment_model("pqrs", [d.wffs for d in dbs])
    for strategy, text in ((Strategy.CUTTING, "[1>2>3>4](p & q)"), (Strategy.SKIPPING, "[1>2>3>4](p & q & r & s)")):
        print(f"  {strategy.value:9s} {text}: {Evaluator(m, strategy).valid(parse(text))}")
    print(f"  cutting   [1>2>3>4](r & s) satisfiable: {bool(Evaluator(m).ext(parse('[1>2>3>4](r & s)')))}")
    for name in ("example1_dbfc.prf", "example1_dbfs.prf"):
        print(f"  {name}: {check_proof(load_corpus()[name], DEFAULT_LIBRARY).summary()}")


def example2(data: Path):
    dbs = parse_db_file((data / "example2.dbs").read_text()).databases
    goal = parse("~p | ~q")
    s = split_simulation(dbs, "1>2")
    print("  sub-databases: " + ", ".join(f"{k}={v}" for k, v in sorted(s.labels.items())))
    print(f"  unsplit, cutting: {entails(dbs, '1>2', goal)}")
    print(f"  split (trusting): {entails_split(dbs, '1>2', goal)}")


def example3(max_worlds: int):
    premises = [parse(x) for x in ("~[{1,2}] false | ~[{1,3}] false", "[1](p -> q)", "[2] p", "[3] ~q")]
    for strategy, goal in ((Strategy.SKIPPING, "[1>2>3]((p & q) | (~p & ~q))"), (Strategy.CUTTING, "[1>2>3](p -> q)")):
        res = check_entailment_bounded(premises, parse(goal), strategy, SearchBudget(max_worlds))
        print(f"  {strategy.value:9s} {goal}: {res.message if not res.found else 'countermodel at ' + res.world}")


def example5():
    print(f"  example5.prf: {check_proof(load_corpus()['example5.prf'], DEFAULT_LIBRARY).summary()}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", type=Path, default=DATA)
    ap.add_argument("--max-worlds", type=int, default=3)
    args = ap.parse_args(argv)
    print("example 1")
    example1(args.data)
    print("example 2")
    example2(args.data)
    print("example 3")
    example3(args.max_worlds)
    print("example 5")
    example5()


if __name__ == "__main__":
    main()
