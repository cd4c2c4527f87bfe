import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefuse.extops import (
    AxiomFailure,
    TheoryError,
    arb_axiom,
    arb_label,
    assignment_number,
    audit_arb_axioms,
    audit_arb_order,
    audit_sum_dalal,
    dalal,
    describe_models,
    dist_theory,
    limit_holds,
    majority_merge,
    majority_scores,
    parse_theories,
    sum_dalal_family,
    theory,
    touched_states,
)
from beliefuse.formula import Atom, ArbLeaf, ArbNode, parse, render
from beliefuse.kripke import KripkeModel, assignment_model
from beliefuse.sampling import random_propositional

from .oracle import holds

DATA = Path(__file__).resolve().parent.parent / "data"


def oracle_majority(texts, atoms, weights=None):
    """argmin over assignments of the weighted sum of Hamming distances, from scratch."""
    weights = weights or [1] * len(texts)
    assigns = list(itertools.product((0, 1), repeat=len(atoms)))
    models = []
    for ts in texts:
        ws = [parse(t) for t in ts]
        mods = []
        for a in assigns:
            m = KripkeModel(("w",), 1, ((1,),), dict(zip(atoms, a)))
            if all(holds(m, 0, w) for w in ws):
                mods.append(a)
        models.append(mods)
    score = {}
    for a in assigns:
        score[a] = sum(wt * min(sum(x != y for x, y in zip(a, b)) for b in mods) for wt, mods in zip(weights, models))
    best = min(score.values())
    return sorted(sum(bit << j for j, bit in enumerate(a)) for a in assigns if score[a] == best)


class TestMajority:
    def test_motivating_example(self):
        e = [theory("p", "p"), theory("p", "p"), theory("p", "~p")]
        assert majority_merge(e) == (1,)
        assert majority_merge(e) == tuple(oracle_majority([["p"], ["p"], ["~p"]], ["p"]))

    def test_weights_can_flip(self):
        e = [theory("p", "p"), theory("p", "~p")]
        assert majority_merge(e, [2, 1]) == (1,)
        assert majority_merge(e, [1, 2]) == (0,)
        assert majority_merge(e) == (0, 1)

    def test_distances(self):
        t = theory("pq", "p & q")
        assert dist_theory(set(), t) == 2
        assert dist_theory({"p"}, t) == 1
        assert dalal(0b101, 0b011) == 2
        assert assignment_number({"q"}, ("p", "q")) == 2

    def test_scores(self):
        e = [theory("pq", "p"), theory("pq", "q")]
        assert majority_scores(e) == [2, 1, 1, 0]

    def test_errors(self):
        with pytest.raises(TheoryError, match="inconsistent"):
            majority_merge([theory("p", "p & ~p")])
        with pytest.raises(TheoryError, match="share"):
            majority_merge([theory("p", "p"), theory("pq", "q")])
        with pytest.raises(TheoryError, match="positive"):
            majority_merge([theory("p", "p")], [0])
        with pytest.raises(TheoryError, match="undeclared"):
            theory("p", "q")

    def test_describe(self):
        assert describe_models([0, 3], ("p", "q")) == "{} | p,q"

    def test_file(self):
        ts = parse_theories((DATA / "majority.thy").read_text())
        assert [t.name for t in ts] == ["t1", "t2", "t3"]
        assert majority_merge(ts) == (1,)

    def test_file_error(self):
        with pytest.raises(TheoryError, match="line 1"):
            parse_theories("bogus\n")

    @settings(max_examples=60)
    @given(st.integers(0, 10**6))
    def test_against_oracle(self, seed):
        rng = random.Random(seed)
        atoms = ["p", "q", "r"][: rng.randint(1, 3)]
        texts = []
        while len(texts) < rng.randint(1, 4):
            w = random_propositional(rng, atoms, 2)
            if theory(atoms, render(w)).consistent:
                texts.append([render(w)])
        wt = [rng.randint(1, 3) for _ in texts]
        e = [theory(atoms, *t) for t in texts]
        assert list(majority_merge(e, wt)) == oracle_majority(texts, atoms, wt)

    def test_fraction_weights_exact(self):
        e = [theory("p", "p"), theory("p", "~p")]
        assert majority_merge(e, [Fraction(1, 3), Fraction(1, 3)]) == (0, 1)


def _bad_arb_model():
    # R1 = {x,y}, R2 = {y,z}; the block for index {y,z} ranks x below y
    worlds = ("x", "y", "z")
    metric = ((0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0))
    rel = ((0b011,) * 3, (0b110,) * 3)
    return KripkeModel(worlds, 2, rel, {"p": 0b010}, metric, {0b110: {0b001: 0.0, 0b010: 5.0}})


class TestArbitration:
    def test_axiom_shapes(self):
        a, b = ArbLeaf(1), ArbLeaf(2)
        assert render(arb_axiom(1, a, b, Atom("p"))) == "[A(1^2)] p <-> [A(2^1)] p"
        assert render(arb_axiom(4, a, b, None)) == "[A(1^2)] false -> [1] false & [2] false"
        with pytest.raises(ValueError):
            arb_axiom(5, a, b, Atom("p"))
        with pytest.raises(ValueError):
            arb_axiom(8, a, b, Atom("p"))

    def test_label(self):
        assert arb_label(ArbNode("+", ArbLeaf(1), ArbLeaf(2))) == "A(1+2)"

    def test_default_order_passes(self):
        m = assignment_model("pq", [[parse("p & q")], [parse("~p")]])
        assert audit_arb_order(m).ok
        assert limit_holds(m)
        exprs = [ArbLeaf(1), ArbLeaf(2), ArbNode("+", ArbLeaf(1), ArbLeaf(2))]
        assert audit_arb_axioms(m, exprs, [parse("p"), parse("q | p")]) == []

    def test_injected_order_fails_audit(self):
        m = _bad_arb_model()
        report = audit_arb_order(m)
        assert not report.ok
        assert report.lines()[0] == "arbitration order: FAIL"
        fails = audit_arb_axioms(m, [ArbLeaf(1), ArbLeaf(2)], [Atom("p")], axioms=[3])
        assert fails and all(isinstance(f, AxiomFailure) and f.axiom == 3 for f in fails)
        assert str(fails[0]).startswith("FAIL axiom 3 at ")

    def test_touched_states(self):
        m = assignment_model("p", [[parse("p")], [parse("true")]])
        assert touched_states(m) == [0b10, 0b11]


class TestSyncretic:
    def test_family_size(self):
        # 3 states: 3 singletons and 6 pairs with repetition
        assert len(sum_dalal_family(2)) == 9

    def test_default_passes(self):
        m = assignment_model("pq", [[parse("p")], [parse("~q")]])
        report = audit_sum_dalal(m)
        assert report.ok and report.label == "sum-of-distance assignment"

    def test_injected_ranks_fail(self):
        m = assignment_model("p", [[parse("p")]])
        bad = KripkeModel(m.worlds, 1, m.rel, m.val, m.metric, ic_ranks={(0b10,): (0.0, 0.0)})
        report = audit_sum_dalal(bad)
        assert not report.ok
        assert report.label == "candidate sum-of-distance assignment"
        assert any("condition 2" in line for line in report.lines())
