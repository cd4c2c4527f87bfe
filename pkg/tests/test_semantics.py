import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from beliefuse import boolean
from beliefuse.formula import (
    Arb,
    ArbLeaf,
    ArbNode,
    Box,
    ICMerge,
    MajMerge,
    Rev,
    TOP,
    atoms,
    modal_depth,
    parse,
    parse_index,
)
from beliefuse.kripke import KripkeModel, assignment_model
from beliefuse.sampling import random_propositional
from beliefuse.semantics import (
    Evaluator,
    SemanticsError,
    Strategy,
    dist_state,
    majority_sphere_ext,
    rel_group,
    rel_order_cut,
    rel_order_cut_inductive,
    rel_order_skip,
    satisfies,
    truth_set,
)

from . import oracle

CUTTING, SKIPPING = Strategy.CUTTING, Strategy.SKIPPING
from .conftest import groups_st, models, orders_st, ordersets_st, wffs


class TestExample1:
    def test_groups(self, example1_model):
        m = example1_model
        assert rel_group(m, 0, [1, 2, 3]) == 0
        assert m.names(rel_group(m, 0, [1, 2, 4])) == {"pqrs"}

    def test_cutting_access(self, example1_model):
        m = example1_model
        got = m.names(rel_order_cut(m, 0, [1, 2, 3, 4]))
        assert got == {"pq~r~s", "pqr~s", "pq~rs", "pqrs"}

    def test_skipping_access(self, example1_model):
        m = example1_model
        assert m.names(rel_order_skip(m, 0, [1, 2, 3, 4])) == {"pqrs"}

    def test_verdicts(self, example1_model):
        m = example1_model
        assert satisfies(m, "pqrs", parse("[1>2>3>4](p & q)"))
        assert not satisfies(m, "pqrs", parse("[1>2>3>4](r & s)"))
        assert satisfies(m, "~p~q~r~s", parse("[1>2>3>4](p & q & r & s)"), SKIPPING)

    def test_verdict_witness(self, example1_model):
        v = satisfies(example1_model, 0, parse("[{1,2,4}] p"))
        assert v.witness == frozenset({"pqrs"})


def test_strategy_coerce():
    assert Strategy.coerce("cut") is CUTTING
    assert Strategy.coerce("skipping") is SKIPPING
    with pytest.raises(ValueError):
        Strategy.coerce("bogus")


def test_orderset_needs_skipping():
    m = assignment_model("p", [[parse("p")], [parse("~p")]])
    with pytest.raises(SemanticsError):
        truth_set(m, parse("[{1>2, 2>1}] p"), CUTTING)


def test_unknown_agent():
    m = assignment_model("p", [[parse("p")]])
    with pytest.raises(SemanticsError, match="unknown agent 2"):
        truth_set(m, parse("[{1,2}] p"))


def test_graded_ratio():
    # the union of both states has three worlds, two of them p-worlds
    m = KripkeModel(("a", "b", "c"), 2, ((0b011,) * 3, (0b110,) * 3), {"p": 0b011})
    assert truth_set(m, parse("[{1,2}#0.5] p")) == m.full
    assert truth_set(m, parse("[{1,2}#0.75] p")) == 0
    ratio = Fraction(2, 3)
    assert Fraction(1, 2) < ratio < Fraction(3, 4)


def test_dist_state():
    m = assignment_model("pq", [[parse("p & q")]])
    # worlds ~p~q p~q ~pq pq
    assert dist_state(m, 0, 1) == (2.0, 1.0, 1.0, 0.0)


def test_dist_state_needs_metric():
    m = assignment_model("p", [[parse("p")]], metric=False)
    with pytest.raises(SemanticsError):
        dist_state(m, 0, 1)


def test_majority_example():
    m = assignment_model("p", [[parse("p")], [parse("p")], [parse("~p")]])
    assert truth_set(m, parse("[M{1:1, 2:1, 3:1}] p")) == m.full
    # a heavy third agent flips the outcome
    assert truth_set(m, parse("[M{1:1, 2:1, 3:3}] ~p")) == m.full


def test_revision_by_formula():
    m = assignment_model("pq", [[parse("~p & ~q")]])
    # the closest p-world to the only belief world keeps q false
    assert truth_set(m, parse("[R(1 o <p>)] ~q")) == m.full
    assert truth_set(m, parse("[R(1 o <p>)] p")) == m.full


def test_ic_with_inconsistent_constraint():
    m = assignment_model("p", [[parse("p")]])
    assert truth_set(m, parse("[IC<false>{1}] false")) == m.full


def test_arbitration_example():
    # two agents believing p & q and ~p & ~q: arbitration keeps the worlds nearest each side
    m = assignment_model("pq", [[parse("p & q")], [parse("~p & ~q")]])
    ev = Evaluator(m)
    got = m.names(ev.rel(0, parse_index("A(1^2)")))
    assert got == {"~p~q", "pq"}


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=200)
@given(models(), wffs())
def test_cutting_matches_oracle(m, f):
    ext = truth_set(m, f, CUTTING)
    for w in range(m.size):
        assert bool(ext >> w & 1) == oracle.holds(m, w, f, "cutting")


@settings(max_examples=200)
@given(models(), wffs(st.one_of(groups_st, orders_st, ordersets_st)))
def test_skipping_matches_oracle(m, f):
    ext = truth_set(m, f, SKIPPING)
    for w in range(m.size):
        assert bool(ext >> w & 1) == oracle.holds(m, w, f, "skipping")


@given(models(), orders_st)
def test_order_access_nonempty(m, o):
    for w in range(m.size):
        assert rel_order_cut(m, w, o.agents)
        assert rel_order_skip(m, w, o.agents)


@given(models(), orders_st)
def test_cut_forms_agree(m, o):
    for w in range(m.size):
        assert rel_order_cut(m, w, o.agents) == rel_order_cut_inductive(m, w, o.agents)


@given(models(), orders_st)
def test_skipping_refines_cutting(m, o):
    for w in range(m.size):
        assert rel_order_skip(m, w, o.agents) & ~rel_order_cut(m, w, o.agents) == 0


@given(models(), orders_st)
def test_consistent_order_is_its_group(m, o):
    for w in range(m.size):
        g = rel_group(m, w, o.agents)
        if g:
            assert rel_order_cut(m, w, o.agents) == g == rel_order_skip(m, w, o.agents)


@given(models(), orders_st)
def test_prefix_law(m, o):
    # cutting never keeps agents past the first empty prefix
    for w in range(m.size):
        for k in range(1, len(o.agents) + 1):
            if not rel_group(m, w, o.agents[:k]):
                assert rel_order_cut(m, w, o.agents) == rel_order_cut(m, w, o.agents[: k - 1])
                break


@given(models(), groups_st, groups_st)
def test_group_antitone(m, g, h):
    big = g.agents | h.agents
    for w in range(m.size):
        assert rel_group(m, w, big) & ~rel_group(m, w, g.agents) == 0


@given(models(), ordersets_st)
def test_orderset_is_intersection(m, o):
    ev = Evaluator(m, SKIPPING)
    for w in range(m.size):
        want = m.full
        for x in o.orders:
            want &= rel_order_skip(m, w, x)
        assert ev.rel(w, o) == want


def _assignment_models(seed, n):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        atoms = ["p", "q", "r"][: rng.randint(1, 3)]
        dbs = []
        while len(dbs) < 3:
            w = random_propositional(rng, atoms, 2)
            if boolean.models([w], atoms):
                dbs.append([w])
        out.append(assignment_model(atoms, dbs))
    return out


@settings(max_examples=40)
@given(st.integers(0, 10**6), wffs(max_leaves=4))
def test_majority_sphere_agrees_with_minimum(seed, body):
    for m in _assignment_models(seed, 2):
        assume(atoms(body) <= set(m.atoms))
        idx = MajMerge(((1, 1.0), (2, 2.0), (3, 1.5)))
        assert truth_set(m, Box(idx, body)) == majority_sphere_ext(m, idx, body)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_arbitration_commutes_and_sits_between(seed):
    for m in _assignment_models(seed, 3):
        ev = Evaluator(m, SKIPPING)
        a, b = ArbLeaf(1), ArbLeaf(2)
        for w in range(m.size):
            tri = ev.rel(w, Arb(ArbNode("^", a, b)))
            assert tri == ev.rel(w, Arb(ArbNode("^", b, a)))
            assert ev.rel(w, Arb(ArbNode("+", a, b))) & ~tri == 0
            assert tri & ~ev.rel(w, Arb(ArbNode(".", a, b))) == 0
            assert tri


@settings(max_examples=40)
@given(st.integers(0, 10**6), wffs(max_leaves=3), wffs(max_leaves=3))
def test_revision_equals_single_agent_ic(seed, phi, psi):
    assume(modal_depth(phi) == 0 and modal_depth(psi) == 0)
    for m in _assignment_models(seed, 2):
        assume(atoms(phi) | atoms(psi) <= set(m.atoms))
        for i in (1, 2):
            rev = truth_set(m, Box(Rev(i, (phi,)), psi))
            ic = truth_set(m, Box(ICMerge(phi, frozenset({i})), psi))
            assert rev == ic


@settings(max_examples=40)
@given(st.integers(0, 10**6), wffs(max_leaves=4), groups_st)
def test_ic_true_reduces_to_group(seed, psi, g):
    assume(modal_depth(psi) == 0)
    for m in _assignment_models(seed, 2):
        assume(atoms(psi) <= set(m.atoms))
        ic = truth_set(m, Box(ICMerge(TOP, g.agents), psi))
        plain = truth_set(m, Box(g, psi))
        for w in range(m.size):
            if rel_group(m, w, g.agents):
                assert ic >> w & 1 == plain >> w & 1
