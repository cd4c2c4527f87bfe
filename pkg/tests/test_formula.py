import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefuse.formula import (
    BOT,
    And,
    Arb,
    ArbLeaf,
    ArbNode,
    Atom,
    Box,
    Graded,
    Group,
    ICMerge,
    MajMerge,
    Not,
    Or,
    Order,
    OrderSet,
    ParseError,
    Partial,
    Rev,
    atoms,
    canonical,
    canonical_index,
    disj,
    expand_partial,
    linear_extensions,
    modal_depth,
    parse,
    parse_index,
    render,
    render_index,
    subformulas,
    substitute,
)
from beliefuse.sampling import ALL, random_wff

from .conftest import ordersets_st, wffs

p, q, r = Atom("p"), Atom("q"), Atom("r")


class TestParse:
    def test_atom(self):
        assert parse("p") == p

    def test_priority_order(self):
        assert parse("[1>2>3>4](p & q)") == Box(Order((1, 2, 3, 4)), And(p, q))

    def test_order_set(self):
        assert parse("[{1>2, 3}] ~p") == Box(OrderSet(frozenset({(1, 2), (3,)})), Not(p))

    def test_group(self):
        assert parse("[{1,2}] false") == Box(Group(frozenset({1, 2})), BOT)

    def test_single_agent_is_group(self):
        single = Box(Group(frozenset({1})), p)
        assert parse("[1] p") == single
        assert parse("[{1}] p") == single

    def test_precedence(self):
        assert parse("p | q & r") == Or(p, And(q, r))
        assert parse("~p & q") == And(Not(p), q)
        assert parse("[1] p & q") == And(Box(Group(frozenset({1})), p), q)

    def test_implication_right_assoc(self):
        w = parse("p -> q -> r")
        assert render(w) == "p -> q -> r"
        assert w.right.left == q

    def test_majority_index(self):
        idx = parse_index("M{2:1.5, 1:2}")
        assert isinstance(idx, MajMerge)
        assert dict(idx.weights) == {1: 2.0, 2: 1.5}

    def test_graded(self):
        idx = parse_index("{1,2}#0.5")
        assert isinstance(idx, Graded) and str(idx.threshold) == "0.5"

    def test_graded_threshold_range(self):
        with pytest.raises(ParseError):
            parse("[{1}#1] p")

    def test_arbitration_precedence(self):
        # "^" binds loosest
        idx = parse_index("A(1 ^ 2 + 3)")
        assert idx == Arb(ArbNode("^", ArbLeaf(1), ArbNode("+", ArbLeaf(2), ArbLeaf(3))))

    def test_ic_and_revision(self):
        w = parse("[IC<p & q>{1,2}] r")
        assert isinstance(w.index, ICMerge) and w.index.group == frozenset({1, 2})
        w = parse("[R(1 o 2 o <p>)] q")
        assert w.index == Rev(1, (2, p))

    def test_partial_syntax(self):
        w = parse("[Q{1,2,3: 1>2, 1>3}] p")
        assert w.index == Partial(frozenset({1, 2, 3}), frozenset({(1, 2), (1, 3)}))

    def test_semicolon_comment(self):
        assert parse("p ; a note\n& q") == And(p, q)

    @pytest.mark.parametrize(
        "text",
        ["p &", "[1>1] p", "[{}] p", "[M{1:0}] p", "(p", "P", "[0] p", "p q"],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse(text)

    def test_error_position_and_expected(self):
        with pytest.raises(ParseError) as info:
            parse("p &\n  )")
        err = info.value
        assert (err.line, err.col) == (2, 3)
        assert "IDENT" in err.expected


class TestRender:
    def test_atom(self):
        assert render(p) == "p"

    def test_group_false(self):
        assert render(Box(Group(frozenset({1, 2})), BOT)) == "[{1,2}] false"

    def test_order(self):
        assert render(Box(Order((1, 2)), p)) == "[1>2] p"

    def test_parenthesises_only_when_needed(self):
        assert render(parse("(p & q) | r")) == "p & q | r"
        assert render(parse("p & (q | r)")) == "p & (q | r)"
        assert render(parse("(p -> q) -> r")) == "(p -> q) -> r"
        assert render(parse("[1] (p & q)")) == "[1] (p & q)"

    @pytest.mark.parametrize(
        "text",
        ["{1,2}", "1>2", "{1>2, 3}", "M{1:2,2:1}", "{1,2}#0.5", "A(1^(2+3))", "IC<p>{1,2}", "R(1 o 2 o <p>)"],
    )
    def test_index_round_trip(self, text):
        idx = parse_index(text)
        assert parse_index(render_index(idx)) == idx


class TestCanonical:
    def test_unit_identification(self):
        forms = [Box(Group(frozenset({2})), p), Box(Order((2,)), p), Box(OrderSet(frozenset({(2,)})), p)]
        assert len({canonical(f) for f in forms}) == 1

    def test_singleton_orderset_is_group(self):
        assert canonical_index(OrderSet(frozenset({(1,), (2,)}))) == Group(frozenset({1, 2}))

    def test_single_order_set_is_order(self):
        assert canonical_index(OrderSet(frozenset({(1, 2)}))) == Order((1, 2))

    @given(ordersets_st)
    def test_idempotent(self, idx):
        once = canonical_index(idx)
        assert canonical_index(once) == once


class TestPartial:
    def test_free_pair(self):
        q2 = Partial(frozenset({1, 2}), frozenset())
        assert linear_extensions(q2) == [(1, 2), (2, 1)]
        assert expand_partial(Box(q2, p)) == And(Box(Order((1, 2)), p), Box(Order((2, 1)), p))

    def test_fan(self):
        q3 = Partial(frozenset({1, 2, 3}), frozenset({(1, 2), (1, 3)}))
        assert render(expand_partial(Box(q3, p))) == "[1>2>3] p & [1>3>2] p"

    def test_single(self):
        assert expand_partial(Box(Partial(frozenset({1}), frozenset()), p)) == Box(Group(frozenset({1})), p)

    def test_cycle(self):
        with pytest.raises(ValueError):
            linear_extensions(Partial(frozenset({1, 2}), frozenset({(1, 2), (2, 1)})))

    @given(st.permutations([1, 2, 3, 4]))
    def test_total_order_expands_to_itself(self, perm):
        pairs = frozenset(zip(perm, perm[1:]))
        assert expand_partial(Box(Partial(frozenset(perm), pairs), p)) == Box(Order(tuple(perm)), p)


class TestUtilities:
    def test_atoms_inside_revision(self):
        assert atoms(parse("[R(1 o <p&q>)] r")) == {"p", "q", "r"}

    def test_atoms_tautology(self):
        assert atoms(parse("[1>2](p|~p)")) == {"p"}

    def test_subformulas(self):
        assert subformulas(parse("~p")) == [Not(p), p]

    def test_modal_depth(self):
        assert modal_depth(parse("[1][2]p | [3]q")) == 2

    def test_substitute(self):
        w = substitute(parse("[1] phi -> phi"), {"phi": parse("p & q")})
        assert w == parse("[1](p & q) -> p & q")

    def test_disj_empty(self):
        assert disj([]) == BOT

    @given(wffs())
    def test_subformulas_closed(self, w):
        subs = set(subformulas(w))
        from beliefuse.formula import children

        for s in subs:
            assert set(children(s)) <= subs


class TestRoundTrip:
    @settings(max_examples=300)
    @given(wffs(st.one_of(ordersets_st)))
    def test_parse_render(self, w):
        assert parse(render(w)) == canonical(w)

    def test_full_language_sample(self):
        rng = random.Random(5)
        for _ in range(2000):
            w = random_wff(rng, ["p", "q", "r"], 3, 3, ALL)
            assert parse(render(w)) == canonical(w)
