import itertools

import pytest
from hypothesis import given

from beliefuse import boolean
from beliefuse.formula import And, Atom, Not, Or, parse

from .conftest import wffs


def brute_tautology(w, atoms):
    from beliefuse.kripke import KripkeModel

    from .oracle import holds

    for bitsv in itertools.product((0, 1), repeat=len(atoms)):
        m = KripkeModel(("w",), 1, ((1,),), dict(zip(atoms, bitsv)))
        if not holds(m, 0, w):
            return False
    return True


def test_models_of_disjunction():
    # interpretation k makes atom j true iff bit j of k is set
    assert boolean.bits(boolean.models([parse("p | q")], ["p", "q"])) == [1, 2, 3]


def test_tautology_examples():
    assert boolean.is_tautology(parse("p | ~p"))
    assert boolean.is_tautology(parse("[1] p -> [1] p"))
    assert not boolean.is_tautology(parse("[1] p -> [2] p"))


def test_implies():
    assert boolean.implies([parse("p"), parse("p -> q")], parse("q"))
    assert not boolean.implies([parse("p | q")], parse("q"))


def test_satisfiable():
    assert not boolean.satisfiable([parse("p"), parse("~p")])
    with pytest.raises(ValueError):
        boolean.satisfiable([parse("[1] false")])


def test_interpretation_numbering():
    assert boolean.interpretation(5, ["p", "q", "r"]) == frozenset({"p", "r"})


def test_popcount_and_subsets():
    assert boolean.popcount(0b1011) == 3
    assert list(boolean.subsets([1, 2], 1)) == [(1,), (2,), (1, 2)]


@given(wffs(max_leaves=8))
def test_tautology_matches_brute_force_on_box_free(w):
    # boxes are opaque leaves, so only compare box-free formulas
    from beliefuse.formula import modal_depth

    if modal_depth(w):
        return
    assert boolean.is_tautology(w) == brute_tautology(w, ["p", "q", "r"])


def test_de_morgan():
    p, q = Atom("p"), Atom("q")
    assert boolean.is_tautology(parse("~(p & q) <-> ~p | ~q"))
    assert boolean.models([Not(And(p, q))], "pq") == boolean.models([Or(Not(p), Not(q))], "pq")
