import random

import pytest
from hypothesis import strategies as st

from beliefuse.dbmerge import parse_db_file
from beliefuse.formula import (
    BOT,
    TOP,
    And,
    Atom,
    Box,
    Group,
    Iff,
    Implies,
    Not,
    Or,
    Order,
    OrderSet,
)
from beliefuse.kripke import KripkeModel, assignment_model

EXAMPLE1_DBS = "db 1: p\ndb 2: q\ndb 3: ~p | ~q\ndb 4: r ; s\n"
EXAMPLE2_DBS = "db 1: p | q\ndb 2: ~p ; ~q\n"


@pytest.fixture(scope="session")
def example1_dbs():
    return parse_db_file(EXAMPLE1_DBS).databases


@pytest.fixture(scope="session")
def example2_dbs():
    return parse_db_file(EXAMPLE2_DBS).databases


@pytest.fixture(scope="session")
def example1_model(example1_dbs):
    return assignment_model("pqrs", [d.wffs for d in example1_dbs])


@pytest.fixture
def rng():
    return random.Random(20240917)


# ---------------------------------------------------------------------------
# hypothesis strategies

ATOMS = ("p", "q", "r")

atoms_st = st.sampled_from(ATOMS).map(Atom)
agents_st = st.integers(min_value=1, max_value=3)
groups_st = st.frozensets(agents_st, min_size=1, max_size=3).map(Group)
orders_st = st.permutations([1, 2, 3]).flatmap(lambda p: st.integers(1, 3).map(lambda k: Order(tuple(p[:k]))))
ordersets_st = st.frozensets(
    st.permutations([1, 2, 3]).flatmap(lambda p: st.integers(1, 3).map(lambda k: tuple(p[:k]))),
    min_size=1,
    max_size=3,
).map(OrderSet)


def wffs(indices=st.one_of(groups_st, orders_st), max_leaves=12):
    leaf = st.one_of(atoms_st, st.just(TOP), st.just(BOT))

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda t: And(*t)),
            st.tuples(children, children).map(lambda t: Or(*t)),
            st.tuples(children, children).map(lambda t: Implies(*t)),
            st.tuples(children, children).map(lambda t: Iff(*t)),
            st.tuples(indices, children).map(lambda t: Box(*t)),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


@st.composite
def models(draw, max_worlds=4, n_agents=3, atoms=ATOMS):
    n = draw(st.integers(1, max_worlds))
    full = (1 << n) - 1
    rel = tuple(
        tuple(draw(st.integers(1, full)) for _ in range(n)) for _ in range(n_agents)
    )
    val = {a: draw(st.integers(0, full)) for a in atoms}
    return KripkeModel(tuple(f"w{k}" for k in range(n)), n_agents, rel, val)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
