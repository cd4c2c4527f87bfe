"""Random generators for wffs, indices, axiom instances and databases.

Used by the test suite and the sweep scripts; every generator takes an
explicit ``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
from decimal import Decimal
from typing import Sequence

from .formula import (
    BOT,
    TOP,
    And,
    Arb,
    ArbLeaf,
    ArbNode,
    Atom,
    Box,
    Graded,
    Group,
    ICMerge,
    Iff,
    Implies,
    MajMerge,
    Not,
    Or,
    Order,
    OrderSet,
    Partial,
    Rev,
    Wff,
    canonical_index,
    index_from_orders,
)

CORE = ("group", "order")
SKIP = ("group", "order", "orderset")
ALL = ("group", "order", "orderset", "partial", "maj", "graded", "arb", "ic", "rev")


def random_group(rng: random.Random, n_agents: int, min_size: int = 1) -> Group:
    k = rng.randint(min_size, n_agents)
    return Group(frozenset(rng.sample(range(1, n_agents + 1), k)))


def random_order(rng: random.Random, n_agents: int, min_len: int = 1, max_len: int | None = None) -> tuple:
    top = n_agents if max_len is None else min(max_len, n_agents)
    k = rng.randint(min_len, top)
    return tuple(rng.sample(range(1, n_agents + 1), k))


def random_orderset(rng: random.Random, n_agents: int, max_orders: int = 3) -> frozenset:
    return frozenset(random_order(rng, n_agents, 1, 3) for _ in range(rng.randint(1, max_orders)))


def _arb_expr(rng, n_agents, depth):
    if depth <= 0 or rng.random() < 0.4:
        return ArbLeaf(rng.randint(1, n_agents))
    return ArbNode(rng.choice("+.^"), _arb_expr(rng, n_agents, depth - 1), _arb_expr(rng, n_agents, depth - 1))


def random_index(rng: random.Random, n_agents: int, kinds: Sequence[str], atoms, depth: int):
    kind = rng.choice(list(kinds))
    if kind == "group":
        return Group(random_group(rng, n_agents).agents)
    if kind == "order":
        return Order(random_order(rng, n_agents, 1, 4))
    if kind == "orderset":
        return OrderSet(random_orderset(rng, n_agents))
    if kind == "partial":
        carrier = sorted(random_group(rng, n_agents).agents)
        pairs = set()
        for a, b in zip(carrier, carrier[1:]):
            if rng.random() < 0.5:
                pairs.add((a, b))
        return Partial(frozenset(carrier), frozenset(pairs))
    if kind == "maj":
        ags = sorted(random_group(rng, n_agents).agents)
        return MajMerge(tuple((i, float(rng.randint(1, 4))) for i in ags))
    if kind == "graded":
        return Graded(random_group(rng, n_agents).agents, Decimal(rng.choice(["0", "0.25", "0.5", "0.75"])))
    if kind == "arb":
        return Arb(_arb_expr(rng, n_agents, 2))
    if kind == "ic":
        return ICMerge(random_wff(rng, atoms, n_agents, max(depth - 1, 0), CORE), random_group(rng, n_agents).agents)
    steps = []
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            steps.append(rng.randint(1, n_agents))
        else:
            steps.append(random_wff(rng, atoms, n_agents, max(depth - 1, 0), CORE))
    return Rev(rng.randint(1, n_agents), tuple(steps))


def random_wff(
    rng: random.Random,
    atoms: Sequence[str],
    n_agents: int,
    depth: int = 3,
    kinds: Sequence[str] = CORE,
    modal_rate: float = 0.35,
) -> Wff:
    """A random wff of nesting depth at most ``depth``."""
    if depth <= 0:
        r = rng.random()
        if r < 0.08:
            return rng.choice((TOP, BOT))
        return Atom(rng.choice(list(atoms)))
    r = rng.random()
    if r < 0.15:
        return random_wff(rng, atoms, n_agents, 0, kinds)
    if r < 0.15 + modal_rate:
        return Box(random_index(rng, n_agents, kinds, atoms, depth), random_wff(rng, atoms, n_agents, depth - 1, kinds, modal_rate))
    if r < 0.25 + modal_rate:
        return Not(random_wff(rng, atoms, n_agents, depth - 1, kinds, modal_rate))
    op = rng.choice((And, Or, Implies, Iff))
    return op(
        random_wff(rng, atoms, n_agents, depth - 1, kinds, modal_rate),
        random_wff(rng, atoms, n_agents, depth - 1, kinds, modal_rate),
    )


def random_propositional(rng: random.Random, atoms: Sequence[str], depth: int = 2) -> Wff:
    return random_wff(rng, atoms, 1, depth, CORE, modal_rate=0.0)


# ---------------------------------------------------------------------------
# axiom instances

_TAUTOLOGIES = (
    lambda a, b, c: Implies(a, Implies(b, a)),
    lambda a, b, c: Implies(Implies(a, Implies(b, c)), Implies(Implies(a, b), Implies(a, c))),
    lambda a, b, c: Implies(Implies(Not(b), Not(a)), Implies(a, b)),
    lambda a, b, c: Or(a, Not(a)),
    lambda a, b, c: Iff(And(a, b), And(b, a)),
    lambda a, b, c: Implies(And(a, Or(b, c)), Or(And(a, b), And(a, c))),
)


def _omega_index(rng, n_agents, system):
    if system == "DBFc":
        return Group(random_group(rng, n_agents).agents)
    pick = rng.random()
    if pick < 0.3:
        return Group(random_group(rng, n_agents).agents)
    if pick < 0.6:
        return canonical_index(Order(random_order(rng, n_agents, 1, 3)))
    return canonical_index(OrderSet(random_orderset(rng, n_agents)))


def axiom_instance(rng: random.Random, schema: str, system: str, atoms, n_agents: int, depth: int = 2) -> Wff:
    """A random instance of ``schema`` of the given calculus."""
    kinds = CORE if system == "DBFc" else SKIP

    def body():
        return random_wff(rng, atoms, n_agents, depth, kinds)

    if schema == "P":
        a, b, c = body(), body(), body()
        return rng.choice(_TAUTOLOGIES)(a, b, c)
    if schema in ("G2", "V2"):
        return Not(Box(Group(frozenset([rng.randint(1, n_agents)])), BOT))
    if schema in ("G1", "V1"):
        idx = _omega_index(rng, n_agents, system)
        phi, psi = body(), body()
        return Implies(And(Box(idx, phi), Box(idx, Implies(phi, psi))), Box(idx, psi))
    if schema == "G3":
        big = random_group(rng, n_agents, min_size=2).agents
        small = frozenset(rng.sample(sorted(big), rng.randint(1, len(big) - 1)))
        phi = body()
        return Implies(Box(Group(small), phi), Box(Group(big), phi))
    if schema == "V3":
        while True:
            big = random_orderset(rng, n_agents, 3)
            if len(big) >= 2:
                break
        small = frozenset(rng.sample(sorted(big), rng.randint(1, len(big) - 1)))
        phi = body()
        return Implies(Box(index_from_orders(small), phi), Box(index_from_orders(big), phi))
    if schema in ("O1", "O2"):
        o = random_order(rng, n_agents, 2)
        d = Group(frozenset(o))
        phi = body()
        lhs = Box(canonical_index(Order(o)), phi)
        if schema == "O1":
            return Implies(Not(Box(d, BOT)), Iff(lhs, Box(d, phi)))
        return Implies(Box(d, BOT), Iff(lhs, Box(canonical_index(Order(o[:-1])), phi)))
    if schema in ("O1'", "O2'"):
        o = random_order(rng, n_agents, 2, 4)
        head, i = o[:-1], o[-1]
        omega = random_orderset(rng, n_agents, 2) if rng.random() < 0.6 else frozenset()
        x = index_from_orders([head, (i,)])
        phi = body()
        lhs = Box(index_from_orders(omega | {o}), phi)
        if schema == "O1'":
            return Implies(Not(Box(x, BOT)), Iff(lhs, Box(index_from_orders(omega | {head, (i,)}), phi)))
        return Implies(Box(x, BOT), Iff(lhs, Box(index_from_orders(omega | {head}), phi)))
    raise ValueError(f"unknown schema {schema}")


# ---------------------------------------------------------------------------
# weighted bases


def random_weighted_base(rng: random.Random, atoms: Sequence[str], max_levels: int = 5, max_items: int = 6):
    """Items (wff, Decimal weight) whose weight layers are each satisfiable."""
    from . import boolean

    levels = sorted(rng.sample(range(1, 11), rng.randint(1, max_levels)), reverse=True)
    weights = [Decimal(k) / 10 for k in levels]
    items = []
    for a in weights:
        layer = []
        for _ in range(rng.randint(1, 2)):
            for _try in range(20):
                w = random_propositional(rng, atoms, 2)
                if boolean.satisfiable(layer + [w]):
                    layer.append(w)
                    break
        items.extend((w, a) for w in layer)
        if len(items) >= max_items:
            break
    return items


__all__ = [
    "ALL",
    "CORE",
    "SKIP",
    "axiom_instance",
    "random_group",
    "random_index",
    "random_order",
    "random_orderset",
    "random_propositional",
    "random_weighted_base",
    "random_wff",
]
