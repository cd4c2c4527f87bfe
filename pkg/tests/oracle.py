"""Naive reference evaluator over Python sets, independent of the bitmask engine."""
import itertools

from beliefuse.formula import (
    And,
    Atom,
    Bottom,
    Box,
    Group,
    Iff,
    Implies,
    Not,
    Or,
    Order,
    OrderSet,
    Top,
)


def succ(m, agent, w):
    return {v for v in range(m.size) if m.rel[agent - 1][w] >> v & 1}


def access(m, w, index, strategy):
    if isinstance(index, Group):
        out = set(range(m.size))
        for i in index.agents:
            out &= succ(m, i, w)
        return out
    if isinstance(index, Order):
        return order_access(m, w, index.agents, strategy)
    if isinstance(index, OrderSet):
        out = set(range(m.size))
        for o in index.orders:
            out &= order_access(m, w, o, strategy)
        return out
    raise NotImplementedError(index)


def order_access(m, w, order, strategy):
    if strategy == "cutting":
        # largest prefix whose group intersection is nonempty
        best = None
        for k in range(1, len(order) + 1):
            s = set(range(m.size))
            for i in order[:k]:
                s &= succ(m, i, w)
            if not s:
                break
            best = s
        return best if best is not None else succ(m, order[0], w)
    acc = succ(m, order[0], w)
    for i in order[1:]:
        if acc & succ(m, i, w):
            acc = acc & succ(m, i, w)
    return acc


def holds(m, w, f, strategy="cutting"):
    if isinstance(f, Atom):
        return bool(m.val.get(f.name, 0) >> w & 1)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not holds(m, w, f.arg, strategy)
    if isinstance(f, And):
        return holds(m, w, f.left, strategy) and holds(m, w, f.right, strategy)
    if isinstance(f, Or):
        return holds(m, w, f.left, strategy) or holds(m, w, f.right, strategy)
    if isinstance(f, Implies):
        return (not holds(m, w, f.left, strategy)) or holds(m, w, f.right, strategy)
    if isinstance(f, Iff):
        return holds(m, w, f.left, strategy) == holds(m, w, f.right, strategy)
    if isinstance(f, Box):
        return all(holds(m, v, f.body, strategy) for v in access(m, w, f.index, strategy))
    raise NotImplementedError(f)


def all_models(n_worlds, n_agents, atoms):
    """Every serial model with the given shape (tiny sizes only)."""
    from beliefuse.kripke import KripkeModel

    full = (1 << n_worlds) - 1
    rows = list(itertools.product(range(1, full + 1), repeat=n_worlds))
    names = tuple(f"w{k}" for k in range(n_worlds))
    for rel in itertools.product(rows, repeat=n_agents):
        for vals in itertools.product(range(full + 1), repeat=len(atoms)):
            yield KripkeModel(names, n_agents, tuple(rel), dict(zip(atoms, vals)))
