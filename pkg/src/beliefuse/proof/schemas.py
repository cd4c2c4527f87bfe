"""Axiom schemas of the two fusion calculi and bounded instance generation.

DBFc reads priority boxes ``[O]`` by cutting and has group boxes ``[G]``;
DBFs reads them by skipping and also has boxes over sets of orders ``[Ω]``.
A group is the same thing as a set of one-agent orders, so both calculi share
the Group/Order/OrderSet index types.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .. import boolean
from ..formula import (
    BOT,
    And,
    Bottom,
    Box,
    Group,
    Iff,
    Implies,
    Not,
    Order,
    OrderSet,
    Wff,
    canonical_index,
    conj,
    delta,
    index_from_orders,
    orders_of,
    render,
    render_index,
    subformulas,
)

SYSTEMS = ("DBFc", "DBFs")

SCHEMAS = {
    "DBFc": ("G2", "G1", "G3", "O1", "O2", "P"),
    "DBFs": ("V2", "V1", "V3", "O1'", "O2'", "P"),
}

MAX_STEP_LEAVES = 30


class SchemaError(ValueError):
    pass


def check_system(system: str) -> str:
    if system not in SYSTEMS:
        raise SchemaError(f"unknown system {system!r} (use DBFc or DBFs)")
    return system


def index_allowed(index, system: str) -> bool:
    if system == "DBFc":
        return isinstance(index, (Group, Order))
    return isinstance(index, (Group, Order, OrderSet))


def language_error(w: Wff, system: str) -> str | None:
    for x in subformulas(w):
        if isinstance(x, Box) and not index_allowed(x.index, system):
            return f"index [{render_index(x.index)}] is not in the language of {system}"
    return None


@dataclass(frozen=True)
class AxiomMatch:
    name: str
    bindings: dict = field(default_factory=dict, compare=False, hash=False)


def _box_bot(x, index=None) -> bool:
    return isinstance(x, Box) and isinstance(x.body, Bottom) and (index is None or x.index == index)


def _omega(index) -> frozenset | None:
    if isinstance(index, (Group, Order, OrderSet)):
        return orders_of(index)
    return None


def _match_k(w, system):
    if not (isinstance(w, Implies) and isinstance(w.left, And) and isinstance(w.right, Box)):
        return None
    a, b = w.left.left, w.left.right
    if not (isinstance(a, Box) and isinstance(b, Box)):
        return None
    idx = a.index
    if b.index != idx or w.right.index != idx or not index_allowed(idx, system):
        return None
    if system == "DBFc" and not isinstance(idx, Group):
        return None
    if b.body == Implies(a.body, w.right.body):
        return {"index": idx, "phi": a.body, "psi": w.right.body}
    return None


def _match_lift(w, system):
    if not (isinstance(w, Implies) and isinstance(w.left, Box) and isinstance(w.right, Box)):
        return None
    if w.left.body != w.right.body:
        return None
    i1, i2 = w.left.index, w.right.index
    if system == "DBFc":
        if isinstance(i1, Group) and isinstance(i2, Group) and i1.agents < i2.agents:
            return {"G1": i1, "G2": i2, "phi": w.left.body}
        return None
    o1, o2 = _omega(i1), _omega(i2)
    if o1 is not None and o2 is not None and o1 < o2:
        return {"Omega1": i1, "Omega2": i2, "phi": w.left.body}
    return None


def _match_cut(w, negated: bool):
    """O1 (negated=True) / O2 (negated=False) match for the cutting calculus."""
    if not (isinstance(w, Implies) and isinstance(w.right, Iff)):
        return None
    guard = w.left
    if negated:
        if not isinstance(guard, Not):
            return None
        guard = guard.arg
    if not _box_bot(guard):
        return None
    lhs, rhs = w.right.left, w.right.right
    if not (isinstance(lhs, Box) and isinstance(rhs, Box) and lhs.body == rhs.body):
        return None
    if not isinstance(lhs.index, Order) or len(lhs.index.agents) < 2:
        return None
    o = lhs.index.agents
    d = Group(frozenset(o))
    if guard.index != d:
        return None
    want = d if negated else canonical_index(Order(o[:-1]))
    if rhs.index != want:
        return None
    return {"O": canonical_index(Order(o[:-1])), "i": o[-1], "phi": lhs.body}


def _match_skip(w, negated: bool):
    """O1' / O2' match for the skipping calculus."""
    if not (isinstance(w, Implies) and isinstance(w.right, Iff)):
        return None
    guard = w.left
    if negated:
        if not isinstance(guard, Not):
            return None
        guard = guard.arg
    if not _box_bot(guard):
        return None
    lhs, rhs = w.right.left, w.right.right
    if not (isinstance(lhs, Box) and isinstance(rhs, Box) and lhs.body == rhs.body):
        return None
    y, z, x = _omega(lhs.index), _omega(rhs.index), _omega(guard.index)
    if y is None or z is None or x is None:
        return None
    for top in y:
        if len(top) < 2:
            continue
        o, i = top[:-1], top[-1]
        if x != frozenset([o, (i,)]):
            continue
        for omega in (y - {top}, y):
            target = omega | {o, (i,)} if negated else omega | {o}
            if z == target:
                return {"Omega": omega, "O": o, "i": i, "phi": lhs.body}
    return None


def matches_schema(w: Wff, name: str, system: str) -> dict | None:
    """Bindings if ``w`` is an instance of schema ``name`` in ``system``."""
    check_system(system)
    if name not in SCHEMAS[system]:
        raise SchemaError(f"{name} is not a schema of {system}")
    if language_error(w, system):
        return None
    if name in ("G2", "V2"):
        if isinstance(w, Not) and _box_bot(w.arg) and isinstance(w.arg.index, Group) and len(w.arg.index.agents) == 1:
            return {"i": next(iter(w.arg.index.agents))}
        return None
    if name in ("G1", "V1"):
        return _match_k(w, system)
    if name in ("G3", "V3"):
        return _match_lift(w, system)
    if name == "O1":
        return _match_cut(w, True)
    if name == "O2":
        return _match_cut(w, False)
    if name == "O1'":
        return _match_skip(w, True)
    if name == "O2'":
        return _match_skip(w, False)
    if name == "P":
        return {} if boolean.is_tautology(w) else None
    raise SchemaError(name)


def match_axiom(w: Wff, system: str) -> AxiomMatch | None:
    """First schema (by fixed precedence) that ``w`` instantiates."""
    for name in SCHEMAS[check_system(system)]:
        b = matches_schema(w, name, system)
        if b is not None:
            return AxiomMatch(name, b)
    return None


# ---------------------------------------------------------------------------
# instance generation for propositional steps

ALIASES = {
    "DBFc": {"G1": "K", "G2": "D", "G3": "LIFT", "O1": "O1", "O2": "O2", "Gen": "GEN"},
    "DBFs": {"V1": "K", "V2": "D", "V3": "LIFT", "O1'": "O1", "O2'": "O2", "Gen": "GEN"},
}


def hint_kinds(hints, system: str) -> set:
    table = ALIASES[system]
    out = set()
    for h in hints:
        if h == "P":
            continue
        if h not in table:
            raise SchemaError(f"{h} cannot be cited in a propositional step of {system}")
        out.add(table[h])
    return out


def _pool(formulas) -> list:
    out: dict = {}
    for f in formulas:
        for x in boolean.leaves(f):
            if isinstance(x, Box):
                out[x] = None
    return list(out)


def _order_instances(boxes, system):
    out = []
    for b in boxes:
        idx = b.index
        if system == "DBFc":
            if isinstance(idx, Order):
                o = idx.agents
                d = Group(frozenset(o))
                prev = canonical_index(Order(o[:-1]))
                out.append(("O1", Implies(Not(Box(d, BOT)), Iff(b, Box(d, b.body)))))
                out.append(("O2", Implies(Box(d, BOT), Iff(b, Box(prev, b.body)))))
        elif isinstance(idx, (Order, OrderSet)):
            y = orders_of(idx)
            for top in sorted(y):
                if len(top) < 2:
                    continue
                o, i = top[:-1], top[-1]
                omega = y - {top}
                x = index_from_orders([o, (i,)])
                z1 = index_from_orders(omega | {o, (i,)})
                z2 = index_from_orders(omega | {o})
                out.append(("O1", Implies(Not(Box(x, BOT)), Iff(b, Box(z1, b.body)))))
                out.append(("O2", Implies(Box(x, BOT), Iff(b, Box(z2, b.body)))))
    return out


def _lift_instances(boxes, system):
    out = []
    indices = list(dict.fromkeys(b.index for b in boxes))
    for b in boxes:
        if system == "DBFc":
            if not isinstance(b.index, Group):
                continue
            for idx in indices:
                if isinstance(idx, Group) and b.index.agents < idx.agents:
                    out.append(Implies(b, Box(idx, b.body)))
        else:
            small = _omega(b.index)
            for idx in indices:
                big = _omega(idx)
                if small is not None and big is not None and small < big:
                    out.append(Implies(b, Box(idx, b.body)))
    return out


def _k_instances(boxes, targets, system, with_k: bool, with_gen: bool):
    out = []
    by_index: dict = {}
    for b in boxes:
        by_index.setdefault(b.index, []).append(b.body)
    for t in targets:
        idx = t.index
        if not index_allowed(idx, system) or (system == "DBFc" and not isinstance(idx, Group)):
            continue
        goal = t.body
        if boolean.is_tautology(goal):
            if with_gen or with_k:
                out.append(t)
            continue
        if not with_k:
            continue
        bodies = [x for x in dict.fromkeys(by_index.get(idx, [])) if x != goal]
        found: list = []
        for s in boolean.subsets(bodies, 1, 3):
            if any(set(f) <= set(s) for f in found):
                continue
            if boolean.is_tautology(Implies(conj(s), goal)):
                found.append(s)
                out.append(Implies(conj(Box(idx, x) for x in s), t))
    return out


def step_instances(hints, cited: list, target: Wff, system: str) -> list:
    """Theorem instances made available to a propositional step by its cited schema names."""
    kinds = hint_kinds(hints, system)
    if not kinds:
        return []
    original = _pool(cited + [target])
    extra: list = []
    boxes = list(original)
    if "O1" in kinds or "O2" in kinds:
        for kind, inst in _order_instances(original, system):
            if kind in kinds:
                extra.append(inst)
        boxes = _pool([*cited, target, *extra])
    if "LIFT" in kinds:
        extra.extend(_lift_instances(boxes, system))
        boxes = _pool([*cited, target, *extra])
    if "D" in kinds:
        ags = sorted({a for b in boxes if _omega(b.index) is not None for a in delta(b.index)})
        extra.extend(Not(Box(Group(frozenset([a])), BOT)) for a in ags)
    if "K" in kinds or "GEN" in kinds:
        extra.extend(_k_instances(boxes, original, system, "K" in kinds, "GEN" in kinds))
    return list(dict.fromkeys(extra))


def describe_instance(w: Wff) -> str:
    return render(w)
