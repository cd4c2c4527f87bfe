"""Satisfaction of wffs in finite models.

Truth sets are world bitmasks.  An ``Evaluator`` memoises the truth set of
every subformula it meets, so checking many formulas against one model shares
work.  Priority orders ``[O]`` are read under one global strategy: CUTTING
drops every agent after the first inconsistent prefix, SKIPPING drops only
the agents that clash with what has been accumulated so far.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import orders as ords
from .boolean import bits
from .formula import (
    And,
    Arb,
    ArbLeaf,
    Atom,
    Bottom,
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
    Top,
    Wff,
    canonical_index,
    linear_extensions,
    render_index,
)
from .kripke import KripkeModel


class Strategy(enum.Enum):
    CUTTING = "cutting"
    SKIPPING = "skipping"

    @classmethod
    def coerce(cls, value) -> "Strategy":
        if isinstance(value, cls):
            return value
        text = {"cut": "cutting", "skip": "skipping"}.get(str(value).lower(), str(value).lower())
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown strategy {value!r} (use cutting or skipping)") from None


class SemanticsError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: frozenset | None = None  # accessible worlds, when the formula is a relational box

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------------------
# accessibility for relational indices


def _check_agents(m: KripkeModel, ags) -> None:
    for i in ags:
        if not 1 <= i <= m.n_agents:
            raise SemanticsError(f"unknown agent {i} (model has {m.n_agents})")


def rel_group(m: KripkeModel, w: int, group) -> int:
    group = tuple(group)
    if not group:
        raise SemanticsError("empty group")
    _check_agents(m, group)
    out = m.full
    for i in group:
        out &= m.rel[i - 1][w]
    return out


def rel_order_cut(m: KripkeModel, w: int, order: Sequence[int]) -> int:
    """Intersection over the longest prefix of ``order`` whose intersection is nonempty."""
    _check_agents(m, order)
    if not order:
        raise SemanticsError("empty order")
    acc = m.rel[order[0] - 1][w]
    for i in order[1:]:
        nxt = acc & m.rel[i - 1][w]
        if not nxt:
            break
        acc = nxt
    return acc


def rel_order_cut_inductive(m: KripkeModel, w: int, order: Sequence[int]) -> int:
    """The inductive clause read literally: test the whole prefix group each step."""
    _check_agents(m, order)
    acc = m.rel[order[0] - 1][w]
    for k in range(1, len(order)):
        if rel_group(m, w, order[: k + 1]):
            acc &= m.rel[order[k] - 1][w]
    return acc


def rel_order_skip(m: KripkeModel, w: int, order: Sequence[int]) -> int:
    _check_agents(m, order)
    if not order:
        raise SemanticsError("empty order")
    acc = m.rel[order[0] - 1][w]
    for i in order[1:]:
        nxt = acc & m.rel[i - 1][w]
        if nxt:
            acc = nxt
    return acc


def rel_order(m: KripkeModel, w: int, order: Sequence[int], strategy) -> int:
    if Strategy.coerce(strategy) is Strategy.CUTTING:
        return rel_order_cut(m, w, order)
    return rel_order_skip(m, w, order)


def rel_orderset(m: KripkeModel, w: int, orders, strategy) -> int:
    strategy = Strategy.coerce(strategy)
    orders = list(orders)
    if not orders:
        raise SemanticsError("empty order set")
    if strategy is Strategy.CUTTING and len(orders) > 1 and any(len(o) > 1 for o in orders):
        raise SemanticsError("order-set boxes are only available under skipping")
    out = m.full
    for o in orders:
        out &= rel_order(m, w, o, strategy)
    return out


def rel_arb(m: KripkeModel, w: int, expr, arb_order: ords.ArbOrder | None = None) -> int:
    arb_order = arb_order or ords.ArbOrder(m)
    if isinstance(expr, ArbLeaf):
        _check_agents(m, [expr.agent])
        return m.rel[expr.agent - 1][w]
    a = rel_arb(m, w, expr.left, arb_order)
    b = rel_arb(m, w, expr.right, arb_order)
    if expr.op == "+":
        return a & b
    if expr.op == ".":
        return a | b
    try:
        return arb_order.minimal(a, b) | arb_order.minimal(b, a)
    except ords.OrderError as e:
        raise SemanticsError(str(e)) from None


def dist_state(m: KripkeModel, u: int, agent: int) -> tuple:
    """Distance from each world to the belief state R_agent(u)."""
    if m.metric is None:
        raise SemanticsError("majority merging needs a metric")
    _check_agents(m, [agent])
    state = bits(m.rel[agent - 1][u])
    return tuple(min(m.metric[w][v] for v in state) for w in range(m.size))


def majority_scores(m: KripkeModel, u: int, weights) -> tuple:
    total = [0.0] * m.size
    for i, wt in weights:
        d = dist_state(m, u, i)
        for w in range(m.size):
            total[w] += d[w] * wt
    return tuple(total)


def sphere_holds(ranks: Sequence[float], good: int) -> bool:
    """Some w0 has every world ranked at or below it in ``good`` (read literally)."""
    n = len(ranks)
    for w0 in range(n):
        if all(good >> w & 1 for w in range(n) if ords.leq(ranks[w], ranks[w0])):
            return True
    return False


def min_worlds(ranks: Sequence[float], among: int) -> int:
    cand = bits(among)
    if not cand:
        return 0
    best = min(ranks[w] for w in cand)
    return sum(1 << w for w in cand if ords.leq(ranks[w], best))


# ---------------------------------------------------------------------------
# evaluator


class Evaluator:
    def __init__(self, m: KripkeModel, strategy=Strategy.CUTTING):
        self.m = m
        self.strategy = Strategy.coerce(strategy)
        self._memo: dict = {}
        self._arb = ords.ArbOrder(m)

    # relational indices ------------------------------------------------------
    def relational(self, index) -> bool:
        return isinstance(index, (Group, Order, OrderSet, Arb))

    def rel(self, w: int, index) -> int:
        m = self.m
        if isinstance(index, Group):
            return rel_group(m, w, sorted(index.agents))
        if isinstance(index, Order):
            return rel_order(m, w, index.agents, self.strategy)
        if isinstance(index, OrderSet):
            return rel_orderset(m, w, sorted(index.orders), self.strategy)
        if isinstance(index, Arb):
            return rel_arb(m, w, index.expr, self._arb)
        raise SemanticsError(f"index {render_index(index)} has no accessibility relation")

    # truth sets --------------------------------------------------------------
    def ext(self, f: Wff) -> int:
        r = self._memo.get(f)
        if r is None:
            r = self._ext(f)
            self._memo[f] = r
        return r

    def holds(self, world, f: Wff) -> bool:
        return bool(self.ext(f) >> self.m.index(world) & 1)

    def valid(self, f: Wff) -> bool:
        return self.ext(f) == self.m.full

    def _ext(self, f: Wff) -> int:
        m = self.m
        full = m.full
        if isinstance(f, Atom):
            return m.val.get(f.name, 0)
        if isinstance(f, Top):
            return full
        if isinstance(f, Bottom):
            return 0
        if isinstance(f, Not):
            return full ^ self.ext(f.arg)
        if isinstance(f, And):
            return self.ext(f.left) & self.ext(f.right)
        if isinstance(f, Or):
            return self.ext(f.left) | self.ext(f.right)
        if isinstance(f, Implies):
            return (full ^ self.ext(f.left)) | self.ext(f.right)
        if isinstance(f, Iff):
            return full ^ (self.ext(f.left) ^ self.ext(f.right))
        if isinstance(f, Box):
            return self._box(f.index, f.body)
        raise TypeError(f)

    def _box(self, index, body: Wff) -> int:
        m = self.m
        index = canonical_index(index)
        body_ext = self.ext(body)
        bad = m.full ^ body_ext
        out = 0
        if self.relational(index):
            for u in range(m.size):
                if not self.rel(u, index) & bad:
                    out |= 1 << u
            return out
        if isinstance(index, Partial):
            out = m.full
            for o in linear_extensions(index):
                out &= self._box(Order(o), body)
            return out
        if isinstance(index, MajMerge):
            for u in range(m.size):
                ranks = majority_scores(m, u, index.weights)
                if not min_worlds(ranks, m.full) & bad:
                    out |= 1 << u
            return out
        if isinstance(index, Graded):
            _check_agents(m, index.group)
            thr = Fraction(index.threshold)
            for u in range(m.size):
                states = 0
                for i in index.group:
                    states |= m.rel[i - 1][u]
                ratio = Fraction(bin(states & body_ext).count("1"), bin(states).count("1"))
                if ratio > thr:
                    out |= 1 << u
            return out
        if isinstance(index, ICMerge):
            _check_agents(m, index.group)
            phi = self.ext(index.constraint)
            if not phi:
                return m.full
            for u in range(m.size):
                ranks = self._ic_ranks(u, index.group)
                sphere = self._sphere(ranks, phi)
                if not sphere & phi & bad:
                    out |= 1 << u
            return out
        if isinstance(index, Rev):
            return self._rev(index, body_ext)
        raise SemanticsError(f"unsupported index {index!r}")

    def _ic_ranks(self, u: int, group) -> tuple:
        states = [self.m.rel[i - 1][u] for i in sorted(group)]
        try:
            return ords.ic_ranks(self.m, states)
        except ords.OrderError as e:
            raise SemanticsError(str(e)) from None

    @staticmethod
    def _sphere(ranks, candidates: int) -> int:
        """Worlds ranked at or below the best candidate."""
        best = min(ranks[w] for w in bits(candidates))
        return sum(1 << w for w in range(len(ranks)) if ords.leq(ranks[w], best))

    def revision_sequence(self, u: int, head: int, steps: Sequence) -> list:
        m = self.m
        _check_agents(m, [head] + [s for s in steps if isinstance(s, int)])
        seq = [m.rel[head - 1][u]]
        for s in steps:
            seq.append(m.rel[s - 1][u] if isinstance(s, int) else self.ext(s))
        return seq

    def _rev(self, index: Rev, body_ext: int) -> int:
        m = self.m
        last = index.steps[-1]
        out = 0
        if not isinstance(last, int):
            phi = self.ext(last)
            if not phi:
                return m.full
        for u in range(m.size):
            seq = self.revision_sequence(u, index.head, index.steps[:-1])
            try:
                keys = [ords.sequence_key(m, seq, w) for w in range(m.size)]
            except ords.OrderError as e:
                raise SemanticsError(str(e)) from None
            cand = phi if not isinstance(last, int) else m.rel[last - 1][u]
            best = min((keys[w] for w in bits(cand)), key=_KeySort)
            sphere = sum(1 << w for w in range(m.size) if ords.key_leq(keys[w], best))
            if not sphere & cand & ~body_ext:
                out |= 1 << u
        return out

    # diagnostics -------------------------------------------------------------
    def verdict(self, world, f: Wff) -> Verdict:
        w = self.m.index(world)
        holds = self.holds(w, f)
        witness = None
        if isinstance(f, Box) and self.relational(canonical_index(f.index)):
            witness = self.m.names(self.rel(w, canonical_index(f.index)))
        return Verdict(holds, witness)


class _KeySort:
    """Sort wrapper for lexicographic keys with a tolerant last component."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return ords.key_leq(self.k, other.k) and not ords.key_leq(other.k, self.k)


def satisfies(m: KripkeModel, world, f: Wff, strategy=Strategy.CUTTING) -> Verdict:
    return Evaluator(m, strategy).verdict(world, f)


def truth_set(m: KripkeModel, f: Wff, strategy=Strategy.CUTTING) -> int:
    return Evaluator(m, strategy).ext(f)


def ic_selected(m: KripkeModel, u, constraint: Wff, group, strategy=Strategy.CUTTING) -> int:
    """The constraint-worlds minimal for the IC pre-order at ``u``."""
    ev = Evaluator(m, strategy)
    phi = ev.ext(constraint)
    if not phi:
        return 0
    ranks = ev._ic_ranks(m.index(u), group)
    return min_worlds(ranks, phi)


def majority_sphere_ext(m: KripkeModel, index: MajMerge, body: Wff, strategy=Strategy.CUTTING) -> int:
    """Truth set of a majority box via the literal system-of-spheres clause."""
    ev = Evaluator(m, strategy)
    good = ev.ext(body)
    out = 0
    for u in range(m.size):
        if sphere_holds(majority_scores(m, u, index.weights), good):
            out |= 1 << u
    return out


def describe(m: KripkeModel, mask: int) -> str:
    return "{" + ", ".join(sorted(m.names(mask))) + "}"


__all__ = [
    "Evaluator",
    "SemanticsError",
    "Strategy",
    "Verdict",
    "describe",
    "dist_state",
    "ic_selected",
    "majority_scores",
    "majority_sphere_ext",
    "min_worlds",
    "rel_arb",
    "rel_group",
    "rel_order",
    "rel_order_cut",
    "rel_order_cut_inductive",
    "rel_order_skip",
    "rel_orderset",
    "satisfies",
    "sphere_holds",
    "truth_set",
]
