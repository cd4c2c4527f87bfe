"""Pre-orders used by arbitration, IC merging and iterated revision.

Each kind of pre-order is read from a model's explicit rank blocks when one
covers the requested state, and otherwise from a distance-based default rule:

* arbitration index A: a set ranks by its minimum distance to A;
* revision base U: a world ranks by its distance to U;
* IC multiset {U_1..U_k}: a world ranks by the sum of its distances to each U_j.

The checkers below audit the postulated conditions on a finite family of
states instead of trusting the defaults.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .boolean import bits

TOL = 1e-9


class OrderError(ValueError):
    pass


def _need_metric(m, what: str):
    if m.metric is None:
        raise OrderError(f"{what} needs a metric or an explicit rank block")
    return m.metric


def state_distance(m, w: int, state: int) -> float:
    if not state:
        return math.inf
    met = _need_metric(m, "distance to a state")
    return min(met[w][v] for v in bits(state))


def leq(a: float, b: float) -> bool:
    return a <= b + TOL


def lt(a: float, b: float) -> bool:
    return a < b - TOL


# ---------------------------------------------------------------------------
# arbitration: index A -> pre-order over sets of worlds


class ArbOrder:
    """Set comparison ``B <=_A C`` for one model, with caching."""

    def __init__(self, m):
        self.m = m
        self._cache: dict = {}

    def world_rank(self, index: int, w: int) -> float:
        block = self.m.arb_ranks.get(index)
        if block is not None and (1 << w) in block:
            return block[1 << w]
        if not index:
            return 0.0
        return state_distance(self.m, w, index)

    def set_rank(self, index: int, s: int) -> float:
        key = (index, s)
        r = self._cache.get(key)
        if r is None:
            block = self.m.arb_ranks.get(index)
            if block is not None and s in block:
                r = block[s]
            elif not s:
                r = math.inf
            else:
                r = min(self.world_rank(index, w) for w in bits(s))
            self._cache[key] = r
        return r

    def leq(self, index: int, b: int, c: int) -> bool:
        return leq(self.set_rank(index, b), self.set_rank(index, c))

    def minimal(self, s: int, index: int) -> int:
        """min(s, <=_index) computed from singleton comparisons."""
        key = ("min", s, index)
        out = self._cache.get(key)
        if out is None:
            ranks = [(w, self.set_rank(index, 1 << w)) for w in bits(s)]
            # x is minimal iff no y is strictly below it, i.e. r_x <= min r (up to TOL)
            best = min((r for _, r in ranks), default=math.inf)
            out = sum(1 << w for w, r in ranks if leq(r, best))
            self._cache[key] = out
        return out


# ---------------------------------------------------------------------------
# state orders: world ranks for revision bases and IC multisets


def rev_ranks(m, state: int) -> tuple:
    explicit = m.rev_ranks.get(state)
    if explicit is not None:
        return explicit
    return tuple(state_distance(m, w, state) for w in range(m.size))


def ic_ranks(m, states: Sequence[int]) -> tuple:
    key = tuple(sorted(states))
    explicit = m.ic_ranks.get(key)
    if explicit is not None:
        return explicit
    return tuple(sum(state_distance(m, w, u) for u in key) for w in range(m.size))


def sequence_key(m, seq: Sequence[int], w: int) -> tuple:
    """Lexicographic rank of ``w`` under the pre-order attached to a state sequence.

    Later states dominate: membership in U_k first, down to U_2, then the
    base rank relative to U_1.
    """
    head = tuple(0 if seq[k] >> w & 1 else 1 for k in range(len(seq) - 1, 0, -1))
    return head + (rev_ranks(m, seq[0])[w],)


def key_leq(a: tuple, b: tuple) -> bool:
    for x, y in zip(a[:-1], b[:-1]):
        if x != y:
            return x < y
    return leq(a[-1], b[-1])


# ---------------------------------------------------------------------------
# condition checking


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: str

    def __str__(self):
        return f"FAIL condition {self.condition}: {self.witness}"


def nonempty_subsets(n_worlds: int) -> list:
    return list(range(1, 1 << n_worlds))


def arb_family(m, touched: Iterable[int] = ()) -> tuple:
    """(compared sets, indices) to audit: everything on tiny models, else a touched fragment."""
    touched = {t for t in touched if t}
    touched |= {k for k in m.arb_ranks if k}
    for block in m.arb_ranks.values():
        touched |= {s for s in block if s}
    if m.size <= 4:
        every = nonempty_subsets(m.size)
        return every, every
    singles = [1 << k for k in range(m.size)]
    fam = sorted(set(singles) | touched)
    return fam, sorted(touched) or singles


def check_arb_conditions(
    m,
    family: Sequence[int] | None = None,
    indices: Sequence[int] | None = None,
    reading: str = "or",
    conditions: Iterable[str] = ("1", "2", "3", "4", "5", "limit"),
    max_reports: int = 50,
) -> list:
    """Audit the arbitration pre-orders of ``m``; returns violations (empty list = pass).

    ``reading`` selects how the union condition is read: ``"or"`` requires
    one of the two sets to be no better than their union, ``"and"`` requires
    both.
    """
    if family is None or indices is None:
        fam, idx = arb_family(m)
        family = fam if family is None else family
        indices = idx if indices is None else indices
    order = ArbOrder(m)
    names = m.names
    out: list = []
    conditions = set(conditions)

    def fmt(x):
        return "{" + ",".join(sorted(names(x))) + "}"

    def report(cond, text):
        if len(out) < max_reports:
            out.append(Violation(cond, text))

    for a in indices:
        rank = {b: order.set_rank(a, b) for b in family}
        if "1" in conditions:
            for b, c, d in itertools.product(family, repeat=3):
                if leq(rank[b], rank[c]) and leq(rank[c], rank[d]) and not leq(rank[b], rank[d]):
                    report("1", f"index {fmt(a)}: {fmt(b)} <= {fmt(c)} <= {fmt(d)}")
        fam_set = set(family)
        if "2" in conditions:
            for b in family:
                for c in family:
                    if b != c and b & ~c == 0 and not leq(rank[c], rank[b]):
                        report("2", f"index {fmt(a)}: {fmt(b)} subset of {fmt(c)}")
        if "3" in conditions:
            for b, c in itertools.combinations(family, 2):
                u = b | c
                ru = rank[u] if u in fam_set else order.set_rank(a, u)
                one, two = leq(rank[b], ru), leq(rank[c], ru)
                ok = (one and two) if reading == "and" else (one or two)
                if not ok:
                    report("3", f"index {fmt(a)}: {fmt(b)}, {fmt(c)} against union {fmt(u)}")
        if "4" in conditions:
            best = min(rank.values())
            for b in family:
                is_min = leq(rank[b], best)
                if is_min != bool(a & b):
                    side = "minimal but disjoint from" if is_min else "meets but not minimal for"
                    report("4", f"{fmt(b)} {side} index {fmt(a)}")
        if "limit" in conditions:
            for u in family:
                if not order.minimal(u, a):
                    report("limit", f"min({fmt(u)}) empty under index {fmt(a)}")
    if "5" in conditions:
        for c, d in itertools.product(indices, repeat=2):
            cd = c | d
            for a, b in itertools.product(family, repeat=2):
                lhs = order.leq(cd, a, b)
                ab = a | b
                rhs = (order.leq(ab, c, d) and order.leq(c, a, b)) or (order.leq(ab, d, c) and order.leq(d, a, b))
                if lhs != rhs:
                    report("5", f"sets {fmt(a)}, {fmt(b)} with indices {fmt(c)}, {fmt(d)}")
    return out


def check_revision_base(ranks: Sequence[float], state: int, names: Callable[[int], frozenset]) -> list:
    """Conditions (i)-(ii) for the base pre-order of a revision state."""
    out = []
    inside = [w for w in range(len(ranks)) if state >> w & 1]
    outside = [w for w in range(len(ranks)) if not state >> w & 1]
    for w, v in itertools.combinations(inside, 2):
        if not (leq(ranks[w], ranks[v]) and leq(ranks[v], ranks[w])):
            out.append(Violation("i", f"{sorted(names(1 << w))[0]} and {sorted(names(1 << v))[0]} unequal inside the state"))
    for w in inside:
        for v in outside:
            if not lt(ranks[w], ranks[v]):
                out.append(Violation("ii", f"{sorted(names(1 << v))[0]} not strictly above {sorted(names(1 << w))[0]}"))
    return out


def union_multiset(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(sorted(tuple(a) + tuple(b)))


def check_syncretic_conditions(
    rank_of: Callable[[tuple], Sequence[float]],
    family: Iterable[Sequence[int]],
    n_worlds: int,
    pairs: Iterable[tuple] | None = None,
    names: Callable[[int], frozenset] | None = None,
    max_reports: int = 50,
) -> list:
    """Audit an IC pre-order assignment on a declared family of multisets.

    Conditions 4-5 are checked on ``pairs`` (multiset pairs whose union must
    lie in the family; a missing union raises).  When ``pairs`` is omitted,
    every pair whose union happens to be in the family is checked.
    """
    fam = [tuple(sorted(u)) for u in family]
    fam_set = set(fam)
    names = names or (lambda mask: frozenset(f"w{k}" for k in bits(mask)))
    out: list = []

    def w_(k):
        return sorted(names(1 << k))[0]

    def st(ms):
        return "|".join("{" + ",".join(sorted(names(u))) + "}" for u in ms)

    def report(cond, text):
        if len(out) < max_reports:
            out.append(Violation(cond, text))

    ranks = {u: tuple(rank_of(u)) for u in fam}
    worlds = range(n_worlds)
    for u in fam:
        r = ranks[u]
        meet = (1 << n_worlds) - 1
        for s in u:
            meet &= s
        inside = [w for w in worlds if meet >> w & 1]
        for w, v in itertools.product(inside, repeat=2):
            if not leq(r[w], r[v]):
                report("1", f"{st(u)}: {w_(w)} above {w_(v)} inside the intersection")
        for w in inside:
            for v in worlds:
                if not meet >> v & 1 and not lt(r[w], r[v]):
                    report("2", f"{st(u)}: {w_(v)} not strictly above {w_(w)}")
        if len(u) == 2:
            for first, second in ((u[0], u[1]), (u[1], u[0])):
                for w in bits(first):
                    if not any(leq(r[v], r[w]) for v in bits(second)):
                        report("3", f"{st(u)}: no world of {st((second,))} at or below {w_(w)}")
    if pairs is None:
        pairs = [(a, b) for a, b in itertools.product(fam, repeat=2) if union_multiset(a, b) in fam_set]
    for a, b in pairs:
        a, b = tuple(sorted(a)), tuple(sorted(b))
        ab = union_multiset(a, b)
        if ab not in fam_set or a not in fam_set or b not in fam_set:
            raise OrderError(f"family not closed under union for {st(a)} and {st(b)}")
        ra, rb, rab = ranks[a], ranks[b], ranks[ab]
        for w, v in itertools.product(worlds, repeat=2):
            if leq(ra[w], ra[v]) and leq(rb[w], rb[v]) and not leq(rab[w], rab[v]):
                report("4", f"{st(a)} + {st(b)}: {w_(w)} vs {w_(v)}")
            if lt(ra[w], ra[v]) and leq(rb[w], rb[v]) and not lt(rab[w], rab[v]):
                report("5", f"{st(a)} + {st(b)}: {w_(w)} vs {w_(v)}")
    return out


def validate_supplied_orders(m) -> list:
    """Messages for every explicit rank block that breaks its conditions."""
    msgs = []
    if m.arb_ranks:
        try:
            msgs.extend(str(v) for v in check_arb_conditions(m, max_reports=1))
        except OrderError as e:
            msgs.append(str(e))
    for state, ranks in m.rev_ranks.items():
        for v in check_revision_base(ranks, state, m.names):
            msgs.append(str(v))
    if m.ic_ranks:

        def rank_of(u):
            return ic_ranks(m, u)

        fam = set(m.ic_ranks)
        pairs = []
        for ab in fam:
            # split every supplied multiset into two nonempty parts we can rank
            for k in range(1, len(ab)):
                for left in set(itertools.combinations(ab, k)):
                    right = list(ab)
                    for x in left:
                        right.remove(x)
                    parts = (tuple(sorted(left)), tuple(sorted(right)))
                    if all(p in fam or m.metric is not None for p in parts):
                        pairs.append(parts)
        full_fam = fam | {p for pair in pairs for p in pair}
        try:
            found = check_syncretic_conditions(rank_of, full_fam, m.size, pairs=pairs, names=m.names, max_reports=1)
        except (OrderError, TypeError) as e:
            found = [str(e)]
        msgs.extend(str(v) for v in found)
    return msgs
