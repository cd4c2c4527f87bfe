"""Bounded countermodel search for the group/order fragment.

Two enumerators are used:

* For wffs of modal depth at most one, truth at the evaluation world w0 only
  depends on the valuation of w0 and on the worlds reachable from w0.  A
  world is then summarised by its *type*: its valuation plus the agents whose
  relation reaches it from w0.  Worlds of equal type are interchangeable, so
  a model with k worlds is w0 plus a set of k-1 distinct types; every other
  world just loops to itself.
* Deeper wffs (or modal global premises) fall back to enumerating every
  serial relation, skipping models that are not the least representative of
  their class under renaming of the worlds other than w0.

Both searches are exhaustive up to the world bound; finding nothing is an
inconclusive result, never a validity claim.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import boolean
from .formula import (
    Atom,
    Box,
    Group,
    Not,
    Order,
    OrderSet,
    Partial,
    Wff,
    agents as wff_agents,
    atoms as wff_atoms,
    conj,
    expand_partial,
    modal_depth,
    render_index,
    subformulas,
)
from .kripke import KripkeModel, save_model
from .semantics import Evaluator, SemanticsError, Strategy


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_worlds: int
    n_agents: int | None = None
    atoms: tuple | None = None
    prune: bool = True
    threads: int | None = None

    def __post_init__(self):
        if self.max_worlds < 1:
            raise SearchError("max_worlds must be at least 1")


@dataclass(frozen=True)
class SearchResult:
    found: bool
    bound: int
    model: KripkeModel | None = None
    world: str | None = None
    examined: int = 0

    @property
    def refuted(self) -> bool:
        return self.found

    @property
    def inconclusive(self) -> bool:
        return not self.found

    @property
    def message(self) -> str:
        if self.found:
            return f"countermodel with {self.model.size} worlds (evaluated at {self.world})"
        return f"no countermodel ≤ {self.bound}"

    def __bool__(self):
        return self.found


def _threads(budget: SearchBudget) -> int:
    if budget.threads is not None:
        return max(1, budget.threads)
    try:
        return max(1, int(os.environ.get("BELIEFUSE_THREADS", "1")))
    except ValueError:
        return 1


def _check_fragment(f: Wff) -> None:
    for x in subformulas(f):
        if isinstance(x, Box) and not isinstance(x.index, (Group, Order, OrderSet, Partial)):
            raise SearchError(f"countermodel search does not support [{render_index(x.index)}]")


# ---------------------------------------------------------------------------
# problem setup


@dataclass(frozen=True)
class _Problem:
    target: Wff  # must hold at w0 in a countermodel
    global_: tuple  # must hold at every world
    atoms: tuple
    n_agents: int
    strategy: Strategy


def _setup(local: Sequence[Wff], negated: Wff, global_: Sequence[Wff], strategy, budget: SearchBudget) -> _Problem:
    local = [expand_partial(f) for f in local]
    negated = expand_partial(negated)
    global_ = tuple(expand_partial(f) for f in global_)
    target = conj(list(local) + [Not(negated)])
    for f in (target, *global_):
        _check_fragment(f)
    names = set()
    ags = set()
    for f in (target, *global_):
        names |= wff_atoms(f)
        ags |= wff_agents(f)
    atoms = tuple(sorted(names)) if budget.atoms is None else tuple(budget.atoms)
    missing = names - set(atoms)
    if missing:
        raise SearchError(f"atom set omits {sorted(missing)}")
    n = budget.n_agents if budget.n_agents is not None else max(ags, default=1)
    if ags and max(ags) > n:
        raise SearchError(f"formula mentions agent {max(ags)} beyond the {n} searched")
    return _Problem(target, global_, atoms, n, Strategy.coerce(strategy))


# ---------------------------------------------------------------------------
# depth-one search over world types


def _cut(rs, order):
    acc = rs[order[0] - 1]
    for i in order[1:]:
        nxt = acc & rs[i - 1]
        if not nxt:
            break
        acc = nxt
    return acc


def _skip(rs, order):
    acc = rs[order[0] - 1]
    for i in order[1:]:
        nxt = acc & rs[i - 1]
        if nxt:
            acc = nxt
    return acc


def _access(rs, index, strategy, full):
    if isinstance(index, Group):
        out = full
        for i in index.agents:
            out &= rs[i - 1]
        return out
    step = _cut if strategy is Strategy.CUTTING else _skip
    if isinstance(index, Order):
        return step(rs, index.agents)
    if strategy is Strategy.CUTTING:
        raise SemanticsError("order-set boxes are only available under skipping")
    out = full
    for o in index.orders:
        out &= step(rs, o)
    return out


class _TypeSearch:
    """Enumerates w0 plus sets of distinct world types."""

    def __init__(self, prob: _Problem):
        self.prob = prob
        self.a = len(prob.atoms)
        self.n = prob.n_agents
        self.n_vals = 1 << self.a
        self.n_types = self.n_vals << self.n
        self.boxes = [x for x in boolean.leaves(prob.target) if isinstance(x, Box)]
        pos = {name: j for j, name in enumerate(prob.atoms)}
        # body truth per valuation, as a bitset over valuations
        self.box_pos = {b: j for j, b in enumerate(self.boxes)}
        self.body_vals = []
        for b in self.boxes:
            self.body_vals.append(self._prop_table(b.body, pos))
        gmask = (1 << self.n_vals) - 1
        for g in prob.global_:
            gmask &= self._prop_table(g, pos)
        self.global_vals = gmask

    def _prop_table(self, f, pos):
        full, *cols = boolean.columns(self.a)

        def leaf(x):
            if isinstance(x, Box):
                raise SearchError("nested boxes in the depth-one search")
            return cols[pos[x.name]]

        return boolean.evaluate(f, leaf, full)

    def _prepare(self):
        vm, n = self.n_vals, self.n
        self.leaf_list = boolean.leaves(self.prob.target)
        self.leaf_pos = {x: j for j, x in enumerate(self.leaf_list)}
        self.table = None
        if len(self.leaf_list) <= 20:
            full, *cols = boolean.columns(len(self.leaf_list))
            self.table = boolean.evaluate(self.prob.target, lambda x: cols[self.leaf_pos[x]], full)
        self.memb = [tuple((t // vm) >> i & 1 for i in range(n)) for t in range(self.n_types)]
        self.body = [tuple(tb >> (t % vm) & 1 for tb in self.body_vals) for t in range(self.n_types)]
        self.ok = [self.global_vals >> (t % vm) & 1 for t in range(self.n_types)]
        self.atom_bits = [
            [(t % vm) >> self.prob.atoms.index(x.name) & 1 if isinstance(x, Atom) else 0 for x in self.leaf_list]
            for t in range(self.n_types)
        ]

    def holds(self, w0, others) -> bool:
        if not hasattr(self, "memb"):
            self._prepare()
        worlds = (w0, *others)
        n = self.n
        rs = [0] * n
        bodies = [0] * len(self.boxes)
        for k, t in enumerate(worlds):
            if not self.ok[t]:
                return False
            bit = 1 << k
            for i, m in enumerate(self.memb[t]):
                if m:
                    rs[i] |= bit
            for b, x in enumerate(self.body[t]):
                if x:
                    bodies[b] |= bit
        if not all(rs):
            return False
        full = (1 << len(worlds)) - 1
        row = 0
        for j, x in enumerate(self.leaf_list):
            if isinstance(x, Box):
                b = self.box_pos[x]
                v = 0 if _access(rs, x.index, self.prob.strategy, full) & ~bodies[b] else 1
            else:
                v = self.atom_bits[w0][j]
            row |= v << j
        if self.table is not None:
            return self.table >> row & 1 == 1
        values = {x: row >> j & 1 for j, x in enumerate(self.leaf_list)}
        return boolean.evaluate(self.prob.target, values.__getitem__, 1) == 1

    def candidates(self, k: int, w0: int, prune: bool):
        if prune:
            return itertools.combinations(range(self.n_types), k - 1)
        return itertools.product(range(self.n_types), repeat=k - 1)

    def build(self, w0, others) -> KripkeModel:
        worlds = (w0, *others)
        vm, n = self.n_vals, self.n
        names = tuple(f"w{k}" for k in range(len(worlds)))
        rel = []
        for i in range(n):
            row = [0] * len(worlds)
            for k, t in enumerate(worlds):
                if (t // vm) >> i & 1:
                    row[0] |= 1 << k
            for k in range(1, len(worlds)):
                row[k] = 1 << k
            rel.append(tuple(row))
        val = {a: 0 for a in self.prob.atoms}
        for k, t in enumerate(worlds):
            for j, a in enumerate(self.prob.atoms):
                if (t % vm) >> j & 1:
                    val[a] |= 1 << k
        return KripkeModel(names, n, tuple(rel), val)


def _type_partition(args):
    prob, k, w0, prune = args
    ts = _TypeSearch(prob)
    count = 0
    for others in ts.candidates(k, w0, prune):
        count += 1
        if ts.holds(w0, others):
            return others, count
    return None, count


# ---------------------------------------------------------------------------
# full search over serial relations


class _FullSearch:
    def __init__(self, prob: _Problem):
        self.prob = prob

    def models(self, k: int, prune: bool):
        prob = self.prob
        names = tuple(f"w{j}" for j in range(k))
        a = len(prob.atoms)
        succs = range(1, 1 << k)
        perms = [p for p in itertools.permutations(range(1, k))] if prune and k > 1 else []
        for vals in itertools.product(range(1 << a), repeat=k):
            for rel_flat in itertools.product(succs, repeat=k * prob.n_agents):
                if prune and perms and not self._least(vals, rel_flat, k, perms):
                    continue
                rel = tuple(tuple(rel_flat[i * k:(i + 1) * k]) for i in range(prob.n_agents))
                val = {name: sum(1 << j for j in range(k) if vals[j] >> t & 1) for t, name in enumerate(prob.atoms)}
                yield KripkeModel(names, prob.n_agents, rel, val)

    def _least(self, vals, rel_flat, k, perms) -> bool:
        key = (vals, rel_flat)
        for p in perms:
            mapping = (0,) + p
            if self._permuted(vals, rel_flat, k, mapping) < key:
                return False
        return True

    def _permuted(self, vals, rel_flat, k, mapping):
        inv = [0] * k
        for old, new in enumerate(mapping):
            inv[new] = old
        nvals = tuple(vals[inv[j]] for j in range(k))
        out = []
        for i in range(self.prob.n_agents):
            row = rel_flat[i * k:(i + 1) * k]
            for j in range(k):
                succ = row[inv[j]]
                moved = 0
                for b in range(k):
                    if succ >> b & 1:
                        moved |= 1 << mapping[b]
                out.append(moved)
        return nvals, tuple(out)


# ---------------------------------------------------------------------------
# public API


def _search(prob: _Problem, budget: SearchBudget) -> SearchResult:
    depth_one = modal_depth(prob.target) <= 1 and all(modal_depth(g) == 0 for g in prob.global_)
    examined = 0
    threads = _threads(budget)
    for k in range(1, budget.max_worlds + 1):
        if depth_one:
            ts = _TypeSearch(prob)
            jobs = [(prob, k, w0, budget.prune) for w0 in range(ts.n_types)]
            if threads > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(_type_partition, jobs))
            else:
                results = []
                for job in jobs:
                    r = _type_partition(job)
                    results.append(r)
                    if r[0] is not None:
                        break
            for (others, count), job in zip(results, jobs):
                examined += count
                if others is not None:
                    model = ts.build(job[2], others)
                    return _confirm(prob, model, 0, k, examined)
        else:
            full = _FullSearch(prob)
            for model in full.models(k, budget.prune):
                examined += 1
                ev = Evaluator(model, prob.strategy)
                if not all(ev.valid(g) for g in prob.global_):
                    continue
                if ev.holds(0, prob.target):
                    return _confirm(prob, model, 0, k, examined)
    return SearchResult(False, budget.max_worlds, examined=examined)


def _confirm(prob: _Problem, model: KripkeModel, world: int, bound: int, examined: int) -> SearchResult:
    ev = Evaluator(model, prob.strategy)
    if not ev.holds(world, prob.target) or not all(ev.valid(g) for g in prob.global_):
        raise AssertionError("internal error: countermodel failed re-checking")
    return SearchResult(True, bound, model, model.worlds[world], examined)


def find_countermodel(phi: Wff, strategy=Strategy.CUTTING, budget: SearchBudget | int = 3) -> SearchResult:
    """Smallest model (up to the bound) with a world falsifying ``phi``."""
    if isinstance(budget, int):
        budget = SearchBudget(budget)
    return _search(_setup([], phi, [], strategy, budget), budget)


def check_entailment_bounded(
    premises: Iterable[Wff],
    conclusion: Wff,
    strategy=Strategy.CUTTING,
    budget: SearchBudget | int = 3,
    global_premises: Iterable[Wff] = (),
) -> SearchResult:
    """Search for a world satisfying the premises but not the conclusion.

    ``global_premises`` must hold at every world of the countermodel.
    """
    if isinstance(budget, int):
        budget = SearchBudget(budget)
    prob = _setup(list(premises), conclusion, list(global_premises), strategy, budget)
    return _search(prob, budget)


def describe(result: SearchResult) -> str:
    if not result.found:
        return result.message
    return result.message + "\n" + save_model(result.model)


__all__ = [
    "SearchBudget",
    "SearchError",
    "SearchResult",
    "check_entailment_bounded",
    "describe",
    "find_countermodel",
]
