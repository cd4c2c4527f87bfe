"""Finite multi-agent Kripke models and their text format.

Worlds are referenced internally by position; sets of worlds are int bitmasks
(bit ``k`` stands for world ``k``).  Optional data supports the metric-based
operators: a distance between worlds and explicit ranking blocks that
override the distance-derived default pre-orders.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Mapping, Sequence

from . import boolean
from .formula import Wff, atoms as wff_atoms, render as render_wff


class ModelError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class KripkeModel:
    worlds: tuple
    n_agents: int
    rel: tuple  # rel[i - 1][w] = bitmask of R_i(w)
    val: Mapping  # atom -> bitmask
    metric: tuple | None = None  # metric[w][v]
    arb_ranks: Mapping = field(default_factory=dict)  # index mask -> {set mask: rank}
    rev_ranks: Mapping = field(default_factory=dict)  # state mask -> rank per world
    ic_ranks: Mapping = field(default_factory=dict)  # sorted tuple of masks -> rank per world

    def __post_init__(self):
        n = len(self.worlds)
        if n == 0:
            raise ModelError("a model needs at least one world")
        if len(set(self.worlds)) != n:
            raise ModelError("duplicate world names")
        if len(self.rel) != self.n_agents:
            raise ModelError(f"expected relations for {self.n_agents} agents, got {len(self.rel)}")
        full = (1 << n) - 1
        for i, r in enumerate(self.rel, start=1):
            if len(r) != n:
                raise ModelError(f"relation of agent {i} has wrong arity")
            for w, succ in enumerate(r):
                if succ & ~full:
                    raise ModelError(f"agent {i} relates {self.worlds[w]} to unknown worlds")
                if not succ:
                    raise ModelError(f"agent {i} not serial at {self.worlds[w]}")
        for a, mask in self.val.items():
            if mask & ~full:
                raise ModelError(f"valuation of {a} mentions unknown worlds")
        if self.metric is not None:
            check_metric(self.metric, self.worlds)
        for rank_map in list(self.rev_ranks.values()) + list(self.ic_ranks.values()):
            if len(rank_map) != n:
                raise ModelError("rank block must rank every world")

    # convenience -----------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.worlds)

    @property
    def full(self) -> int:
        return (1 << len(self.worlds)) - 1

    @property
    def atoms(self) -> tuple:
        return tuple(sorted(self.val))

    def index(self, world) -> int:
        if isinstance(world, int):
            return world
        try:
            return self.worlds.index(world)
        except ValueError:
            raise ModelError(f"unknown world {world!r}") from None

    def mask(self, names: Iterable) -> int:
        out = 0
        for x in names:
            out |= 1 << self.index(x)
        return out

    def names(self, mask: int) -> frozenset:
        return frozenset(self.worlds[k] for k in boolean.bits(mask))

    def succ(self, agent: int, world: int) -> int:
        if not 1 <= agent <= self.n_agents:
            raise ModelError(f"agent {agent} not in model with {self.n_agents} agents")
        return self.rel[agent - 1][world]

    def atom_mask(self, name: str) -> int:
        return self.val.get(name, 0)


def check_metric(metric: Sequence[Sequence[float]], worlds: Sequence[str]) -> None:
    n = len(worlds)
    if len(metric) != n or any(len(row) != n for row in metric):
        raise ModelError("metric must be total over worlds")
    for a in range(n):
        if metric[a][a] != 0:
            raise ModelError(f"metric nonzero on diagonal at {worlds[a]}")
        for b in range(n):
            if metric[a][b] != metric[b][a]:
                raise ModelError(f"metric not symmetric between {worlds[a]} and {worlds[b]}")
            if metric[a][b] < 0:
                raise ModelError(f"negative distance between {worlds[a]} and {worlds[b]}")


# ---------------------------------------------------------------------------
# assignment models


def signature(true_atoms: frozenset, atom_order: Sequence[str]) -> str:
    if not atom_order:
        return "w0"
    return "".join(a if a in true_atoms else "~" + a for a in atom_order)


def assignment_model(atom_set: Iterable[str], dbs: Sequence[Iterable[Wff]], metric: bool = True) -> KripkeModel:
    """Worlds are all truth assignments; agent ``i`` reaches the models of ``dbs[i-1]``.

    The Hamming metric is attached by default.
    """
    order = sorted(set(atom_set))
    for db in dbs:
        for w in db:
            extra = wff_atoms(w) - set(order)
            if extra:
                raise ModelError(f"{render_wff(w)} uses atoms outside the assignment space: {sorted(extra)}")
    if len(order) > 12:
        raise ModelError("assignment models are limited to 12 atoms")
    n = 1 << len(order)
    worlds = tuple(signature(boolean.interpretation(k, order), order) for k in range(n))
    rel = []
    for i, db in enumerate(dbs, start=1):
        mods = boolean.models(list(db), order)
        if not mods:
            raise ModelError(f"database {i} is unsatisfiable")
        rel.append((mods,) * n)
    val = {a: sum(1 << k for k in range(n) if k >> j & 1) for j, a in enumerate(order)}
    met = None
    if metric:
        met = tuple(tuple(float(boolean.popcount(a ^ b)) for b in range(n)) for a in range(n))
    return KripkeModel(worlds, len(dbs), tuple(rel), val, met)


def dalal_metric(m: KripkeModel) -> tuple:
    """Hamming distance between the assignments worlds carry."""
    order = m.atoms
    sigs = []
    for k in range(m.size):
        sigs.append(sum(1 << j for j, a in enumerate(order) if m.val[a] >> k & 1))
    if len(set(sigs)) != len(sigs):
        raise ModelError("worlds do not carry distinct assignments")
    return tuple(tuple(float(boolean.popcount(a ^ b)) for b in sigs) for a in sigs)


def with_metric(m: KripkeModel, metric) -> KripkeModel:
    return KripkeModel(m.worlds, m.n_agents, m.rel, m.val, tuple(map(tuple, metric)), m.arb_ranks, m.rev_ranks, m.ic_ranks)


def replace(m: KripkeModel, **changes) -> KripkeModel:
    data = dict(
        worlds=m.worlds,
        n_agents=m.n_agents,
        rel=m.rel,
        val=m.val,
        metric=m.metric,
        arb_ranks=m.arb_ranks,
        rev_ranks=m.rev_ranks,
        ic_ranks=m.ic_ranks,
    )
    data.update(changes)
    return KripkeModel(**data)


def random_model(
    rng: random.Random,
    n_worlds: int,
    n_agents: int,
    atom_names: Sequence[str],
    density: float = 0.4,
    metric: str | None = None,
) -> KripkeModel:
    """A random model; ``metric`` may be None, 'hamming' (random distinct assignments) or 'random'."""
    worlds = tuple(f"w{k}" for k in range(n_worlds))
    full = (1 << n_worlds) - 1
    rel = []
    for _ in range(n_agents):
        row = []
        for _w in range(n_worlds):
            succ = sum(1 << v for v in range(n_worlds) if rng.random() < density)
            row.append(succ or 1 << rng.randrange(n_worlds))
        rel.append(tuple(row))
    val = {a: rng.getrandbits(n_worlds) & full for a in atom_names}
    met = None
    if metric == "random":
        d = [[0.0] * n_worlds for _ in range(n_worlds)]
        for a in range(n_worlds):
            for b in range(a + 1, n_worlds):
                d[a][b] = d[b][a] = float(rng.randint(1, 4))
        met = tuple(map(tuple, d))
    elif metric == "hamming":
        # give worlds distinct assignments so the Hamming distance is a metric
        if (1 << len(atom_names)) < n_worlds:
            raise ModelError("not enough atoms for distinct assignments")
        sigs = rng.sample(range(1 << len(atom_names)), n_worlds)
        val = {a: sum(1 << k for k, s in enumerate(sigs) if s >> j & 1) for j, a in enumerate(atom_names)}
        met = tuple(tuple(float(boolean.popcount(a ^ b)) for b in sigs) for a in sigs)
    return KripkeModel(worlds, n_agents, tuple(rel), val, met)


# ---------------------------------------------------------------------------
# text format

_NAME = re.compile(r"[^\s{},:;=>|]+")


def _strip_comment(line: str) -> str:
    k = line.find(";")
    return (line if k < 0 else line[:k]).strip()


def _number(text: str, lineno: int) -> float:
    try:
        return float(Decimal(text))
    except InvalidOperation:
        raise ModelError(f"line {lineno}: bad number {text!r}") from None


def _state(text: str, names: dict, lineno: int) -> int:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ModelError(f"line {lineno}: expected a world set in braces, got {text!r}")
    out = 0
    for w in filter(None, (x.strip() for x in text[1:-1].split(","))):
        if w not in names:
            raise ModelError(f"line {lineno}: unknown world {w!r}")
        out |= 1 << names[w]
    return out


def load_model(text: str) -> KripkeModel:
    """Parse and validate a model; invalid input raises ModelError."""
    n_agents = None
    worlds: list = []
    declared_atoms: list = []
    vals: dict = {}
    edges: dict = {}
    metric_pairs: dict = {}
    dalal = False
    arb: dict = {}
    rev: dict = {}
    ic: dict = {}
    names: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelError(f"line {lineno}: missing ':'")
        words = head.split()
        key = words[0] if words else ""
        if key == "agents" and len(words) == 1:
            try:
                n_agents = int(rest)
            except ValueError:
                raise ModelError(f"line {lineno}: bad agent count") from None
            if n_agents < 1:
                raise ModelError(f"line {lineno}: need at least one agent")
        elif key == "worlds" and len(words) == 1:
            worlds = rest.split()
            for w in worlds:
                if not _NAME.fullmatch(w):
                    raise ModelError(f"line {lineno}: bad world name {w!r}")
            names = {w: k for k, w in enumerate(worlds)}
            if len(names) != len(worlds):
                raise ModelError(f"line {lineno}: duplicate world names")
        elif key == "atoms" and len(words) == 1:
            declared_atoms = rest.split()
        elif key == "val" and len(words) == 2:
            w = words[1]
            if w not in names:
                raise ModelError(f"line {lineno}: unknown world {w!r}")
            vals[w] = rest.split()
        elif key == "rel" and len(words) == 2:
            try:
                agent = int(words[1])
            except ValueError:
                raise ModelError(f"line {lineno}: bad agent {words[1]!r}") from None
            for e in rest.split():
                a, gt, b = e.partition(">")
                if not gt or a not in names or b not in names:
                    raise ModelError(f"line {lineno}: bad edge {e!r}")
                edges.setdefault(agent, set()).add((names[a], names[b]))
        elif key == "metric" and len(words) == 1 and rest.strip() == "dalal":
            dalal = True
        elif key == "metric" and len(words) == 3:
            a, b = words[1], words[2]
            if a not in names or b not in names:
                raise ModelError(f"line {lineno}: unknown world in metric")
            metric_pairs[(names[a], names[b])] = _number(rest.strip(), lineno)
        elif key == "rank" and len(words) >= 2:
            kind = words[1]
            spec = head.split(None, 2)[2] if len(words) > 2 else ""
            entries = _rank_entries(rest, names, lineno)
            if kind == "arb":
                arb[_state(spec, names, lineno)] = entries
            elif kind == "rev":
                rev[_state(spec, names, lineno)] = _world_ranks(entries, len(worlds), lineno)
            elif kind == "ic":
                states = tuple(sorted(_state(s, names, lineno) for s in spec.split("|")))
                ic[states] = _world_ranks(entries, len(worlds), lineno)
            else:
                raise ModelError(f"line {lineno}: unknown rank kind {kind!r}")
        else:
            raise ModelError(f"line {lineno}: unrecognised directive {head!r}")
    if n_agents is None:
        raise ModelError("missing 'agents:' line")
    if not worlds:
        raise ModelError("missing 'worlds:' line")
    atom_list = list(dict.fromkeys(declared_atoms + [a for v in vals.values() for a in v]))
    if declared_atoms:
        undeclared = set(atom_list) - set(declared_atoms)
        if undeclared:
            raise ModelError(f"atoms used but not declared: {sorted(undeclared)}")
    val = {a: 0 for a in atom_list}
    for w, true_atoms in vals.items():
        for a in true_atoms:
            val[a] |= 1 << names[w]
    for agent in edges:
        if not 1 <= agent <= n_agents:
            raise ModelError(f"edges for agent {agent} outside 1..{n_agents}")
    rel = []
    for i in range(1, n_agents + 1):
        row = [0] * len(worlds)
        for a, b in edges.get(i, ()):
            row[a] |= 1 << b
        rel.append(tuple(row))
    metric = None
    if metric_pairs:
        n = len(worlds)
        d = [[None] * n for _ in range(n)]
        for k in range(n):
            d[k][k] = 0.0
        for (a, b), x in metric_pairs.items():
            if a == b and x != 0:
                raise ModelError(f"metric nonzero on diagonal at {worlds[a]}")
            d[a][b] = x
        for (a, b), x in metric_pairs.items():
            if (b, a) in metric_pairs and metric_pairs[(b, a)] != x:
                raise ModelError(f"metric not symmetric between {worlds[a]} and {worlds[b]}")
            d[b][a] = x
        for a in range(n):
            for b in range(n):
                if d[a][b] is None:
                    raise ModelError(f"metric missing distance between {worlds[a]} and {worlds[b]}")
        metric = tuple(map(tuple, d))
    m = KripkeModel(tuple(worlds), n_agents, tuple(rel), val, metric, arb, rev, ic)
    if dalal:
        if metric is not None:
            raise ModelError("both 'metric: dalal' and explicit distances given")
        m = with_metric(m, dalal_metric(m))
    from .orders import validate_supplied_orders  # local import: orders depends on this module

    problems = validate_supplied_orders(m)
    if problems:
        raise ModelError(problems[0])
    return m


def _rank_entries(text: str, names: dict, lineno: int) -> dict:
    out = {}
    for key, val in re.findall(r"(\{[^}]*\}|[^\s=]+)\s*=\s*([^\s]+)", text):
        mask = _state(key, names, lineno) if key.startswith("{") else None
        if mask is None:
            if key not in names:
                raise ModelError(f"line {lineno}: unknown world {key!r}")
            mask = 1 << names[key]
        out[mask] = _number(val, lineno)
    leftover = re.sub(r"(\{[^}]*\}|[^\s=]+)\s*=\s*([^\s]+)", "", text).strip()
    if leftover:
        raise ModelError(f"line {lineno}: cannot read rank entries {leftover!r}")
    return out


def _world_ranks(entries: dict, n: int, lineno: int) -> tuple:
    ranks = [None] * n
    for mask, r in entries.items():
        if mask & (mask - 1):
            raise ModelError(f"line {lineno}: state orders rank single worlds")
        ranks[mask.bit_length() - 1] = r
    if None in ranks:
        raise ModelError(f"line {lineno}: rank block must rank every world")
    return tuple(ranks)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def save_model(m: KripkeModel) -> str:
    def st(mask):
        return "{" + ",".join(m.worlds[k] for k in boolean.bits(mask)) + "}"

    lines = [f"agents: {m.n_agents}", "worlds: " + " ".join(m.worlds), "atoms: " + " ".join(m.atoms)]
    for k, w in enumerate(m.worlds):
        lines.append(f"val {w}: " + " ".join(a for a in m.atoms if m.val[a] >> k & 1))
    for i, row in enumerate(m.rel, start=1):
        es = [f"{m.worlds[a]}>{m.worlds[b]}" for a, succ in enumerate(row) for b in boolean.bits(succ)]
        lines.append(f"rel {i}: " + " ".join(es))
    if m.metric is not None:
        if m.size == 1:
            # no pairs to list; keep the (trivial) metric visible
            lines.append(f"metric {m.worlds[0]} {m.worlds[0]}: 0")
        for a in range(m.size):
            for b in range(a + 1, m.size):
                lines.append(f"metric {m.worlds[a]} {m.worlds[b]}: {_fmt(m.metric[a][b])}")
    for idx, entries in m.arb_ranks.items():
        body = " ".join(
            (m.worlds[s.bit_length() - 1] if s and not s & (s - 1) else st(s)) + "=" + _fmt(r)
            for s, r in entries.items()
        )
        lines.append(f"rank arb {st(idx)}: {body}")
    for state, ranks in m.rev_ranks.items():
        lines.append(f"rank rev {st(state)}: " + " ".join(f"{w}={_fmt(r)}" for w, r in zip(m.worlds, ranks)))
    for states, ranks in m.ic_ranks.items():
        spec = "|".join(st(s) for s in states)
        lines.append(f"rank ic {spec}: " + " ".join(f"{w}={_fmt(r)}" for w, r in zip(m.worlds, ranks)))
    return "\n".join(lines) + "\n"
