"""Database merging front end.

Databases are numbered 1..n and agent i stands for database i.  Entailment
from merged databases is decided on the assignment model, whose worlds are
all truth assignments and whose agent relations are constant: agent i
reaches exactly the models of database i.

File format (``#`` starts a comment line)::

    db 1: p ; q -> r
    wff 0.8: p
    sup: p0 <- p1:{1,2}, not p2:{2}
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Sequence

from . import boolean
from .formula import (
    BOT,
    Atom,
    Box,
    Group,
    Implies,
    Not,
    Order,
    Partial,
    ParseError,
    Wff,
    atoms as wff_atoms,
    canonical_index,
    conj,
    disj,
    expand_partial,
    modal_depth,
    parse,
    parse_index,
    render,
)
from .kripke import assignment_model
from .semantics import Evaluator, Strategy

MAX_ATOMS = 12
MAX_STRONG_ATOMS = 4


class DatabaseError(ValueError):
    pass


@dataclass(frozen=True)
class Database:
    id: int
    wffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "wffs", tuple(self.wffs))
        if self.id < 1:
            raise DatabaseError(f"database id must be positive, got {self.id}")
        if self.propositional and not boolean.satisfiable(self.wffs):
            raise DatabaseError(f"database {self.id} is unsatisfiable")

    @property
    def propositional(self) -> bool:
        return all(modal_depth(w) == 0 for w in self.wffs)

    @property
    def atoms(self) -> frozenset:
        out = frozenset()
        for w in self.wffs:
            out |= wff_atoms(w)
        return out


def database(id: int, *texts: str) -> Database:
    return Database(id, tuple(parse(t) for t in texts))


@dataclass(frozen=True)
class WeightedBase:
    items: tuple  # ((wff, Decimal weight), ...)

    def __post_init__(self):
        fixed = []
        for w, a in self.items:
            a = _weight(a)
            if not (0 < a <= 1):
                raise DatabaseError(f"weight {a} outside (0,1]")
            if modal_depth(w):
                raise DatabaseError(f"weighted wff {render(w)} must be propositional")
            fixed.append((w, a))
        object.__setattr__(self, "items", tuple(fixed))

    @property
    def levels(self) -> list:
        return sorted({a for _, a in self.items}, reverse=True)

    @property
    def atoms(self) -> tuple:
        out = set()
        for w, _ in self.items:
            out |= wff_atoms(w)
        return tuple(sorted(out))

    def layers(self) -> list:
        """One database per distinct weight, highest weight first."""
        return [[w for w, b in self.items if b == a] for a in self.levels]


def _weight(a) -> Decimal:
    if isinstance(a, Decimal):
        return a
    if isinstance(a, float):
        return Decimal(repr(a))
    try:
        return Decimal(str(a))
    except InvalidOperation:
        raise DatabaseError(f"bad weight {a!r}") from None


@dataclass(frozen=True)
class SupervisoryClause:
    head: str
    positive: tuple = ()  # ((atom, frozenset of agents or "s"), ...)
    negative: tuple = ()

    def __post_init__(self):
        for _, d in self.positive + self.negative:
            if not d:
                raise DatabaseError("supervisory clause with an empty source set")


@dataclass
class DbFile:
    databases: list = field(default_factory=list)
    weighted: list = field(default_factory=list)
    supervisory: list = field(default_factory=list)

    def base(self) -> WeightedBase:
        return WeightedBase(tuple(self.weighted))


# ---------------------------------------------------------------------------
# file format

_SUP_LIT = re.compile(r"\s*(not\s*\(?\s*)?([A-Za-z_][A-Za-z0-9_']*)\s*:\s*\{([^}]*)\}\s*\)?\s*$")


def _wff(text: str, lineno: int) -> Wff:
    try:
        return parse(text)
    except ParseError as e:
        raise DatabaseError(f"line {lineno}: {e}") from None


def parse_supervisory(text: str, lineno: int = 0) -> SupervisoryClause:
    head, _, body = text.partition("<-")
    head = head.strip()
    if ":" in head:
        head = head.split(":", 1)[0].strip()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", head):
        raise DatabaseError(f"line {lineno}: bad clause head {head!r}")
    pos, neg = [], []
    for part in filter(None, (x.strip() for x in _split_body(body))):
        m = _SUP_LIT.match(part)
        if not m:
            raise DatabaseError(f"line {lineno}: bad body literal {part!r}")
        srcs = set()
        for tok in filter(None, (x.strip() for x in m.group(3).split(","))):
            if tok == "s":
                srcs.add("s")
            elif tok.isdigit() and int(tok) > 0:
                srcs.add(int(tok))
            else:
                raise DatabaseError(f"line {lineno}: bad source {tok!r}")
        (neg if m.group(1) else pos).append((m.group(2), frozenset(srcs)))
    return SupervisoryClause(head, tuple(pos), tuple(neg))


def _split_body(body: str) -> list:
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_db_file(text: str) -> DbFile:
    out = DbFile()
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"db\s+(\d+)\s*:(.*)$", line)
        if m:
            i = int(m.group(1))
            if i in seen:
                raise DatabaseError(f"line {lineno}: database {i} given twice")
            seen.add(i)
            wffs = tuple(_wff(x, lineno) for x in m.group(2).split(";") if x.strip())
            try:
                out.databases.append(Database(i, wffs))
            except DatabaseError as e:
                raise DatabaseError(f"line {lineno}: {e}") from None
            continue
        m = re.match(r"wff\s+([0-9.]+)\s*:(.*)$", line)
        if m:
            a = _weight(m.group(1))
            if not (0 < a <= 1):
                raise DatabaseError(f"line {lineno}: weight {a} outside (0,1]")
            out.weighted.append((_wff(m.group(2), lineno), a))
            continue
        m = re.match(r"sup\s*:(.*)$", line)
        if m:
            out.supervisory.append(parse_supervisory(m.group(1), lineno))
            continue
        raise DatabaseError(f"line {lineno}: expected 'db', 'wff' or 'sup' entry")
    out.databases.sort(key=lambda d: d.id)
    return out


def format_databases(dbs: Sequence[Database]) -> str:
    return "".join(f"db {d.id}: " + " ; ".join(render(w) for w in d.wffs) + "\n" for d in dbs)


# ---------------------------------------------------------------------------
# literal databases


def is_literal(w: Wff) -> bool:
    return isinstance(w, Atom) or (isinstance(w, Not) and isinstance(w.arg, Atom))


def complement(lit: Wff) -> Wff:
    return lit.arg if isinstance(lit, Not) else Not(lit)


def _literals(db) -> frozenset:
    wffs = db.wffs if isinstance(db, Database) else tuple(db)
    for w in wffs:
        if not is_literal(w):
            name = f"database {db.id}" if isinstance(db, Database) else "database"
            raise DatabaseError(f"{name} contains non-literal wff {render(w)}")
    return frozenset(wffs)


def consistent_literals(lits: Iterable[Wff]) -> bool:
    lits = set(lits)
    return not any(complement(x) in lits for x in lits)


def merge_suspicious_pair(db1, db2) -> frozenset:
    a, b = _literals(db1), _literals(db2)
    union = a | b
    return union if consistent_literals(union) else a


def _order_tuple(o) -> tuple:
    if isinstance(o, str):
        o = parse_index(o)
    if isinstance(o, Order):
        return o.agents
    if isinstance(o, Group) and len(o.agents) == 1:
        return tuple(o.agents)
    if isinstance(o, int):
        return (o,)
    if isinstance(o, tuple):
        return o
    raise DatabaseError("a total order of database ids is required")


def merge_trusting(dbs: Sequence[Database], o) -> frozenset:
    """Left fold: keep the merged literals and add each next literal not contradicted."""
    by_id = {d.id: d for d in dbs}
    order = _order_tuple(o)
    lits = {i: _literals(by_id[i]) for i in order}
    for d in dbs:
        _literals(d)
    acc = set(lits[order[0]])
    for i in order[1:]:
        acc |= {x for x in lits[i] if complement(x) not in acc}
    return frozenset(acc)


# ---------------------------------------------------------------------------
# propositional databases


def _check_ids(dbs: Sequence[Database]) -> list:
    dbs = sorted(dbs, key=lambda d: d.id)
    if [d.id for d in dbs] != list(range(1, len(dbs) + 1)):
        raise DatabaseError("database ids must be 1..n")
    return dbs


def _atom_space(dbs, extra=()) -> list:
    names = set()
    for d in dbs:
        names |= d.atoms
    for w in extra:
        names |= wff_atoms(w)
    return sorted(names)


def _model_masks(dbs, names) -> list:
    out = []
    for d in dbs:
        if not d.propositional:
            raise DatabaseError(f"database {d.id} contains modal wffs")
        out.append(boolean.models(d.wffs, names))
    return out


def mcag(dbs: Sequence[Database]) -> list:
    """Maximal consistent agent groups, each a sorted tuple, in lexicographic order."""
    dbs = _check_ids(dbs)
    names = _atom_space(dbs)
    masks = _model_masks(dbs, names)
    full = boolean.columns(len(names))[0]
    found: list = []

    def rec(k, chosen, mods):
        if k == len(dbs):
            g = frozenset(chosen)
            if not any(g <= h for h in found):
                found.append(g)
            return
        nxt = mods & masks[k]
        if nxt:
            rec(k + 1, chosen + [k + 1], nxt)
        rec(k + 1, chosen, mods)

    rec(0, [], full)
    # depth-first with inclusion first reaches every maximal group before its subsets
    return sorted(tuple(sorted(g)) for g in found)


def is_consistent_group(dbs: Sequence[Database], group: Iterable[int]) -> bool:
    by_id = {d.id: d for d in dbs}
    wffs = [w for i in group for w in by_id[i].wffs]
    return boolean.satisfiable(wffs)


def _clauses(names) -> list:
    out = []
    for signs in itertools.product((0, 1, 2), repeat=len(names)):
        lits = [Atom(a) if s == 1 else Not(Atom(a)) for a, s in zip(names, signs) if s]
        if lits:
            out.append(disj(lits))
    return out


def build_psi(dbs: Sequence[Database], strong: bool = False, atoms: Iterable[str] | None = None) -> Wff:
    """Wff describing the databases.

    The default form conjoins [i]phi for each phi in database i with
    ~[G]false for every maximal consistent agent group G.  ``strong`` instead
    adds ~[i]c for every clause c over ``atoms`` that database i does not
    entail; it needs literal databases and at most four atoms.
    """
    dbs = _check_ids(dbs)
    parts = [Box(Group(frozenset([d.id])), w) for d in dbs for w in d.wffs]
    if not strong:
        parts += [Not(Box(Group(frozenset(g)), BOT)) for g in mcag(dbs)]
        return conj(parts)
    for d in dbs:
        _literals(d)
    names = sorted(set(atoms) if atoms is not None else _atom_space(dbs))
    if len(names) > MAX_STRONG_ATOMS:
        raise DatabaseError(f"the strong form is limited to {MAX_STRONG_ATOMS} atoms")
    clauses = _clauses(names)
    for d in dbs:
        for c in clauses:
            if not boolean.implies(d.wffs, c):
                parts.append(Not(Box(Group(frozenset([d.id])), c)))
    return conj(parts)


def _index(o):
    if isinstance(o, str):
        return canonical_index(parse_index(o))
    if isinstance(o, tuple):
        return canonical_index(Order(o))
    if isinstance(o, int):
        return Group(frozenset([o]))
    return canonical_index(o)


def entails(dbs: Sequence[Database], o, phi: Wff, strategy=Strategy.CUTTING) -> bool:
    """Whether the databases, merged along ``o``, support ``phi``."""
    dbs = _check_ids(dbs)
    if modal_depth(phi):
        raise DatabaseError("the merged-database query must be propositional")
    names = _atom_space(dbs, [phi])
    if len(names) > MAX_ATOMS:
        raise DatabaseError(f"entailment is limited to {MAX_ATOMS} atoms")
    for d in dbs:
        if not d.propositional:
            raise DatabaseError(
                f"database {d.id} contains modal wffs; use decision.check_entailment_bounded instead"
            )
    m = assignment_model(names, [d.wffs for d in dbs], metric=False)
    goal = expand_partial(Box(_index(o), phi))
    return Evaluator(m, strategy).holds(0, goal)


def merged_models(dbs: Sequence[Database], o, strategy=Strategy.CUTTING) -> list:
    """Assignments kept by merging along a total order, as sets of true atoms."""
    dbs = _check_ids(dbs)
    names = _atom_space(dbs)
    m = assignment_model(names, [d.wffs for d in dbs], metric=False)
    mask = Evaluator(m, strategy).rel(0, _index(o))
    return [boolean.interpretation(k, names) for k in boolean.bits(mask)]


@dataclass(frozen=True)
class Split:
    databases: tuple
    labels: dict  # new agent id -> "ij"
    order: Partial


def split_simulation(dbs: Sequence[Database], o) -> Split:
    """One sub-database per wff, as agents 1..N, ordered by their source databases."""
    by_id = {d.id: d for d in dbs}
    order = _order_tuple(o)
    rank = {i: k for k, i in enumerate(order)}
    subs, labels, origin = [], {}, {}
    for i in order:
        for j, w in enumerate(by_id[i].wffs, start=1):
            new = len(subs) + 1
            subs.append(Database(new, (w,)))
            labels[new] = f"{i}{j}"
            origin[new] = i
    pairs = frozenset(
        (a, b) for a in origin for b in origin if rank[origin[a]] < rank[origin[b]]
    )
    return Split(tuple(subs), labels, Partial(frozenset(origin), pairs))


def entails_split(dbs: Sequence[Database], o, phi: Wff, strategy=Strategy.CUTTING) -> bool:
    s = split_simulation(dbs, o)
    return entails(list(s.databases), s.order, phi, strategy)


# ---------------------------------------------------------------------------
# supervisory clauses


def _source_index(d: frozenset, supervisor: int) -> Group:
    return Group(frozenset(supervisor if x == "s" else x for x in d))


def translate_supervisory(c: SupervisoryClause, n_agents: int | None = None) -> Wff:
    """Translate a supervisory clause, mapping the supervisor to agent n+1."""
    if n_agents is None:
        n_agents = max((x for _, d in c.positive + c.negative for x in d if x != "s"), default=0)
    s = n_agents + 1
    body = [Box(_source_index(d, s), Atom(p)) for p, d in c.positive]
    body += [Box(_source_index(d, s), Not(Atom(p))) for p, d in c.negative]
    head = Box(Group(frozenset([s])), Atom(c.head))
    if not body:
        return head
    return Implies(conj(body), head)


# ---------------------------------------------------------------------------
# possibilistic bases


def possibility(sigma: WeightedBase, names: Sequence[str] | None = None) -> dict:
    """Least specific possibility distribution, keyed by interpretation number."""
    names = list(sigma.atoms if names is None else names)
    out = {k: Decimal(1) for k in range(1 << len(names))}
    for w, a in sigma.items:
        sat = boolean.models([w], names)
        for k in out:
            if not sat >> k & 1:
                out[k] = min(out[k], 1 - a)
    return out


def incons_by_enumeration(sigma: WeightedBase) -> Decimal:
    pi = possibility(sigma)
    return 1 - max(pi.values())


def incons_by_cuts(sigma: WeightedBase) -> Decimal:
    best = Decimal(0)
    for a in sigma.levels:
        if not boolean.satisfiable([w for w, b in sigma.items if b >= a]):
            best = max(best, a)
    return best


def incons_degree(sigma: WeightedBase) -> Decimal:
    a, b = incons_by_enumeration(sigma), incons_by_cuts(sigma)
    if a != b:
        raise AssertionError(f"inconsistency degree paths disagree: {a} vs {b}")
    return a


def necessity(sigma: WeightedBase, phi: Wff) -> Decimal:
    names = sorted(set(sigma.atoms) | wff_atoms(phi))
    pi = possibility(sigma, names)
    sat = boolean.models([phi], names)
    worst = max((v for k, v in pi.items() if not sat >> k & 1), default=Decimal(0))
    return 1 - worst


def nontrivial_by_definition(sigma: WeightedBase, phi: Wff) -> bool:
    return necessity(sigma, phi) > incons_by_enumeration(sigma)


def layer_databases(sigma: WeightedBase) -> list:
    out = []
    for i, layer in enumerate(sigma.layers(), start=1):
        if not boolean.satisfiable(layer):
            raise DatabaseError(f"weight layer {i} is inconsistent on its own")
        out.append(Database(i, tuple(layer)))
    return out


def nontrivial_consequence(sigma: WeightedBase, phi: Wff) -> bool:
    """Cutting merge of the weight layers, cross-checked against the PL1 definition."""
    dbs = layer_databases(sigma)
    if not dbs:
        return boolean.is_tautology(phi)
    got = entails(dbs, tuple(d.id for d in dbs), phi, Strategy.CUTTING)
    want = nontrivial_by_definition(sigma, phi)
    if got != want:
        raise AssertionError("layered and direct nontrivial-consequence paths disagree")
    return got


__all__ = [
    "Database",
    "DatabaseError",
    "DbFile",
    "Split",
    "SupervisoryClause",
    "WeightedBase",
    "build_psi",
    "complement",
    "database",
    "entails",
    "entails_split",
    "format_databases",
    "incons_by_cuts",
    "incons_by_enumeration",
    "incons_degree",
    "is_consistent_group",
    "is_literal",
    "layer_databases",
    "mcag",
    "merge_suspicious_pair",
    "merge_trusting",
    "merged_models",
    "necessity",
    "nontrivial_by_definition",
    "nontrivial_consequence",
    "parse_db_file",
    "parse_supervisory",
    "possibility",
    "split_simulation",
    "translate_supervisory",
]
