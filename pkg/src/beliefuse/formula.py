"""Wff syntax: immutable AST, canonical forms, parser and renderer.

Modal boxes carry an index describing whose beliefs are combined and how.
Every index kind is a frozen dataclass, so wffs hash structurally and can be
used as dictionary keys throughout the evaluators and the proof checker.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Iterator, Union


# ---------------------------------------------------------------------------
# wffs


def _memo_hash(cls):
    """Cache the structural hash; wffs are hashed constantly by the evaluators."""
    structural = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = structural(self)
            object.__setattr__(self, "_hash", h)
        return h

    def __getstate__(self):
        # string hashes differ between processes, so never ship the cache
        return {k: v for k, v in self.__dict__.items() if k != "_hash"}

    cls.__hash__ = __hash__
    cls.__getstate__ = __getstate__
    return cls


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@_memo_hash
@dataclass(frozen=True)
class Not:
    arg: "Wff"


@_memo_hash
@dataclass(frozen=True)
class And:
    left: "Wff"
    right: "Wff"


@_memo_hash
@dataclass(frozen=True)
class Or:
    left: "Wff"
    right: "Wff"


@_memo_hash
@dataclass(frozen=True)
class Implies:
    left: "Wff"
    right: "Wff"


@_memo_hash
@dataclass(frozen=True)
class Iff:
    left: "Wff"
    right: "Wff"


@_memo_hash
@dataclass(frozen=True)
class Box:
    index: "Index"
    body: "Wff"


TOP = Top()
BOT = Bottom()

# ---------------------------------------------------------------------------
# modal indices


@_memo_hash
@dataclass(frozen=True)
class Group:
    """Plain pooling of a set of agents (a single agent is a one-element group)."""

    agents: frozenset


@_memo_hash
@dataclass(frozen=True)
class Order:
    """Priority sequence of distinct agents, most trusted first."""

    agents: tuple


@_memo_hash
@dataclass(frozen=True)
class OrderSet:
    orders: frozenset


@_memo_hash
@dataclass(frozen=True)
class Partial:
    """Strict partial priority order given by a carrier and generating pairs."""

    carrier: frozenset
    pairs: frozenset


@_memo_hash
@dataclass(frozen=True)
class MajMerge:
    weights: tuple  # sorted ((agent, weight), ...)

    @property
    def agents(self) -> frozenset:
        return frozenset(i for i, _ in self.weights)


@dataclass(frozen=True)
class Graded:
    group: frozenset
    threshold: Decimal


@dataclass(frozen=True)
class ArbLeaf:
    agent: int


@_memo_hash
@dataclass(frozen=True)
class ArbNode:
    op: str  # '+', '.', '^'
    left: "ArbExpr"
    right: "ArbExpr"


ArbExpr = Union[ArbLeaf, ArbNode]


@_memo_hash
@dataclass(frozen=True)
class Arb:
    expr: ArbExpr


@_memo_hash
@dataclass(frozen=True)
class ICMerge:
    constraint: "Wff"
    group: frozenset


@_memo_hash
@dataclass(frozen=True)
class Rev:
    head: int
    steps: tuple  # each an int agent or a Wff


Index = Union[Group, Order, OrderSet, Partial, MajMerge, Graded, Arb, ICMerge, Rev]
Wff = Union[Atom, Top, Bottom, Not, And, Or, Implies, Iff, Box]

BINARY = (And, Or, Implies, Iff)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        exp = ""
        if self.expected:
            exp = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{line}:{col}: {message}{exp}")


# ---------------------------------------------------------------------------
# small constructors


def atom(name: str) -> Atom:
    return Atom(name)


def group(*agents: int) -> Group:
    return Group(frozenset(agents))


def order(*agents: int) -> Index:
    return canonical_index(Order(tuple(agents)))


def orders_of(index: Index) -> frozenset:
    """View a Group/Order/OrderSet as a set of priority sequences."""
    if isinstance(index, Group):
        return frozenset((i,) for i in index.agents)
    if isinstance(index, Order):
        return frozenset([index.agents])
    if isinstance(index, OrderSet):
        return index.orders
    raise TypeError(f"not an order-set index: {index!r}")


def index_from_orders(orders: Iterable[tuple]) -> Index:
    return canonical_index(OrderSet(frozenset(tuple(o) for o in orders)))


def conj(items: Iterable[Wff]) -> Wff:
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for x in items[1:]:
        out = And(out, x)
    return out


def disj(items: Iterable[Wff]) -> Wff:
    items = list(items)
    if not items:
        return BOT
    out = items[0]
    for x in items[1:]:
        out = Or(out, x)
    return out


def delta(index: Index) -> frozenset:
    """Agents mentioned by a Group/Order/OrderSet index."""
    return frozenset(itertools.chain.from_iterable(orders_of(index)))


# ---------------------------------------------------------------------------
# canonical forms


def canonical_index(index: Index) -> Index:
    if isinstance(index, Group):
        if not index.agents:
            raise ValueError("empty group index")
        return index
    if isinstance(index, Order):
        if len(set(index.agents)) != len(index.agents) or not index.agents:
            raise ValueError(f"order must list distinct agents: {index.agents}")
        if len(index.agents) == 1:
            return Group(frozenset(index.agents))
        return index
    if isinstance(index, OrderSet):
        if not index.orders:
            raise ValueError("empty order set")
        for o in index.orders:
            canonical_index(Order(tuple(o)))
        if all(len(o) == 1 for o in index.orders):
            return Group(frozenset(o[0] for o in index.orders))
        if len(index.orders) == 1:
            (o,) = index.orders
            return Order(tuple(o))
        return index
    if isinstance(index, Arb):
        if isinstance(index.expr, ArbLeaf):
            return Group(frozenset([index.expr.agent]))
        return index
    if isinstance(index, ICMerge):
        if not index.group:
            raise ValueError("empty IC group")
        return ICMerge(canonical(index.constraint), index.group)
    if isinstance(index, Rev):
        if not index.steps:
            return Group(frozenset([index.head]))
        steps = tuple(s if isinstance(s, int) else canonical(s) for s in index.steps)
        return Rev(index.head, steps)
    return index


def canonical(w: Wff) -> Wff:
    if isinstance(w, (Atom, Top, Bottom)):
        return w
    if isinstance(w, Not):
        return Not(canonical(w.arg))
    if isinstance(w, BINARY):
        return type(w)(canonical(w.left), canonical(w.right))
    if isinstance(w, Box):
        return Box(canonical_index(w.index), canonical(w.body))
    raise TypeError(f"not a wff: {w!r}")


# ---------------------------------------------------------------------------
# traversal


def children(w: Wff) -> tuple:
    if isinstance(w, Not):
        return (w.arg,)
    if isinstance(w, BINARY):
        return (w.left, w.right)
    if isinstance(w, Box):
        return index_wffs(w.index) + (w.body,)
    return ()


def index_wffs(index: Index) -> tuple:
    if isinstance(index, ICMerge):
        return (index.constraint,)
    if isinstance(index, Rev):
        return tuple(s for s in index.steps if not isinstance(s, int))
    return ()


def subformulas(w: Wff) -> list:
    """Distinct subformulas in pre-order; constraint wffs inside indices are included."""
    seen: dict = {}
    stack = [w]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen[x] = None
        stack.extend(reversed(children(x)))
    return list(seen)


def atoms(w: Wff) -> frozenset:
    return frozenset(x.name for x in subformulas(w) if isinstance(x, Atom))


def index_agents(index: Index) -> frozenset:
    if isinstance(index, Group):
        return index.agents
    if isinstance(index, (Order, OrderSet)):
        return delta(index)
    if isinstance(index, Partial):
        return index.carrier
    if isinstance(index, MajMerge):
        return index.agents
    if isinstance(index, Graded):
        return index.group
    if isinstance(index, Arb):
        return frozenset(_arb_leaves(index.expr))
    if isinstance(index, ICMerge):
        return index.group
    if isinstance(index, Rev):
        return frozenset([index.head] + [s for s in index.steps if isinstance(s, int)])
    raise TypeError(index)


def _arb_leaves(e: ArbExpr) -> Iterator[int]:
    if isinstance(e, ArbLeaf):
        yield e.agent
    else:
        yield from _arb_leaves(e.left)
        yield from _arb_leaves(e.right)


def agents(w: Wff) -> frozenset:
    out: set = set()
    for x in subformulas(w):
        if isinstance(x, Box):
            out |= index_agents(x.index)
    return frozenset(out)


def modal_depth(w: Wff) -> int:
    if isinstance(w, (Atom, Top, Bottom)):
        return 0
    if isinstance(w, Box):
        extra = [modal_depth(c) for c in index_wffs(w.index)]
        return max([1 + modal_depth(w.body)] + extra)
    return max(modal_depth(c) for c in children(w))


def boxes(w: Wff) -> list:
    """Maximal boxed subformulas (those not nested inside another box)."""
    out: dict = {}

    def walk(x):
        if isinstance(x, Box):
            out[x] = None
        else:
            for c in children(x):
                walk(c)

    walk(w)
    return list(out)


def substitute(w: Wff, mapping: dict) -> Wff:
    """Uniform substitution of wffs for atom names (also inside index wffs)."""
    if isinstance(w, Atom):
        return mapping.get(w.name, w)
    if isinstance(w, (Top, Bottom)):
        return w
    if isinstance(w, Not):
        return Not(substitute(w.arg, mapping))
    if isinstance(w, BINARY):
        return type(w)(substitute(w.left, mapping), substitute(w.right, mapping))
    idx = w.index
    if isinstance(idx, ICMerge):
        idx = ICMerge(substitute(idx.constraint, mapping), idx.group)
    elif isinstance(idx, Rev):
        idx = Rev(idx.head, tuple(s if isinstance(s, int) else substitute(s, mapping) for s in idx.steps))
    return Box(idx, substitute(w.body, mapping))


# ---------------------------------------------------------------------------
# partial orders


def linear_extensions(q: Partial) -> list:
    """All linear extensions of a strict partial order, in lexicographic order."""
    carrier = sorted(q.carrier)
    for a, b in q.pairs:
        if a not in q.carrier or b not in q.carrier:
            raise ValueError(f"pair {a}>{b} outside carrier")
    above = {i: {a for a, b in q.pairs if b == i} for i in carrier}
    out = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        for i in sorted(remaining):
            if above[i] <= set(prefix):
                prefix.append(i)
                rec(prefix, remaining - {i})
                prefix.pop()

    rec([], frozenset(carrier))
    if not out:
        raise ValueError("partial order has a cycle")
    return out


def expand_partial(w: Wff) -> Wff:
    """Replace every partial-order box by the conjunction over its linear extensions."""
    if isinstance(w, (Atom, Top, Bottom)):
        return w
    if isinstance(w, Not):
        return Not(expand_partial(w.arg))
    if isinstance(w, BINARY):
        return type(w)(expand_partial(w.left), expand_partial(w.right))
    body = expand_partial(w.body)
    if isinstance(w.index, Partial):
        return conj(Box(canonical_index(Order(o)), body) for o in linear_extensions(w.index))
    return Box(w.index, body)


# ---------------------------------------------------------------------------
# lexer


_PUNCT = ["<->", "->", "~", "&", "|", "(", ")", "[", "]", "{", "}", ",", ">", "<", ":", "#", "+", ".", "^"]


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'kw', 'int', 'punct', 'eof'
    text: str
    line: int
    col: int
    pos: int


def tokenize(text: str) -> list:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start = i
        if c.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            kind = "int"
        elif "a" <= c <= "z":
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            kind = "ident"
        elif "A" <= c <= "Z":
            while i < n and text[i].isalpha():
                i += 1
            kind = "kw"
        else:
            for p in _PUNCT:
                if text.startswith(p, i):
                    i += len(p)
                    kind = "punct"
                    break
            else:
                raise ParseError(f"unexpected character {c!r}", line, col)
        toks.append(Token(kind, text[start:i], line, col, start))
        col += i - start
    toks.append(Token("eof", "", line, col, n))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def fail(self, expected, message=None):
        t = self.tok
        found = t.text or "end of input"
        raise ParseError(message or f"unexpected {found!r}", t.line, t.col, expected)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident", "kw") and t.text == text

    def eat(self, text: str) -> Token:
        if not self.at(text):
            self.fail([repr(text)])
        t = self.tok
        self.k += 1
        return t

    def int_(self) -> int:
        t = self.tok
        if t.kind != "int":
            self.fail(["INT"])
        self.k += 1
        v = int(t.text)
        if v < 1:
            raise ParseError("agent ids are positive", t.line, t.col)
        return v

    def num(self) -> Decimal:
        t = self.tok
        if t.kind != "int":
            self.fail(["NUM"])
        self.k += 1
        text = t.text
        nxt, after = self.toks[self.k], self.toks[self.k + 1]
        if nxt.text == "." and nxt.pos == t.pos + len(t.text) and after.kind == "int" and after.pos == nxt.pos + 1:
            text += "." + after.text
            self.k += 2
        return Decimal(text)

    # wff levels: iff < implies < or < and < unary
    def wff(self) -> Wff:
        left = self.implies()
        while self.at("<->"):
            self.k += 1
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Wff:
        left = self.or_()
        if self.at("->"):
            self.k += 1
            return Implies(left, self.implies())
        return left

    def or_(self) -> Wff:
        left = self.and_()
        while self.at("|"):
            self.k += 1
            left = Or(left, self.and_())
        return left

    def and_(self) -> Wff:
        left = self.unary()
        while self.at("&"):
            self.k += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Wff:
        t = self.tok
        if self.at("~"):
            self.k += 1
            return Not(self.unary())
        if self.at("["):
            self.k += 1
            idx = self.index()
            self.eat("]")
            try:
                idx = canonical_index(idx)
            except ValueError as e:
                raise ParseError(str(e), t.line, t.col) from None
            return Box(idx, self.unary())
        return self.primary()

    def primary(self) -> Wff:
        t = self.tok
        if t.kind == "ident":
            self.k += 1
            if t.text == "true":
                return TOP
            if t.text == "false":
                return BOT
            return Atom(t.text)
        if self.at("("):
            self.k += 1
            w = self.wff()
            self.eat(")")
            return w
        self.fail(["IDENT", "'true'", "'false'", "'('", "'~'", "'['"])

    # indices
    def index(self) -> Index:
        t = self.tok
        if t.kind == "int":
            seq = self.chain()
            return Order(tuple(seq)) if len(seq) > 1 else Group(frozenset(seq))
        if self.at("{"):
            return self.brace_index()
        if t.kind == "kw":
            if t.text == "M":
                return self.majority()
            if t.text == "A":
                self.k += 1
                self.eat("(")
                e = self.arb()
                self.eat(")")
                return Arb(e)
            if t.text == "IC":
                self.k += 1
                self.eat("<")
                c = self.wff()
                self.eat(">")
                return ICMerge(c, self.group_list())
            if t.text == "R":
                return self.revision()
            if t.text == "Q":
                return self.partial()
        self.fail(["INT", "'{'", "'M'", "'A'", "'IC'", "'R'", "'Q'"])

    def chain(self) -> list:
        t = self.tok
        seq = [self.int_()]
        while self.at(">"):
            self.k += 1
            seq.append(self.int_())
        if len(set(seq)) != len(seq):
            raise ParseError("repeated agent in order", t.line, t.col)
        return seq

    def group_list(self) -> frozenset:
        self.eat("{")
        items = [self.int_()]
        while self.at(","):
            self.k += 1
            items.append(self.int_())
        self.eat("}")
        return frozenset(items)

    def brace_index(self) -> Index:
        self.eat("{")
        items = [tuple(self.chain())]
        while self.at(","):
            self.k += 1
            items.append(tuple(self.chain()))
        self.eat("}")
        if self.at("#"):
            t = self.tok
            self.k += 1
            if any(len(o) > 1 for o in items):
                raise ParseError("graded index needs a plain group", t.line, t.col)
            r = self.num()
            if not (0 <= r < 1):
                raise ParseError("threshold must lie in [0,1)", t.line, t.col)
            return Graded(frozenset(o[0] for o in items), r)
        return OrderSet(frozenset(items))

    def majority(self) -> Index:
        t = self.tok
        self.k += 1
        self.eat("{")
        pairs = {}
        while True:
            i = self.int_()
            self.eat(":")
            w = self.num()
            if w <= 0:
                raise ParseError("weights must be positive", t.line, t.col)
            if i in pairs:
                raise ParseError("repeated agent in weights", t.line, t.col)
            pairs[i] = float(w)
            if not self.at(","):
                break
            self.k += 1
        self.eat("}")
        return MajMerge(tuple(sorted(pairs.items())))

    def arb(self) -> ArbExpr:
        left = self.arb_mul()
        while self.at("^"):
            self.k += 1
            left = ArbNode("^", left, self.arb_mul())
        return left

    def arb_mul(self) -> ArbExpr:
        left = self.arb_atom()
        while self.at("+") or self.at("."):
            op = self.tok.text
            self.k += 1
            left = ArbNode(op, left, self.arb_atom())
        return left

    def arb_atom(self) -> ArbExpr:
        if self.at("("):
            self.k += 1
            e = self.arb()
            self.eat(")")
            return e
        if self.tok.kind == "int":
            return ArbLeaf(self.int_())
        self.fail(["INT", "'('"])

    def revision(self) -> Index:
        self.k += 1
        self.eat("(")
        head = self.int_()
        steps = []
        while self.at("o"):
            self.k += 1
            if self.at("<"):
                self.k += 1
                steps.append(self.wff())
                self.eat(">")
            else:
                steps.append(self.int_())
        self.eat(")")
        return Rev(head, tuple(steps))

    def partial(self) -> Index:
        t = self.tok
        self.k += 1
        self.eat("{")
        carrier = [self.int_()]
        while self.at(","):
            self.k += 1
            carrier.append(self.int_())
        pairs = []
        if self.at(":"):
            self.k += 1
            while True:
                a = self.int_()
                self.eat(">")
                b = self.int_()
                pairs.append((a, b))
                if not self.at(","):
                    break
                self.k += 1
        self.eat("}")
        q = Partial(frozenset(carrier), frozenset(pairs))
        try:
            linear_extensions(q)
        except ValueError as e:
            raise ParseError(str(e), t.line, t.col) from None
        return q


def parse(text: str) -> Wff:
    """Parse a wff; the result is in canonical form."""
    p = _Parser(text)
    w = p.wff()
    if p.tok.kind != "eof":
        p.fail(["end of input", "'&'", "'|'", "'->'", "'<->'"])
    return canonical(w)


def parse_index(text: str) -> Index:
    """Parse a bare modal index such as ``{1>2,3}`` (brackets optional)."""
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    p = _Parser(text)
    idx = p.index()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return canonical_index(idx)


# ---------------------------------------------------------------------------
# renderer

_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _level(w: Wff) -> int:
    return _LEVEL.get(type(w), 5 if isinstance(w, (Not, Box)) else 6)


def _num(x) -> str:
    d = x if isinstance(x, Decimal) else Decimal(repr(float(x)))
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s or "0"


def _chain(o) -> str:
    return ">".join(str(i) for i in o)


def render_index(idx: Index) -> str:
    if isinstance(idx, Group):
        ags = sorted(idx.agents)
        return str(ags[0]) if len(ags) == 1 else "{" + ",".join(map(str, ags)) + "}"
    if isinstance(idx, Order):
        return _chain(idx.agents)
    if isinstance(idx, OrderSet):
        return "{" + ", ".join(_chain(o) for o in sorted(idx.orders)) + "}"
    if isinstance(idx, Partial):
        s = "Q{" + ",".join(map(str, sorted(idx.carrier)))
        if idx.pairs:
            s += ": " + ", ".join(f"{a}>{b}" for a, b in sorted(idx.pairs))
        return s + "}"
    if isinstance(idx, MajMerge):
        return "M{" + ",".join(f"{i}:{_num(w)}" for i, w in idx.weights) + "}"
    if isinstance(idx, Graded):
        return "{" + ",".join(map(str, sorted(idx.group))) + "}#" + _num(idx.threshold)
    if isinstance(idx, Arb):
        return "A(" + _render_arb(idx.expr) + ")"
    if isinstance(idx, ICMerge):
        return "IC<" + render(idx.constraint) + ">{" + ",".join(map(str, sorted(idx.group))) + "}"
    if isinstance(idx, Rev):
        parts = [str(idx.head)]
        for s in idx.steps:
            parts.append(str(s) if isinstance(s, int) else "<" + render(s) + ">")
        return "R(" + " o ".join(parts) + ")"
    raise TypeError(idx)


def _render_arb(e: ArbExpr) -> str:
    if isinstance(e, ArbLeaf):
        return str(e.agent)
    left, right = _render_arb(e.left), _render_arb(e.right)
    if e.op == "^":
        if isinstance(e.right, ArbNode) and e.right.op == "^":
            right = f"({right})"
        return f"{left}^{right}"
    if isinstance(e.left, ArbNode) and e.left.op == "^":
        left = f"({left})"
    if isinstance(e.right, ArbNode):
        right = f"({right})"
    return f"{left}{e.op}{right}"


def render(w: Wff) -> str:
    if isinstance(w, Atom):
        return w.name
    if isinstance(w, Top):
        return "true"
    if isinstance(w, Bottom):
        return "false"
    if isinstance(w, Not):
        inner = render(w.arg)
        return "~" + (f"({inner})" if _level(w.arg) < 5 else inner)
    if isinstance(w, Box):
        inner = render(w.body)
        return f"[{render_index(w.index)}] " + (f"({inner})" if _level(w.body) < 5 else inner)
    lv = _LEVEL[type(w)]
    left, right = render(w.left), render(w.right)
    ll, rl = _level(w.left), _level(w.right)
    right_assoc = isinstance(w, Implies)
    if ll < lv or (ll == lv and right_assoc):
        left = f"({left})"
    if rl < lv or (rl == lv and not right_assoc):
        right = f"({right})"
    return f"{left} {_SYM[type(w)]} {right}"
