"""Meta-level fusion operators over finite interpretation spaces.

Interpretations are numbered as in :mod:`beliefuse.boolean`: number k makes
atom j true iff bit j of k is set, and the Dalal distance between two
interpretations is the Hamming distance of their numbers.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import boolean
from .formula import (
    BOT,
    And,
    Arb,
    ArbNode,
    Box,
    Iff,
    Implies,
    Not,
    Or,
    ParseError,
    Wff,
    atoms as wff_atoms,
    canonical_index,
    parse,
    render,
    render_index,
)
from .orders import TOL, check_arb_conditions, check_syncretic_conditions, ic_ranks
from .semantics import Evaluator, Strategy


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class Theory:
    wffs: tuple
    atoms: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "wffs", tuple(self.wffs))
        object.__setattr__(self, "atoms", tuple(sorted(set(self.atoms))))
        for w in self.wffs:
            extra = wff_atoms(w) - set(self.atoms)
            if extra:
                raise TheoryError(f"{render(w)} uses undeclared atoms {sorted(extra)}")

    @property
    def models(self) -> int:
        return boolean.models(self.wffs, self.atoms)

    @property
    def consistent(self) -> bool:
        return self.models != 0


def theory(atoms: Iterable[str], *texts: str, name: str = "") -> Theory:
    return Theory(tuple(parse(t) for t in texts), tuple(atoms), name)


def parse_theories(text: str, atoms: Iterable[str] | None = None) -> list:
    """Read ``theory <name>: <wff> ; ...`` lines over the atoms they jointly use."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"theory\s+(\S+)\s*:(.*)$", line)
        if not m:
            raise TheoryError(f"line {lineno}: expected 'theory <name>: <wff> ; ...'")
        try:
            wffs = tuple(parse(x) for x in m.group(2).split(";") if x.strip())
        except ParseError as e:
            raise TheoryError(f"line {lineno}: {e}") from None
        rows.append((m.group(1), wffs))
    names = set(atoms) if atoms is not None else set()
    if atoms is None:
        for _, wffs in rows:
            for w in wffs:
                names |= wff_atoms(w)
    return [Theory(wffs, tuple(names), name) for name, wffs in rows]


def dalal(w: int, v: int) -> int:
    return boolean.popcount(w ^ v)


def assignment_number(w, atoms: Sequence[str]) -> int:
    """Interpretation number for a set of true atoms (or pass a number through)."""
    if isinstance(w, int):
        return w
    w = set(w)
    return sum(1 << j for j, a in enumerate(atoms) if a in w)


def dist_theory(w, t: Theory) -> int:
    mods = t.models
    if not mods:
        raise TheoryError(f"theory {t.name or '?'} is inconsistent")
    w = assignment_number(w, t.atoms)
    return min(dalal(w, v) for v in boolean.bits(mods))


def _exact(weights) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in weights)


def majority_scores(e: Sequence[Theory], wt: Sequence | None = None) -> list:
    if not e:
        raise TheoryError("empty knowledge set")
    atoms = e[0].atoms
    if any(t.atoms != atoms for t in e):
        raise TheoryError("theories must share one atom set")
    wt = [1] * len(e) if wt is None else list(wt)
    if len(wt) != len(e):
        raise TheoryError("one weight per theory")
    if any(x <= 0 for x in wt):
        raise TheoryError("weights must be positive")
    size = 1 << len(atoms)
    return [sum(dist_theory(w, t) * a for t, a in zip(e, wt)) for w in range(size)]


def majority_merge(e: Sequence[Theory], wt: Sequence | None = None) -> tuple:
    """Interpretations minimising the (weighted) sum of Dalal distances, ascending."""
    scores = majority_scores(e, wt)
    best = min(scores)
    if wt is None or _exact(wt):
        return tuple(w for w, s in enumerate(scores) if s == best)
    return tuple(w for w, s in enumerate(scores) if s <= best + TOL)


def describe_models(models: Iterable[int], atoms: Sequence[str]) -> str:
    """``p`` / ``p,q`` / ``{}`` style listing, one model per comma-separated group."""
    out = []
    for k in models:
        true = [a for j, a in enumerate(atoms) if k >> j & 1]
        out.append(",".join(true) if true else "{}")
    return " | ".join(out)


# ---------------------------------------------------------------------------
# syncretic assignment audit


def sum_dalal_family(n_worlds: int, max_size: int = 2) -> list:
    """All multisets of nonempty states with at most ``max_size`` members."""
    states = range(1, 1 << n_worlds)
    out = []
    for k in range(1, max_size + 1):
        out.extend(itertools.combinations_with_replacement(states, k))
    return out


@dataclass(frozen=True)
class AuditReport:
    label: str
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list:
        head = f"{self.label}: {'PASS' if self.ok else 'FAIL'}"
        return [head] + [str(v) for v in self.violations]


def touched_states(m) -> list:
    """Distinct agent belief states R_i(u) occurring in ``m``."""
    return sorted({m.rel[i][u] for i in range(m.n_agents) for u in range(m.size)})


def audit_sum_dalal(m, family: Sequence | None = None, max_size: int = 2) -> AuditReport:
    """Audit the default sum-of-distance assignment of ``m``.

    Small models are audited on every multiset of at most ``max_size``
    states; larger ones on the belief states the model actually uses.  The
    assignment is only a candidate until this audit passes.
    """
    if family is None:
        if m.size <= 4:
            family = sum_dalal_family(m.size, max_size)
        else:
            states = touched_states(m)
            family = [(u,) for u in states] + list(itertools.combinations_with_replacement(states, 2))
    family = [tuple(sorted(u)) for u in family]
    singles = [u for u in family if len(u) == 1]
    fam = set(family)
    pairs = [(a, b) for a in singles for b in singles if tuple(sorted(a + b)) in fam]
    viol = check_syncretic_conditions(lambda u: ic_ranks(m, u), family, m.size, pairs, m.names)
    return AuditReport("candidate sum-of-distance assignment" if viol else "sum-of-distance assignment", tuple(viol))


def audit_arb_order(m, reading: str = "or") -> AuditReport:
    return AuditReport("arbitration order", tuple(check_arb_conditions(m, reading=reading)))


def limit_holds(m) -> bool:
    return not check_arb_conditions(m, conditions=("limit",))


# ---------------------------------------------------------------------------
# arbitration axioms


def _box(expr, body: Wff) -> Box:
    return Box(canonical_index(Arb(expr)), body)


def arb_axiom(k: int, a, b, phi: Wff, c=None) -> Wff:
    """Instance of arbitration axiom ``k`` (1..7) for expressions a, b (and c for 5)."""
    tri = ArbNode("^", a, b)
    plus = ArbNode("+", a, b)
    if k == 1:
        return Iff(_box(tri, phi), _box(ArbNode("^", b, a), phi))
    if k == 2:
        return Implies(_box(tri, phi), _box(plus, phi))
    if k == 3:
        return Implies(Not(_box(plus, BOT)), Implies(_box(plus, phi), _box(tri, phi)))
    if k == 4:
        return Implies(_box(tri, BOT), And(_box(a, BOT), _box(b, BOT)))
    if k == 5:
        if c is None:
            raise ValueError("axiom 5 needs a third expression")
        lhs = _box(ArbNode("^", a, ArbNode(".", b, c)), phi)
        ab = _box(ArbNode("^", a, b), phi)
        ac = _box(ArbNode("^", a, c), phi)
        both = _box(ArbNode(".", ArbNode("^", a, b), ArbNode("^", a, c)), phi)
        return Or(Or(Iff(lhs, ab), Iff(lhs, ac)), Iff(lhs, both))
    if k == 6:
        return Implies(And(_box(a, phi), _box(b, phi)), _box(tri, phi))
    if k == 7:
        return Implies(Not(_box(a, BOT)), Not(_box(ArbNode("+", a, tri), BOT)))
    raise ValueError(f"no arbitration axiom {k}")


@dataclass(frozen=True)
class AxiomFailure:
    axiom: int
    world: str
    instance: Wff

    def __str__(self):
        return f"FAIL axiom {self.axiom} at {self.world}: {render(self.instance)}"


def audit_arb_axioms(
    m,
    exprs: Sequence,
    phis: Sequence[Wff],
    axioms: Iterable[int] = range(1, 8),
    strategy=Strategy.SKIPPING,
) -> list:
    """Evaluate every axiom instance over ``exprs`` and ``phis`` at every world of ``m``."""
    ev = Evaluator(m, strategy)
    out = []
    axioms = list(axioms)
    for k in axioms:
        for a, b in itertools.product(exprs, repeat=2):
            thirds = exprs if k == 5 else [None]
            for c in thirds:
                for phi in phis if k not in (4, 7) else [BOT]:
                    inst = arb_axiom(k, a, b, phi, c)
                    bad = m.full & ~ev.ext(inst)
                    for w in boolean.bits(bad):
                        out.append(AxiomFailure(k, m.worlds[w], inst))
    return out


def arb_label(expr) -> str:
    return render_index(Arb(expr))


__all__ = [
    "AuditReport",
    "AxiomFailure",
    "Theory",
    "TheoryError",
    "arb_axiom",
    "assignment_number",
    "audit_arb_axioms",
    "audit_arb_order",
    "audit_sum_dalal",
    "touched_states",
    "check_arb_conditions",
    "check_syncretic_conditions",
    "dalal",
    "describe_models",
    "dist_theory",
    "limit_holds",
    "majority_merge",
    "majority_scores",
    "parse_theories",
    "sum_dalal_family",
    "theory",
]
