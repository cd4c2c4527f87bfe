"""Verified lemma library and the shipped derivation corpus.

Lemmas are instances of the order laws at concrete priority orders.  Each is
produced by a script builder that unrolls the inductive argument one level,
citing the lemma for the next shorter order; a lemma enters the library only
after its script verifies.

Lemma names:

* ``Prop1.1(O,j)``  cutting an order after its j-th agent (DBFc)
* ``Prop1.2(O)``    closure of [O] under modus ponens
* ``Prop1.3(O)``    consistency of [O]
* ``Prop1.4(O)``    necessitation for [O] (one premise)
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources

from ..formula import Group, Order, Wff, canonical_index, render_index
from .checker import ProofResult, check_proof
from .script import ProofScript, parse_script

_NAME = re.compile(r"(Prop1\.[1-4])\(([0-9>]+)(?:,(\d+))?\)$")


@dataclass(frozen=True)
class LemmaEntry:
    name: str
    system: str
    premises: tuple
    conclusion: Wff
    local: bool
    script: ProofScript


def _idx(agents) -> str:
    return render_index(canonical_index(Order(tuple(agents))))


def _grp(agents) -> str:
    return render_index(Group(frozenset(agents)))


def _oname(order) -> str:
    return ">".join(map(str, order))


# ---------------------------------------------------------------------------
# script builders


def build_prop11(order: tuple, j: int) -> str:
    """(~[G_j]false & [G_{j+1}]false) -> ([O]phi <-> [G_j]phi), G_k the k-prefix group."""
    m = len(order)
    if not 1 <= j <= m:
        raise ValueError("cut position out of range")
    o = _idx(order)
    gj = _grp(order[:j])
    lines = ["system: DBFc"]
    if j == m:
        just = "AX P" if m == 1 else "AX O1"
        lines.append(f"1. ~[{gj}] false -> ([{o}] phi <-> [{gj}] phi) ; {just}")
        return "\n".join(lines) + "\n"
    gj1 = _grp(order[: j + 1])
    gm = _grp(order)
    prev = order[:-1]
    ant = f"(~[{gj}] false & [{gj1}] false)"
    lines += [
        f"1. {ant} -> [{gm}] false ; P(G3)",
        f"2. [{gm}] false -> ([{o}] phi <-> [{_idx(prev)}] phi) ; AX O2",
        f"3. {ant} -> ([{o}] phi <-> [{_idx(prev)}] phi) ; P(1, 2)",
    ]
    hyp_ant = ant if j < m - 1 else f"~[{gj}] false"
    lines += [
        f"4. {hyp_ant} -> ([{_idx(prev)}] phi <-> [{gj}] phi) ; LEM Prop1.1({_oname(prev)},{j})",
        f"5. {ant} -> ([{o}] phi <-> [{gj}] phi) ; P(3, 4)",
    ]
    return "\n".join(lines) + "\n"


def build_prop12(order: tuple, system: str = "DBFc") -> str:
    o = _idx(order)
    k = "G1" if system == "DBFc" else "V1"
    if len(order) == 1 or system == "DBFs":
        return f"system: {system}\n1. ([{o}] phi & [{o}] (phi -> psi)) -> [{o}] psi ; AX {k}\n"
    prev = _idx(order[:-1])
    g = _grp(order)
    a, b = f"[{o}] phi", f"[{o}] (phi -> psi)"
    both = f"({a} & {b})"
    lines = [
        "system: DBFc",
        f"1. {a} -> (~[{g}] false -> [{g}] phi) ; P(O1)",
        f"2. {b} -> (~[{g}] false -> [{g}] (phi -> psi)) ; P(O1)",
        f"3. {a} -> ([{g}] false -> [{prev}] phi) ; P(O2)",
        f"4. {b} -> ([{g}] false -> [{prev}] (phi -> psi)) ; P(O2)",
        f"5. {both} -> (~[{g}] false -> [{g}] psi) ; P(1, 2, G1)",
        f"6. ([{prev}] phi & [{prev}] (phi -> psi)) -> [{prev}] psi ; LEM Prop1.2({_oname(order[:-1])})",
        f"7. {both} -> ([{g}] false -> [{prev}] psi) ; P(3, 4, 6)",
        f"8. {both} -> (~[{g}] false -> [{o}] psi) ; P(5, O1)",
        f"9. {both} -> ([{g}] false -> [{o}] psi) ; P(7, O2)",
        f"10. {both} -> [{o}] psi ; P(8, 9)",
    ]
    return "\n".join(lines) + "\n"


def build_prop13(order: tuple, system: str = "DBFc") -> str:
    o = _idx(order)
    if len(order) == 1:
        d = "G2" if system == "DBFc" else "V2"
        return f"system: {system}\n1. ~[{o}] false ; AX {d}\n"
    prev = _idx(order[:-1])
    ref = f"LEM Prop1.3({_oname(order[:-1])})"
    if system == "DBFs":
        lines = [
            "system: DBFs",
            f"1. [{o}] false -> [{prev}] false ; P(O1', O2')",
            f"2. ~[{prev}] false ; {ref}",
            f"3. ~[{o}] false ; P(1, 2)",
        ]
        return "\n".join(lines) + "\n"
    g = _grp(order)
    lines = [
        "system: DBFc",
        f"1. ~[{g}] false -> ([{o}] false -> [{g}] false) ; P(O1)",
        f"2. [{g}] false -> ([{o}] false -> [{prev}] false) ; P(O2)",
        f"3. [{o}] false -> [{g}] false ; P(1)",
        f"4. [{o}] false -> ([{g}] false -> [{prev}] false) ; P(2)",
        f"5. [{o}] false -> [{prev}] false ; P(3, 4)",
        f"6. ~[{prev}] false ; {ref}",
        f"7. ~[{o}] false ; P(5, 6)",
    ]
    return "\n".join(lines) + "\n"


def build_prop14(order: tuple, system: str = "DBFc") -> str:
    o = _idx(order)
    head = f"system: {system}\npremise 1: phi\n1. phi ; Pre 1\n"
    if len(order) == 1 or system == "DBFs":
        return head + f"2. [{o}] phi ; Gen 1 [{o}]\n"
    prev = _idx(order[:-1])
    g = _grp(order)
    return head + (
        f"2. [{prev}] phi ; LEM Prop1.4({_oname(order[:-1])}) 1\n"
        f"3. [{g}] phi ; Gen 1 [{g}]\n"
        f"4. ([{g}] phi & [{prev}] phi) -> [{o}] phi ; P(O1, O2)\n"
        f"5. [{o}] phi ; P(2, 3, 4)\n"
    )


def build(system: str, name: str) -> str:
    m = _NAME.match(name)
    if not m:
        raise KeyError(f"unknown lemma {name}")
    kind, chain, j = m.group(1), m.group(2), m.group(3)
    try:
        order = tuple(int(x) for x in chain.split(">"))
    except ValueError:
        raise KeyError(f"bad order in lemma name {name}") from None
    if len(set(order)) != len(order) or not order or min(order) < 1:
        raise KeyError(f"bad order in lemma name {name}")
    if kind == "Prop1.1":
        if system != "DBFc":
            raise KeyError(f"{name}: the cutting law is only available in DBFc")
        if j is None or not 1 <= int(j) <= len(order):
            raise KeyError(f"{name}: needs a cut position 1..{len(order)}")
        return build_prop11(order, int(j))
    if j is not None:
        raise KeyError(f"{name}: unexpected cut position")
    return {"Prop1.2": build_prop12, "Prop1.3": build_prop13, "Prop1.4": build_prop14}[kind](order, system)


def lemma_name(kind: str, order, j: int | None = None) -> str:
    base = f"{kind}({_oname(order)}"
    return base + (f",{j})" if j is not None else ")")


# ---------------------------------------------------------------------------


class LemmaRejected(RuntimeError):
    pass


class ProofLibrary:
    """Verified lemmas, built on first use and cached."""

    def __init__(self):
        self._entries: dict = {}
        self._verifying: set = set()

    def lookup(self, system: str, name: str) -> LemmaEntry:
        key = (system, name)
        hit = self._entries.get(key)
        if hit is not None:
            return hit
        if key in self._verifying:
            raise KeyError(f"lemma {name} cites itself")
        text = build(system, name)
        script = parse_script(text, name)
        self._verifying.add(key)
        try:
            res = check_proof(script, self)
        finally:
            self._verifying.discard(key)
        if not res.ok:
            raise LemmaRejected(f"lemma {name} failed to verify: {res.summary()}")
        return self.admit(name, script, res)

    def admit(self, name: str, script: ProofScript, res: ProofResult | None = None) -> LemmaEntry:
        res = res or check_proof(script, self)
        if not res.ok:
            raise LemmaRejected(f"{name} failed to verify: {res.summary()}")
        entry = LemmaEntry(name, script.system, script.premises, res.conclusion, res.local, script)
        self._entries[(script.system, name)] = entry
        return entry

    def names(self) -> list:
        return sorted(self._entries)


DEFAULT_LIBRARY = ProofLibrary()


# ---------------------------------------------------------------------------
# shipped corpus

CORPUS = ("example1_dbfc.prf", "example1_dbfs.prf", "example5.prf")


def corpus_text(name: str) -> str:
    return resources.files("beliefuse.proof").joinpath("corpus", name).read_text()


def load_corpus() -> dict:
    return {name: parse_script(corpus_text(name), name) for name in CORPUS}


def orders_up_to(n_agents: int, max_len: int):
    for k in range(1, max_len + 1):
        yield from itertools.permutations(range(1, n_agents + 1), k)


def lemma_instances(n_agents: int = 4, max_len: int = 4) -> list:
    """(system, name) for every shipped order-law instance."""
    out = []
    for o in orders_up_to(n_agents, max_len):
        for j in range(1, len(o) + 1):
            out.append(("DBFc", lemma_name("Prop1.1", o, j)))
        for kind in ("Prop1.2", "Prop1.3", "Prop1.4"):
            out.append(("DBFc", lemma_name(kind, o)))
            out.append(("DBFs", lemma_name(kind, o)))
    return out


@dataclass(frozen=True)
class LibraryReport:
    ok: bool
    checked: int
    failures: tuple

    def __bool__(self):
        return self.ok


def verify_library(n_agents: int = 4, max_len: int = 4, lib: ProofLibrary | None = None) -> LibraryReport:
    lib = lib or ProofLibrary()
    failures = []
    checked = 0
    for system, name in lemma_instances(n_agents, max_len):
        checked += 1
        try:
            lib.lookup(system, name)
        except (KeyError, LemmaRejected) as e:
            failures.append(f"{system} {name}: {e}")
    for name, script in load_corpus().items():
        checked += 1
        res = check_proof(script, lib)
        if not res.ok:
            failures.append(f"{name}: {res.summary()}")
    return LibraryReport(not failures, checked, tuple(failures))
