"""Proof script data model and text format.

    system: DBFc
    premise 1: [1>2] p
    1. <wff> ; <justification>

Justifications: ``Pre k``, ``AX <schema>``, ``MP a b``, ``Gen a [index]``,
``P(a, b, <schema>...)`` and ``LEM <name> a b ...``.  References are line
numbers or ``pre<k>`` for premises.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..formula import ParseError, Wff, parse, parse_index, render, render_index


class ScriptError(ValueError):
    pass


@dataclass(frozen=True)
class Ref:
    premise: bool
    number: int

    def __str__(self):
        return f"pre{self.number}" if self.premise else str(self.number)


@dataclass(frozen=True)
class Premise:
    number: int


@dataclass(frozen=True)
class Axiom:
    name: str


@dataclass(frozen=True)
class MP:
    minor: Ref
    major: Ref


@dataclass(frozen=True)
class Gen:
    ref: Ref
    index: object = None


@dataclass(frozen=True)
class TautCons:
    refs: tuple
    hints: tuple = ()


@dataclass(frozen=True)
class Lemma:
    name: str
    refs: tuple = ()


Justification = Premise | Axiom | MP | Gen | TautCons | Lemma


@dataclass(frozen=True)
class Line:
    number: int
    formula: Wff
    just: object


@dataclass(frozen=True)
class ProofScript:
    system: str
    premises: tuple
    lines: tuple
    name: str = ""

    @property
    def conclusion(self) -> Wff | None:
        return self.lines[-1].formula if self.lines else None


_REF = re.compile(r"(?:pre(\d+)|(\d+))$")


def parse_ref(text: str, lineno: int = 0) -> Ref:
    m = _REF.match(text.strip())
    if not m:
        raise ScriptError(f"line {lineno}: bad reference {text!r}")
    if m.group(1):
        return Ref(True, int(m.group(1)))
    return Ref(False, int(m.group(2)))


def parse_justification(text: str, lineno: int = 0) -> object:
    text = text.strip()
    if text == "P" or text.startswith("P(") or text.startswith("P "):
        inner = text[1:].strip()
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        elif inner:
            raise ScriptError(f"line {lineno}: bad P(...) justification {text!r}")
        refs, hints = [], []
        for item in filter(None, (x.strip() for x in inner.split(","))):
            if _REF.match(item):
                refs.append(parse_ref(item, lineno))
            else:
                hints.append(item)
        return TautCons(tuple(refs), tuple(hints))
    parts = text.split()
    if not parts:
        raise ScriptError(f"line {lineno}: missing justification")
    head = parts[0]
    if head == "Pre":
        if len(parts) != 2 or not parts[1].isdigit():
            raise ScriptError(f"line {lineno}: use 'Pre k'")
        return Premise(int(parts[1]))
    if head == "AX":
        if len(parts) != 2:
            raise ScriptError(f"line {lineno}: use 'AX <schema>'")
        return Axiom(parts[1])
    if head == "MP":
        if len(parts) != 3:
            raise ScriptError(f"line {lineno}: use 'MP a b'")
        return MP(parse_ref(parts[1], lineno), parse_ref(parts[2], lineno))
    if head == "Gen":
        m = re.match(r"Gen\s+(\S+)\s*(\[.*\])?\s*$", text)
        if not m:
            raise ScriptError(f"line {lineno}: use 'Gen a [index]'")
        idx = None
        if m.group(2):
            try:
                idx = parse_index(m.group(2))
            except (ParseError, ValueError) as e:
                raise ScriptError(f"line {lineno}: bad index: {e}") from None
        return Gen(parse_ref(m.group(1), lineno), idx)
    if head == "LEM":
        if len(parts) < 2:
            raise ScriptError(f"line {lineno}: use 'LEM <name> refs...'")
        return Lemma(parts[1], tuple(parse_ref(x, lineno) for x in parts[2:]))
    raise ScriptError(f"line {lineno}: unknown justification {text!r}")


def parse_script(text: str, name: str = "") -> ProofScript:
    system = None
    premises: dict = {}
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"system\s*:\s*(\S+)$", line)
        if m:
            system = m.group(1)
            continue
        m = re.match(r"premise\s+(\d+)\s*:\s*(.+)$", line)
        if m:
            k = int(m.group(1))
            if k in premises:
                raise ScriptError(f"line {lineno}: premise {k} given twice")
            premises[k] = _wff(m.group(2), lineno)
            continue
        m = re.match(r"(\d+)\.\s*(.*?)\s*;\s*(.+)$", line)
        if not m:
            raise ScriptError(f"line {lineno}: expected 'k. <wff> ; <justification>'")
        number = int(m.group(1))
        if number != len(lines) + 1:
            raise ScriptError(f"line {lineno}: proof lines must be numbered 1, 2, ... in order")
        lines.append(Line(number, _wff(m.group(2), lineno), parse_justification(m.group(3), lineno)))
    if system is None:
        raise ScriptError("missing 'system:' header")
    if sorted(premises) != list(range(1, len(premises) + 1)):
        raise ScriptError("premises must be numbered 1, 2, ...")
    if not lines:
        raise ScriptError("script has no proof lines")
    return ProofScript(system, tuple(premises[k] for k in sorted(premises)), tuple(lines), name)


def _wff(text: str, lineno: int) -> Wff:
    try:
        return parse(text)
    except ParseError as e:
        raise ScriptError(f"line {lineno}: {e}") from None


def render_justification(j) -> str:
    if isinstance(j, Premise):
        return f"Pre {j.number}"
    if isinstance(j, Axiom):
        return f"AX {j.name}"
    if isinstance(j, MP):
        return f"MP {j.minor} {j.major}"
    if isinstance(j, Gen):
        return f"Gen {j.ref}" + (f" [{render_index(j.index)}]" if j.index is not None else "")
    if isinstance(j, TautCons):
        return "P(" + ", ".join([str(r) for r in j.refs] + list(j.hints)) + ")"
    if isinstance(j, Lemma):
        return " ".join(["LEM", j.name] + [str(r) for r in j.refs])
    raise TypeError(j)


def render_script(s: ProofScript) -> str:
    out = [f"system: {s.system}"]
    for k, p in enumerate(s.premises, start=1):
        out.append(f"premise {k}: {render(p)}")
    for ln in s.lines:
        out.append(f"{ln.number}. {render(ln.formula)} ; {render_justification(ln.just)}")
    return "\n".join(out) + "\n"
