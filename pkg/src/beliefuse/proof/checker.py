"""Line-by-line verification of proof scripts."""
from __future__ import annotations

from dataclasses import dataclass

from .. import boolean
from ..formula import Atom, Box, Implies, Wff, canonical, children, conj, render
from . import schemas
from .script import MP, Axiom, Gen, Lemma, Premise, ProofScript, Ref, TautCons


class ProofError(ValueError):
    pass


@dataclass(frozen=True)
class ProofResult:
    ok: bool
    line: int | None = None  # first failing line (None on success or header problems)
    reason: str = ""
    conclusion: Wff | None = None
    local: bool = True  # False once Gen has been applied to premise-dependent material

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"verified: {render(self.conclusion)}"
        where = f"line {self.line}" if self.line is not None else "header"
        return f"rejected at {where}: {self.reason}"


# ---------------------------------------------------------------------------
# pattern matching for lemma citation


def match_pattern(pattern: Wff, target: Wff, binding: dict) -> bool:
    """Extend ``binding`` (atom name -> wff) so that pattern instantiates to target."""
    if isinstance(pattern, Atom):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = target
            return True
        return bound == target
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, Box):
        if pattern.index != target.index:
            return False
        return match_pattern(pattern.body, target.body, binding)
    pc, tc = children(pattern), children(target)
    if len(pc) != len(tc):
        return False
    return all(match_pattern(p, t, binding) for p, t in zip(pc, tc))


# ---------------------------------------------------------------------------


class _Fail(Exception):
    pass


def check_proof(script: ProofScript, lib=None) -> ProofResult:
    """Verify every line of ``script``; lemma citations resolve through ``lib``."""
    system = script.system
    if system not in schemas.SYSTEMS:
        return ProofResult(False, None, f"unknown system {system!r}")
    for k, p in enumerate(script.premises, start=1):
        err = schemas.language_error(p, system)
        if err:
            return ProofResult(False, None, f"premise {k}: {err}")
    n_prem = len(script.premises)
    formulas: dict = {}
    dependent: dict = {}
    local = True

    def fetch(ref: Ref, here: int):
        if ref.premise:
            if not 1 <= ref.number <= n_prem:
                raise _Fail(f"no premise {ref.number}")
            return canonical(script.premises[ref.number - 1]), True
        if not 1 <= ref.number < here:
            raise _Fail(f"line {ref.number} is not an earlier line")
        return formulas[ref.number], dependent[ref.number]

    for ln in script.lines:
        target = canonical(ln.formula)
        j = ln.just
        try:
            err = schemas.language_error(target, system)
            if err:
                raise _Fail(err)
            dep = False
            if isinstance(j, Premise):
                if not 1 <= j.number <= n_prem:
                    raise _Fail(f"no premise {j.number}")
                if canonical(script.premises[j.number - 1]) != target:
                    raise _Fail(f"formula differs from premise {j.number}")
                dep = True
            elif isinstance(j, Axiom):
                if j.name not in schemas.SCHEMAS[system]:
                    raise _Fail(f"{j.name} is not a schema of {system}")
                if schemas.matches_schema(target, j.name, system) is None:
                    raise _Fail(f"not an instance of {j.name}")
            elif isinstance(j, MP):
                a, da = fetch(j.minor, ln.number)
                b, db = fetch(j.major, ln.number)
                if b != Implies(a, target) and a != Implies(b, target):
                    raise _Fail(f"modus ponens does not apply to {j.minor} and {j.major}")
                dep = da or db
            elif isinstance(j, Gen):
                a, dep = fetch(j.ref, ln.number)
                if not isinstance(target, Box) or target.body != a:
                    raise _Fail(f"not a boxed copy of {j.ref}")
                if j.index is not None and target.index != j.index:
                    raise _Fail("index differs from the one cited")
                idx = target.index
                if not schemas.index_allowed(idx, system):
                    raise _Fail("generalisation index outside the language")
                if dep:
                    local = False
            elif isinstance(j, TautCons):
                cited = []
                for r in j.refs:
                    f, d = fetch(r, ln.number)
                    cited.append(f)
                    dep = dep or d
                try:
                    extra = schemas.step_instances(j.hints, cited, target, system)
                except schemas.SchemaError as e:
                    raise _Fail(str(e)) from None
                goal = Implies(conj(cited + extra), target) if cited or extra else target
                n_leaves = len(boolean.leaves(goal))
                if n_leaves > schemas.MAX_STEP_LEAVES:
                    raise _Fail(f"propositional step too large ({n_leaves} abstracted atoms)")
                if not boolean.is_tautology(goal):
                    raise _Fail("not a propositional consequence of the cited material")
            elif isinstance(j, Lemma):
                if lib is None:
                    raise _Fail(f"no library to resolve lemma {j.name}")
                try:
                    entry = lib.lookup(system, j.name)
                except (KeyError, RuntimeError) as e:
                    raise _Fail(str(e.args[0]) if e.args else f"unknown lemma {j.name}") from None
                if len(j.refs) != len(entry.premises):
                    raise _Fail(f"lemma {j.name} needs {len(entry.premises)} premise line(s)")
                binding: dict = {}
                fetched = [fetch(r, ln.number) for r in j.refs]
                for pat, (f, _d) in zip(entry.premises, fetched):
                    if not match_pattern(pat, f, binding):
                        raise _Fail(f"cited line does not fit lemma {j.name}")
                if not match_pattern(entry.conclusion, target, binding):
                    raise _Fail(f"formula is not an instance of lemma {j.name}")
                dep = any(d for _f, d in fetched)
                if dep and not entry.local:
                    local = False
            else:
                raise _Fail(f"unknown justification {j!r}")
        except _Fail as e:
            return ProofResult(False, ln.number, str(e), local=local)
        formulas[ln.number] = target
        dependent[ln.number] = dep
    return ProofResult(True, None, "", script.conclusion, local)
