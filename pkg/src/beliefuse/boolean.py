"""Propositional reasoning over bitset truth tables.

Row ``k`` of a table over leaves ``x_0..x_{n-1}`` assigns ``x_j`` the value
of bit ``j`` of ``k``; a formula's table is one Python int with bit ``k`` set
when row ``k`` satisfies it.  Modal boxes are treated as opaque leaves, which
is the abstraction used for propositional consequence between modal wffs.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .formula import And, Atom, Bottom, Box, Iff, Implies, Not, Or, Top, Wff, children

MAX_TABLE_VARS = 22


@lru_cache(maxsize=64)
def columns(n: int) -> tuple:
    """Return (full_mask, column_0, ..., column_{n-1}) for ``n`` leaves."""
    size = 1 << n
    full = (1 << size) - 1
    cols = []
    for j in range(n):
        block = 1 << j
        col = ((1 << block) - 1) << block
        width = 2 * block
        while width < size:
            col |= col << width
            width *= 2
        cols.append(col)
    return (full, *cols)


def leaves(w: Wff, out: dict | None = None) -> dict:
    """Atoms and maximal boxes of ``w`` in first-occurrence order (as dict keys)."""
    out = {} if out is None else out
    stack = [w]
    while stack:
        x = stack.pop()
        if isinstance(x, (Atom, Box)):
            out.setdefault(x, None)
        elif not isinstance(x, (Top, Bottom)):
            stack.extend(reversed(children(x)))
    return out


def evaluate(w: Wff, leaf: Callable[[Wff], int], full: int, memo: dict | None = None) -> int:
    """Bitset of rows satisfying ``w``; ``leaf`` maps atoms/boxes to bitsets."""
    memo = {} if memo is None else memo

    def ev(x):
        r = memo.get(x)
        if r is not None:
            return r
        if isinstance(x, (Atom, Box)):
            r = leaf(x)
        elif isinstance(x, Top):
            r = full
        elif isinstance(x, Bottom):
            r = 0
        elif isinstance(x, Not):
            r = full ^ ev(x.arg)
        elif isinstance(x, And):
            r = ev(x.left) & ev(x.right)
        elif isinstance(x, Or):
            r = ev(x.left) | ev(x.right)
        elif isinstance(x, Implies):
            r = (full ^ ev(x.left)) | ev(x.right)
        elif isinstance(x, Iff):
            r = full ^ (ev(x.left) ^ ev(x.right))
        else:
            raise TypeError(x)
        memo[x] = r
        return r

    return ev(w)


def _valid_under(w: Wff, order: list, fixed: dict) -> bool:
    free = [x for x in order if x not in fixed]
    if len(free) > MAX_TABLE_VARS:
        # Shannon split on the first free leaf keeps tables bounded.
        x = free[0]
        return _valid_under(w, order, {**fixed, x: True}) and _valid_under(w, order, {**fixed, x: False})
    full, *cols = columns(len(free))
    pos = {x: i for i, x in enumerate(free)}

    def leaf(x):
        if x in fixed:
            return full if fixed[x] else 0
        return cols[pos[x]]

    return evaluate(w, leaf, full) == full


def is_tautology(w: Wff) -> bool:
    """Propositional validity, with maximal boxes abstracted to fresh variables."""
    return _valid_under(w, list(leaves(w)), {})


def implies(premises: Iterable[Wff], conclusion: Wff) -> bool:
    premises = list(premises)
    if not premises:
        return is_tautology(conclusion)
    ant = premises[0]
    for p in premises[1:]:
        ant = And(ant, p)
    return is_tautology(Implies(ant, conclusion))


def models(wffs: Iterable[Wff], atom_order: Sequence[str]) -> int:
    """Bitset of interpretations of ``atom_order`` satisfying every wff."""
    full, *cols = columns(len(atom_order))
    pos = {a: cols[i] for i, a in enumerate(atom_order)}

    def leaf(x):
        if isinstance(x, Box):
            raise ValueError("modal wff where a propositional one is required")
        try:
            return pos[x.name]
        except KeyError:
            raise ValueError(f"atom {x.name!r} outside the interpretation space") from None

    memo: dict = {}
    out = full
    for w in wffs:
        out &= evaluate(w, leaf, full, memo)
    return out


def satisfiable(wffs: Iterable[Wff]) -> bool:
    wffs = list(wffs)
    order: dict = {}
    for w in wffs:
        leaves(w, order)
    names = sorted({x.name for x in order if isinstance(x, Atom)})
    if any(isinstance(x, Box) for x in order):
        raise ValueError("modal wff where a propositional one is required")
    return models(wffs, names) != 0


def interpretation(index: int, atom_order: Sequence[str]) -> frozenset:
    """Atoms true in interpretation number ``index``."""
    return frozenset(a for j, a in enumerate(atom_order) if index >> j & 1)


def bits(mask: int) -> list:
    """Positions of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")


def subsets(items: Sequence, min_size: int = 0, max_size: int | None = None):
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(min_size, top + 1):
        yield from itertools.combinations(items, k)


__all__ = [
    "columns",
    "evaluate",
    "implies",
    "interpretation",
    "is_tautology",
    "leaves",
    "models",
    "satisfiable",
    "bits",
    "popcount",
    "subsets",
]
