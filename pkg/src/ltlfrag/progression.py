"""Letter-by-letter progression of pure-future formulas on finite traces.

An obligation is kept in disjunctive normal form: a frozenset of clauses,
each clause a frozenset of items. Items are literals and subformulas
headed by X, wX, U or R. The empty clause is ``true``; the empty set of
clauses is ``false``. Clauses with complementary literals are dropped and
clauses that contain another clause are absorbed, which keeps the
reachable obligation graph finite.
"""

from __future__ import annotations

from functools import lru_cache

from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    NegAtom,
    Next,
    Or,
    Release,
    Top,
    Until,
    WeakNext,
    render,
)
from .errors import UnsupportedFormulaError

Clause = frozenset
Obligation = frozenset

TRUE: Obligation = frozenset({frozenset()})
FALSE: Obligation = frozenset()


def _consistent(clause: Clause) -> bool:
    for item in clause:
        if isinstance(item, Atom) and NegAtom(item.name) in clause:
            return False
    return True


def _absorb(clauses) -> Obligation:
    ordered = sorted(set(clauses), key=len)
    kept: list[Clause] = []
    for c in ordered:
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def disjoin(a: Obligation, b: Obligation) -> Obligation:
    if a == TRUE or b == TRUE:
        return TRUE
    if not a:
        return b
    if not b:
        return a
    return _absorb(a | b)


def conjoin(a: Obligation, b: Obligation) -> Obligation:
    if not a or not b:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    return _absorb(c for x in a for y in b if _consistent(c := x | y))


@lru_cache(maxsize=1 << 16)
def dnf(f: Formula) -> Obligation:
    """The obligation that ``f`` holds at the current position."""
    if isinstance(f, Top):
        return TRUE
    if isinstance(f, Bottom):
        return FALSE
    if isinstance(f, And):
        return conjoin(dnf(f.left), dnf(f.right))
    if isinstance(f, Or):
        return disjoin(dnf(f.left), dnf(f.right))
    if isinstance(f, (Atom, NegAtom, Next, WeakNext, Until, Release)):
        return frozenset({frozenset({f})})
    raise UnsupportedFormulaError(f"progression handles pure-future formulas only: {render(f)}")


@lru_cache(maxsize=1 << 18)
def _step_item(item: Formula, letter: frozenset) -> Obligation:
    if isinstance(item, Atom):
        return TRUE if item.name in letter else FALSE
    if isinstance(item, NegAtom):
        return FALSE if item.name in letter else TRUE
    if isinstance(item, (Next, WeakNext)):
        return dnf(item.arg)
    here = frozenset({frozenset({item})})
    now_right = progress(dnf(item.right), letter)
    now_left = progress(dnf(item.left), letter)
    if isinstance(item, Until):
        # a U b  ==  b | (a & X(a U b))
        return disjoin(now_right, conjoin(now_left, here))
    # a R b  ==  b & (a | wX(a R b))
    return conjoin(now_right, disjoin(now_left, here))


@lru_cache(maxsize=1 << 18)
def progress(ob: Obligation, letter: frozenset) -> Obligation:
    """Obligation for position ``i + 1`` after reading ``letter`` at a non-final ``i``."""
    result = FALSE
    for clause in ob:
        part = TRUE
        for item in clause:
            part = conjoin(part, _step_item(item, letter))
            if not part:
                break
        result = disjoin(result, part)
        if result == TRUE:
            break
    return result


@lru_cache(maxsize=1 << 18)
def _ends_item(item: Formula, letter: frozenset) -> bool:
    if isinstance(item, Atom):
        return item.name in letter
    if isinstance(item, NegAtom):
        return item.name not in letter
    if isinstance(item, Next):
        return False
    if isinstance(item, WeakNext):
        return True
    # at the last position both a U b and a R b reduce to b
    return accepts_last(dnf(item.right), letter)


def accepts_last(ob: Obligation, letter: frozenset) -> bool:
    """Whether ``ob`` holds when ``letter`` is the final position of the trace."""
    return any(all(_ends_item(item, letter) for item in clause) for clause in ob)


def accepts(f: Formula, trace) -> bool:
    """Finite-trace model check by progression (agrees with ``eval_finite`` at 0)."""
    ob = dnf(f)
    for k, letter in enumerate(trace):
        letter = frozenset(letter)
        if k == len(trace) - 1:
            return accepts_last(ob, letter)
        ob = progress(ob, letter)
        if not ob:
            return False
    raise ValueError("finite traces must be non-empty")


def obligation_text(ob: Obligation) -> str:
    if not ob:
        return "false"
    clauses = []
    for clause in sorted(ob, key=lambda c: sorted(map(render, c))):
        items = sorted(render(i) for i in clause)
        clauses.append(" & ".join(f"({x})" for x in items) if items else "true")
    return " | ".join(clauses)
