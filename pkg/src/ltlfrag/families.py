"""Exhaustive enumeration of formulas, letters and traces.

Formula size is the node count of the syntax tree. Leaves are literals
over the given atoms; derived operators such as G are built from their
definition and cost their full node count (``G a`` is ``false R a``,
two nodes more than ``a``).
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Sequence

from .formula import (
    And,
    Atom,
    Formula,
    G,
    NegAtom,
    Next,
    Or,
    Release,
    Since,
    Triggered,
    Until,
    WeakNext,
    WeakYesterday,
    Yesterday,
    letters_over,
)

Unary = tuple[Callable[[Formula], Formula], int]


def by_size(
    max_size: int,
    leaves: dict[int, Sequence[Formula]],
    unary: Sequence[Unary] = (),
    binary: Sequence[Callable[[Formula, Formula], Formula]] = (),
) -> list[list[Formula]]:
    """``result[s]`` lists every formula of size exactly ``s``.

    ``leaves`` maps a size to the ground formulas of that size, ``unary``
    holds constructors with the number of nodes they add, and ``binary``
    holds two-argument constructors (adding one node).
    """
    table: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    for s in range(1, max_size + 1):
        row = list(leaves.get(s, ()))
        for op, cost in unary:
            if s - cost >= 1:
                row.extend(op(x) for x in table[s - cost])
        for op in binary:
            for k in range(1, s - 1):
                for x in table[k]:
                    for y in table[s - 1 - k]:
                        row.append(op(x, y))
        table[s] = row
    return table


def literals(names: Iterable[str]) -> list[Formula]:
    out: list[Formula] = []
    for n in names:
        out.extend((Atom(n), NegAtom(n)))
    return out


def _flatten(table: list[list[Formula]]) -> list[Formula]:
    return [f for row in table for f in row]


def pure_future(names: Sequence[str], max_size: int) -> list[Formula]:
    """All formulas over X, wX, U, R, and, or."""
    return _flatten(
        by_size(
            max_size,
            {1: literals(names)},
            [(Next, 1), (WeakNext, 1)],
            [And, Or, Until, Release],
        )
    )


def pure_past(names: Sequence[str], max_size: int) -> list[Formula]:
    """All formulas over Y, wY, S, T, and, or."""
    return _flatten(
        by_size(
            max_size,
            {1: literals(names)},
            [(Yesterday, 1), (WeakYesterday, 1)],
            [And, Or, Since, Triggered],
        )
    )


def safety_ltl(names: Sequence[str], max_size: int) -> list[Formula]:
    """All formulas of LTL[wX, R]."""
    return _flatten(
        by_size(max_size, {1: literals(names)}, [(WeakNext, 1)], [And, Or, Release])
    )


def ltl_wxg(names: Sequence[str], max_size: int) -> list[Formula]:
    """All formulas of LTL[wX, G]."""
    return _flatten(
        by_size(max_size, {1: literals(names)}, [(WeakNext, 1), (G, 2)], [And, Or])
    )


def galpha(names: Sequence[str], max_size: int) -> list[Formula]:
    """All ``G alpha`` of total size at most ``max_size``."""
    return [G(a) for a in pure_past(names, max_size - 2)]


def safety_family(names: Sequence[str], max_size: int) -> list[Formula]:
    """Union of LTL[wX, R], LTL[wX, G] and G alpha, without repetitions."""
    parts = (safety_ltl(names, max_size), ltl_wxg(names, max_size), galpha(names, max_size))
    return list(dict.fromkeys(itertools.chain(*parts)))


def cosafety_ltl(names: Sequence[str], max_size: int) -> list[Formula]:
    """All formulas of LTL[X, U]."""
    return _flatten(
        by_size(max_size, {1: literals(names)}, [(Next, 1)], [And, Or, Until])
    )


def shiftable(names: Sequence[str], future_names: Sequence[str], max_size: int) -> list[Formula]:
    """Pure-past formulas whose leaves may also be ``X l`` for ``l`` over ``future_names``."""
    return _flatten(
        by_size(
            max_size,
            {1: literals(names), 2: [Next(l) for l in literals(future_names)]},
            [(Yesterday, 1), (WeakYesterday, 1)],
            [And, Or, Since, Triggered],
        )
    )


def words(names: Sequence[str], length: int) -> Iterator[tuple[frozenset, ...]]:
    """All words of exactly ``length`` letters, in lexicographic letter order."""
    return itertools.product(letters_over(names), repeat=length)


def words_up_to(names: Sequence[str], max_len: int) -> Iterator[tuple[frozenset, ...]]:
    for n in range(1, max_len + 1):
        yield from words(names, n)
