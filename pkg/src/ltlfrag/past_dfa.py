"""Deterministic automata for pure-past formulas.

The state reached after reading a word is the truth valuation, at the last
position, of every subformula of ``alpha``. Each valuation is computed
from the previous one and the current letter alone, which makes the
construction deterministic without any subset construction.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable

from .errors import FragmentError
from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    NegAtom,
    Or,
    Since,
    Top,
    Triggered,
    WeakYesterday,
    Yesterday,
    atoms,
    is_pure_past,
    letters_over,
    render,
    subformulas,
)

_ATOM, _NEG, _TOP, _BOT, _AND, _OR, _Y, _WY, _S, _T = range(10)


class PastDFA:
    """Automaton whose states are bit-masks over the tracked subformulas.

    Bit ``k`` of a state is the value of ``tracked[k]``. ``START`` is the
    configuration before any letter has been read; it is not itself a
    state and is never accepting.
    """

    START = None

    def __init__(self, alpha: Formula):
        if not is_pure_past(alpha):
            raise FragmentError(f"not a pure-past formula: {render(alpha)}")
        self.alpha = alpha
        self.tracked: tuple[Formula, ...] = tuple(subformulas(alpha))
        self.atoms = atoms(alpha)
        index = {f: k for k, f in enumerate(self.tracked)}
        program = []
        for f in self.tracked:
            if isinstance(f, Atom):
                program.append((_ATOM, f.name, 0))
            elif isinstance(f, NegAtom):
                program.append((_NEG, f.name, 0))
            elif isinstance(f, Top):
                program.append((_TOP, 0, 0))
            elif isinstance(f, Bottom):
                program.append((_BOT, 0, 0))
            elif isinstance(f, And):
                program.append((_AND, index[f.left], index[f.right]))
            elif isinstance(f, Or):
                program.append((_OR, index[f.left], index[f.right]))
            elif isinstance(f, Yesterday):
                program.append((_Y, index[f.arg], 0))
            elif isinstance(f, WeakYesterday):
                program.append((_WY, index[f.arg], 0))
            elif isinstance(f, Since):
                program.append((_S, index[f.left], index[f.right]))
            elif isinstance(f, Triggered):
                program.append((_T, index[f.left], index[f.right]))
        self._program = program
        self._accept_bit = 1 << (len(self.tracked) - 1)
        self._memo: dict[tuple[int | None, frozenset], int] = {}

    def __len__(self) -> int:
        return len(self.tracked)

    def _compute(self, prev: int | None, letter: frozenset) -> int:
        new = 0
        first = prev is None
        for k, (op, a, b) in enumerate(self._program):
            if op == _ATOM:
                v = a in letter
            elif op == _NEG:
                v = a not in letter
            elif op == _TOP:
                v = True
            elif op == _BOT:
                v = False
            elif op == _AND:
                v = bool(new >> a & 1) and bool(new >> b & 1)
            elif op == _OR:
                v = bool(new >> a & 1) or bool(new >> b & 1)
            elif op == _Y:
                v = not first and bool(prev >> a & 1)
            elif op == _WY:
                v = first or bool(prev >> a & 1)
            elif op == _S:
                # a S b  ==  b | (a & Y(a S b))
                v = bool(new >> b & 1) or (
                    bool(new >> a & 1) and not first and bool(prev >> k & 1)
                )
            else:
                # a T b  ==  b & (a | wY(a T b))
                v = bool(new >> b & 1) and (
                    bool(new >> a & 1) or first or bool(prev >> k & 1)
                )
            if v:
                new |= 1 << k
        return new

    def step(self, state: int | None, letter: Iterable[str]) -> int:
        """Successor of ``state`` (or of ``START``) on ``letter``."""
        key = (state, self.atoms.intersection(letter))
        nxt = self._memo.get(key)
        if nxt is None:
            nxt = self._compute(state, key[1])
            self._memo[key] = nxt
        return nxt

    def initial(self, letter: Iterable[str]) -> int:
        return self.step(self.START, letter)

    def accepting(self, state: int | None) -> bool:
        return state is not None and bool(state & self._accept_bit)

    def value(self, state: int, f: Formula) -> bool:
        """Truth of the tracked subformula ``f`` in ``state``."""
        return bool(state >> self.tracked.index(f) & 1)

    def reachable(self, names: Iterable[str] | None = None) -> tuple[list[int], dict]:
        """States reachable from ``START`` and the transition table.

        Letters range over subsets of ``names`` (default: the atoms of
        ``alpha``). Transitions are keyed by ``(state, letter)`` with
        ``START`` as a possible source.
        """
        letters = letters_over(sorted(self.atoms if names is None else names))
        states: list[int] = []
        seen: set[int] = set()
        delta: dict = {}
        queue: deque = deque([self.START])
        while queue:
            q = queue.popleft()
            for letter in letters:
                r = self.step(q, letter)
                delta[(q, letter)] = r
                if r not in seen:
                    seen.add(r)
                    states.append(r)
                    queue.append(r)
        return states, delta

    def to_dot(self) -> str:
        states, delta = self.reachable()
        ids = {q: f"q{k}" for k, q in enumerate(states)}
        lines = ["digraph pastdfa {", "  rankdir=LR;", '  start [shape=point];']
        for q in states:
            shape = "doublecircle" if self.accepting(q) else "circle"
            lines.append(f'  {ids[q]} [shape={shape}, label="{q:b}"];')
        for (q, letter), r in delta.items():
            src = "start" if q is None else ids[q]
            label = "{" + ",".join(sorted(letter)) + "}"
            lines.append(f'  {src} -> {ids[r]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


@lru_cache(maxsize=512)
def build_past_dfa(alpha: Formula) -> PastDFA:
    """The automaton accepting exactly the words whose last position satisfies ``alpha``."""
    return PastDFA(alpha)


def run(d: PastDFA, w: Iterable[Iterable[str]]) -> tuple[int, bool]:
    """Read the non-empty word ``w``; return the final state and acceptance."""
    state = d.START
    empty = True
    for letter in w:
        state = d.step(state, letter)
        empty = False
    if empty:
        raise ValueError("words must be non-empty")
    return state, d.accepting(state)
