"""Satisfaction of LTLP formulas on finite traces and on lasso words.

A finite trace is a non-empty tuple of states, each state a frozenset of
atom names. A lasso ``Lasso(prefix, loop)`` stands for ``prefix . loop^w``.

The finite-trace evaluator fills a table indexed by (subformula, position)
bottom-up. Truth values are stored as integers used as bit-sets, so many
traces of the same length can be evaluated in one pass: bit ``b`` of the
entry for position ``i`` is the value on the ``b``-th trace of the batch.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, UnknownAtomError, UnsupportedFormulaError
from .formula import (
    Alphabet,
    And,
    Atom,
    Bottom,
    Formula,
    NegAtom,
    Next,
    Or,
    Release,
    Since,
    Top,
    Triggered,
    Until,
    WeakNext,
    WeakYesterday,
    Yesterday,
    atoms,
    is_falpha,
    is_galpha,
    is_pure_future,
    is_pure_past,
    subformulas,
)

State = frozenset
Trace = tuple  # tuple[frozenset[str], ...]


def make_trace(states: Iterable[Iterable[str]]) -> Trace:
    return tuple(frozenset(s) for s in states)


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``prefix . loop . loop . ...``."""

    prefix: Trace
    loop: Trace

    def __post_init__(self):
        object.__setattr__(self, "prefix", make_trace(self.prefix))
        object.__setattr__(self, "loop", make_trace(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def __len__(self) -> int:
        """Number of distinct positions (prefix plus one loop copy)."""
        return len(self.prefix) + len(self.loop)

    def __getitem__(self, i: int) -> frozenset:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.loop[(i - p) % len(self.loop)]

    def successor(self, i: int) -> int:
        """Canonical position following ``i``."""
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def unroll(self, copies: int) -> Trace:
        return self.prefix + self.loop * copies


# Batched finite-trace evaluation

class TraceBatch:
    """Traces of one common length, evaluated together."""

    def __init__(self, traces: Sequence[Trace]):
        traces = [make_trace(t) for t in traces]
        if not traces:
            raise ValueError("empty batch")
        self.length = len(traces[0])
        if self.length == 0:
            raise ValueError("finite traces must be non-empty")
        if any(len(t) != self.length for t in traces):
            raise ValueError("all traces of a batch must have the same length")
        self.traces = traces
        self.full = (1 << len(traces)) - 1
        self._atoms: dict[str, list[int]] = {}

    def atom(self, name: str) -> list[int]:
        vec = self._atoms.get(name)
        if vec is None:
            vec = [0] * self.length
            for b, t in enumerate(self.traces):
                bit = 1 << b
                for i, state in enumerate(t):
                    if name in state:
                        vec[i] |= bit
            self._atoms[name] = vec
        return vec


def _node_vector(f: Formula, batch: TraceBatch, table: dict) -> list[int]:
    n = batch.length
    full = batch.full
    if isinstance(f, Atom):
        return batch.atom(f.name)
    if isinstance(f, NegAtom):
        return [full ^ v for v in batch.atom(f.name)]
    if isinstance(f, Top):
        return [full] * n
    if isinstance(f, Bottom):
        return [0] * n
    if isinstance(f, And):
        a, b = table[f.left], table[f.right]
        return [x & y for x, y in zip(a, b)]
    if isinstance(f, Or):
        a, b = table[f.left], table[f.right]
        return [x | y for x, y in zip(a, b)]
    if isinstance(f, Next):
        return table[f.arg][1:] + [0]
    if isinstance(f, WeakNext):
        return table[f.arg][1:] + [full]
    if isinstance(f, Yesterday):
        return [0] + table[f.arg][:-1]
    if isinstance(f, WeakYesterday):
        return [full] + table[f.arg][:-1]
    a, b = table[f.left], table[f.right]
    out = [0] * n
    if isinstance(f, Until):
        acc = 0
        for i in range(n - 1, -1, -1):
            acc = b[i] | (a[i] & acc)
            out[i] = acc
    elif isinstance(f, Release):
        acc = full
        for i in range(n - 1, -1, -1):
            acc = b[i] & (a[i] | acc)
            out[i] = acc
    elif isinstance(f, Since):
        acc = 0
        for i in range(n):
            acc = b[i] | (a[i] & acc)
            out[i] = acc
    elif isinstance(f, Triggered):
        acc = full
        for i in range(n):
            acc = b[i] & (a[i] | acc)
            out[i] = acc
    else:
        raise TypeError(f"not a formula node: {f!r}")
    return out


def batch_vectors(f: Formula, batch: TraceBatch, table: dict | None = None) -> list[int]:
    """Per-position bit-sets for ``f`` over ``batch``.

    ``table`` maps already evaluated subformulas to their vectors; it is
    filled in place, so callers can share it across formulas evaluated on
    the same batch.
    """
    if table is None:
        table = {}
    if f in table:
        return table[f]
    for node in subformulas(f):
        if node not in table:
            table[node] = _node_vector(node, batch, table)
    return table[f]


def _check_alphabet(f: Formula, alphabet: Alphabet | None):
    if alphabet is None:
        return
    for name in sorted(atoms(f)):
        if name not in alphabet:
            raise UnknownAtomError(name)


def eval_finite(f: Formula, t: Trace, i: int = 0, alphabet: Alphabet | None = None) -> bool:
    """Whether position ``i`` of the finite trace ``t`` satisfies ``f``."""
    t = make_trace(t)
    if not t:
        raise ValueError("finite traces must be non-empty")
    if not 0 <= i < len(t):
        raise IndexError(f"position {i} out of range for a trace of length {len(t)}")
    _check_alphabet(f, alphabet)
    return bool(batch_vectors(f, TraceBatch([t]))[i])


def eval_model_finite(f: Formula, t: Trace, mode: str = "first") -> bool:
    """Whether ``t`` is a model of ``f``.

    ``mode="first"`` evaluates at position 0. ``mode="last"`` evaluates a
    pure-past formula at the final position of ``t``.
    """
    t = make_trace(t)
    if mode == "first":
        return eval_finite(f, t, 0)
    if mode == "last":
        if not is_pure_past(f):
            raise UnsupportedFormulaError("last-state evaluation needs a pure-past formula")
        return eval_finite(f, t, len(t) - 1)
    raise ValueError(f"unknown mode {mode!r}")


# Lasso evaluation

def _lasso_future_table(f: Formula, w: Lasso) -> dict[Formula, list[bool]]:
    m = len(w)
    succ = [w.successor(i) for i in range(m)]
    table: dict[Formula, list[bool]] = {}
    for node in subformulas(f):
        if isinstance(node, Atom):
            vec = [node.name in w[i] for i in range(m)]
        elif isinstance(node, NegAtom):
            vec = [node.name not in w[i] for i in range(m)]
        elif isinstance(node, Top):
            vec = [True] * m
        elif isinstance(node, Bottom):
            vec = [False] * m
        elif isinstance(node, And):
            vec = [x and y for x, y in zip(table[node.left], table[node.right])]
        elif isinstance(node, Or):
            vec = [x or y for x, y in zip(table[node.left], table[node.right])]
        elif isinstance(node, (Next, WeakNext)):
            arg = table[node.arg]
            vec = [arg[succ[i]] for i in range(m)]
        elif isinstance(node, (Until, Release)):
            a, b = table[node.left], table[node.right]
            until = isinstance(node, Until)
            # least fixpoint for U (start false), greatest for R (start true)
            vec = [not until] * m
            changed = True
            while changed:
                changed = False
                for i in range(m - 1, -1, -1):
                    nxt = vec[succ[i]]
                    val = (b[i] or (a[i] and nxt)) if until else (b[i] and (a[i] or nxt))
                    if val != vec[i]:
                        vec[i] = val
                        changed = True
        else:
            raise UnsupportedFormulaError(f"past operator in future-only lasso evaluation: {node}")
        table[node] = vec
    return table


def lasso_acceptance_stream(alpha: Formula, w: Lasso) -> tuple[list[bool], int]:
    """Values of the pure-past ``alpha`` along ``w`` as a lasso of bits.

    Returns ``(bits, start)``: position ``k`` of ``w`` has value
    ``bits[k]`` for ``k < len(bits)``, and beyond that the segment
    ``bits[start:]`` repeats.
    """
    from .past_dfa import build_past_dfa

    dfa = build_past_dfa(alpha)
    p, l = len(w.prefix), len(w.loop)
    seen: dict[tuple[int, object], int] = {}
    bits: list[bool] = []
    state = dfa.START
    k = 0
    while True:
        if k >= p:
            key = ((k - p) % l, state)
            if key in seen:
                return bits, seen[key]
            seen[key] = k
        state = dfa.step(state, w[k])
        bits.append(dfa.accepting(state))
        k += 1


def eval_lasso(f: Formula, w: Lasso, i: int = 0) -> bool:
    """Whether position ``i`` of the lasso word ``w`` satisfies ``f``.

    Supported shapes: pure-future formulas, and ``F alpha`` / ``G alpha``
    with a pure-past ``alpha`` (evaluated at position 0 only).
    """
    if is_pure_future(f):
        if i >= len(w):
            # positions past the first loop copy repeat
            i = len(w.prefix) + (i - len(w.prefix)) % len(w.loop)
        return _lasso_future_table(f, w)[f][i]
    if (is_falpha(f) or is_galpha(f)) and i == 0:
        bits, _ = lasso_acceptance_stream(f.right, w)
        return any(bits) if is_falpha(f) else all(bits)
    raise UnsupportedFormulaError(
        "lasso evaluation supports pure-future formulas, F alpha and G alpha only"
    )


def concat_is_model(f: Formula, u: Trace, v: Lasso) -> bool:
    """Whether the infinite word ``u . v`` is a model of ``f``."""
    return eval_lasso(f, Lasso(make_trace(u) + v.prefix, v.loop))


# Text format: {p};{p,q};({q})*

_STATE = re.compile(r"\s*\{([^{}]*)\}\s*")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _parse_states(text: str, offset: int) -> Trace:
    states = []
    if not text.strip():
        return ()
    pos = 0
    for chunk in text.split(";"):
        m = _STATE.fullmatch(chunk)
        if m is None:
            raise ParseError(f"malformed state {chunk.strip()!r}", offset + pos)
        names = [n.strip() for n in m.group(1).split(",") if n.strip()]
        for n in names:
            if not _NAME.match(n):
                raise ParseError(f"invalid atom name {n!r}", offset + pos)
        states.append(frozenset(names))
        pos += len(chunk) + 1
    return tuple(states)


def parse_trace(text: str) -> Trace | Lasso:
    """Parse a finite trace or, when a ``( ... )*`` loop is present, a lasso."""
    start = text.find("(")
    if start < 0:
        states = _parse_states(text, 0)
        if not states:
            raise ParseError("finite trace must have at least one state", 0)
        return states
    head = text[:start].rstrip()
    if head and not head.endswith(";"):
        raise ParseError("expected ';' before the loop", start)
    end = text.rfind(")")
    if end < start or text[end + 1:].strip() != "*":
        raise ParseError("loop must be written as ( ... )*", start)
    prefix = _parse_states(head[:-1] if head else "", 0)
    loop = _parse_states(text[start + 1:end], start + 1)
    if not loop:
        raise ParseError("loop must have at least one state", start)
    return Lasso(prefix, loop)


def format_state(state: Iterable[str]) -> str:
    return "{" + ",".join(sorted(state)) + "}"


def format_trace(t: Trace | Lasso) -> str:
    if isinstance(t, Lasso):
        loop = "(" + ";".join(format_state(s) for s in t.loop) + ")*"
        return ";".join([format_state(s) for s in t.prefix] + [loop])
    return ";".join(format_state(s) for s in t)
