"""LTL with past in negation normal form.

Formulas are immutable trees of frozen dataclasses. Negation is only
available on atoms (``NegAtom``); the parser pushes every ``!`` down to
the leaves while reading, so every value of type ``Formula`` is already in
negation normal form.

Surface syntax::

    p  !p  true  false  a & b  a | b  a -> b  a <-> b
    X a  wX a  Y a  wY a  F a  G a  P a  H a
    a U b  a R b  a S b  a T b

Unary operators bind tightest, then the binary temporal operators
(right-associative), then ``&``, ``|``, ``->`` and ``<->``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import ParseError, UnknownAtomError


@dataclass(frozen=True, eq=False, slots=True)
class Formula:
    """Base class of all formula nodes.

    Equality is structural. The hash is computed once at construction
    so that formulas can key large memo tables cheaply.
    """

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def _key(self) -> tuple:
        return tuple(getattr(self, name) for name in self.__match_args__)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or other._hash != self._hash:
            return False
        return self._key() == other._key()

    def __str__(self) -> str:
        return render(self)

    def children(self) -> tuple[Formula, ...]:
        return ()


def _node(cls):
    return dataclass(frozen=True, eq=False, slots=True)(cls)


@_node
class Atom(Formula):
    name: str


@_node
class NegAtom(Formula):
    name: str


@_node
class Top(Formula):
    pass


@_node
class Bottom(Formula):
    pass


TOP = Top()
BOT = Bottom()


class _Unary(Formula):
    __slots__ = ()

    def children(self):
        return (self.arg,)


class _Binary(Formula):
    __slots__ = ()

    def children(self):
        return (self.left, self.right)


@_node
class And(_Binary):
    left: Formula
    right: Formula


@_node
class Or(_Binary):
    left: Formula
    right: Formula


@_node
class Next(_Unary):
    arg: Formula


@_node
class WeakNext(_Unary):
    arg: Formula


@_node
class Until(_Binary):
    left: Formula
    right: Formula


@_node
class Release(_Binary):
    left: Formula
    right: Formula


@_node
class Yesterday(_Unary):
    arg: Formula


@_node
class WeakYesterday(_Unary):
    arg: Formula


@_node
class Since(_Binary):
    left: Formula
    right: Formula


@_node
class Triggered(_Binary):
    left: Formula
    right: Formula


FUTURE_NODES = (Next, WeakNext, Until, Release)
PAST_NODES = (Yesterday, WeakYesterday, Since, Triggered)
LITERALS = (Atom, NegAtom)
CONSTANTS = (Top, Bottom)


# Builders for the derived operators.

def F(f: Formula) -> Formula:
    return Until(TOP, f)


def G(f: Formula) -> Formula:
    return Release(BOT, f)


def P(f: Formula) -> Formula:
    return Since(TOP, f)


def H(f: Formula) -> Formula:
    return Triggered(BOT, f)


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result = None
    for item in items:
        result = item if result is None else And(result, item)
    return TOP if result is None else result


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    result = None
    for item in items:
        result = item if result is None else Or(result, item)
    return BOT if result is None else result


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate_nnf(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return Or(And(a, b), And(negate_nnf(a), negate_nnf(b)))


def repeat(op, k: int, f: Formula) -> Formula:
    """Apply the unary constructor ``op`` ``k`` times, e.g. ``Y^k f``."""
    for _ in range(k):
        f = op(f)
    return f


# Negation

_DUAL_UNARY = {
    Next: WeakNext,
    WeakNext: Next,
    Yesterday: WeakYesterday,
    WeakYesterday: Yesterday,
}
_DUAL_BINARY = {
    And: Or,
    Or: And,
    Until: Release,
    Release: Until,
    Since: Triggered,
    Triggered: Since,
}


@lru_cache(maxsize=1 << 16)
def negate_nnf(f: Formula) -> Formula:
    """The negation normal form of ``!f``.

    Each node is replaced by its dual, so applying the function twice
    returns a formula equal to the input.
    """
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bottom):
        return TOP
    if isinstance(f, _Unary):
        return _DUAL_UNARY[type(f)](negate_nnf(f.arg))
    return _DUAL_BINARY[type(f)](negate_nnf(f.left), negate_nnf(f.right))


# Structural queries

def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen: set[Formula] = set()
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            order.append(node)
            continue
        stack.append((node, True))
        for child in reversed(node.children()):
            if child not in seen:
                stack.append((child, False))
    return order


def size(f: Formula) -> int:
    """Number of nodes of the syntax tree (shared subtrees counted again)."""
    return 1 + sum(size(c) for c in f.children())


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(
        node.name for node in subformulas(f) if isinstance(node, LITERALS)
    )


def has_future(f: Formula) -> bool:
    return any(isinstance(n, FUTURE_NODES) for n in subformulas(f))


def has_past(f: Formula) -> bool:
    return any(isinstance(n, PAST_NODES) for n in subformulas(f))


def is_pure_future(f: Formula) -> bool:
    return not has_past(f)


def is_pure_past(f: Formula) -> bool:
    return not has_future(f)


# Fragments

class Fragment(enum.Enum):
    LTLP = "LTLP"
    LTL = "LTL"
    LTLFP = "LTLFP"
    cosafetyLTL = "cosafetyLTL"
    safetyLTL = "safetyLTL"
    Falpha = "Falpha"
    Galpha = "Galpha"
    LTL_XF = "LTL_XF"
    LTL_wXG = "LTL_wXG"

    @classmethod
    def from_name(cls, name: str) -> Fragment:
        for frag in cls:
            if frag.value.lower() == name.lower():
                return frag
        raise ValueError(f"unknown fragment {name!r}")


def is_falpha(f: Formula) -> bool:
    return isinstance(f, Until) and isinstance(f.left, Top) and is_pure_past(f.right)


def is_galpha(f: Formula) -> bool:
    return isinstance(f, Release) and isinstance(f.left, Bottom) and is_pure_past(f.right)


def classify(f: Formula) -> frozenset[Fragment]:
    """All fragments whose syntactic restrictions ``f`` meets."""
    nodes = subformulas(f)
    kinds = {type(n) for n in nodes}
    past = bool(kinds & set(PAST_NODES))
    future = bool(kinds & set(FUTURE_NODES))
    result = {Fragment.LTLP}
    if not past:
        result.add(Fragment.LTL)
        if not kinds & {WeakNext, Release}:
            result.add(Fragment.cosafetyLTL)
            if all(isinstance(n.left, Top) for n in nodes if isinstance(n, Until)):
                result.add(Fragment.LTL_XF)
        if not kinds & {Next, Until}:
            result.add(Fragment.safetyLTL)
            if all(isinstance(n.left, Bottom) for n in nodes if isinstance(n, Release)):
                result.add(Fragment.LTL_wXG)
    if not future:
        result.add(Fragment.LTLFP)
    if is_falpha(f):
        result.add(Fragment.Falpha)
    if is_galpha(f):
        result.add(Fragment.Galpha)
    return frozenset(result)


# Alphabets

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

KEYWORDS = frozenset(
    {"X", "wX", "U", "R", "Y", "wY", "S", "T", "F", "G", "P", "H", "true", "false"}
)


@dataclass(frozen=True)
class Alphabet:
    """A finite, ordered set of proposition names."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("alphabet must not be empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in alphabet {names}")
        for name in names:
            if not _IDENT.match(name) or name in KEYWORDS:
                raise ValueError(f"invalid proposition name {name!r}")

    @classmethod
    def of(cls, *names: str) -> Alphabet:
        return cls(tuple(names))

    @classmethod
    def for_formula(cls, f: Formula) -> Alphabet:
        return cls(tuple(sorted(atoms(f))) or ("p",))

    def __contains__(self, name) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def letters(self) -> list[frozenset[str]]:
        return letters_over(self.names)


def letters_over(names: Iterable[str]) -> list[frozenset[str]]:
    """All subsets of ``names`` in bit-vector order; bit k is the k-th name."""
    names = tuple(names)
    return [
        frozenset(n for k, n in enumerate(names) if mask >> k & 1)
        for mask in range(1 << len(names))
    ]


# Parser

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)

_UNARY_WORDS = {
    "X": Next,
    "wX": WeakNext,
    "Y": Yesterday,
    "wY": WeakYesterday,
    "F": F,
    "G": G,
    "P": P,
    "H": H,
}
_BINARY_WORDS = {"U": Until, "R": Release, "S": Since, "T": Triggered}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "op" if m.group("op") is not None else "word"
        tokens.append((m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def position(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            raise ParseError("empty formula", 0)
        f = self.equivalence()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.position())
        return f

    def equivalence(self) -> Formula:
        f = self.implication()
        while self.peek() == "<->":
            self.take()
            f = iff(f, self.implication())
        return f

    def implication(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(f, self.implication())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.temporal()
        while self.peek() == "&":
            self.take()
            f = And(f, self.temporal())
        return f

    def temporal(self) -> Formula:
        f = self.unary()
        tok = self.peek()
        if tok in _BINARY_WORDS:
            self.take()
            return _BINARY_WORDS[tok](f, self.temporal())
        return f

    def unary(self) -> Formula:
        pos = self.position()
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula", pos)
        self.take()
        if tok == "!":
            return negate_nnf(self.unary())
        if tok in _UNARY_WORDS:
            return _UNARY_WORDS[tok](self.unary())
        if tok == "(":
            f = self.equivalence()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.position())
            self.take()
            return f
        if tok == "true":
            return TOP
        if tok == "false":
            return BOT
        if tok in _BINARY_WORDS or not _IDENT.match(tok):
            raise ParseError(f"unexpected token {tok!r}", pos)
        if self.alphabet is not None and tok not in self.alphabet:
            raise UnknownAtomError(tok, pos)
        return Atom(tok)


def parse(text: str, alphabet: Alphabet | None = None) -> Formula:
    """Parse ``text`` into an NNF formula.

    With an ``alphabet``, every atom must be one of its names.
    """
    return _Parser(text, alphabet).parse()


# Printer

_OR, _AND, _TEMPORAL, _ATOMIC = 1, 2, 3, 4

_UNARY_NAMES = {Next: "X", WeakNext: "wX", Yesterday: "Y", WeakYesterday: "wY"}
_BINARY_NAMES = {Until: "U", Release: "R", Since: "S", Triggered: "T"}
_SUGAR = {
    (Until, Top): "F",
    (Release, Bottom): "G",
    (Since, Top): "P",
    (Triggered, Bottom): "H",
}


def _wrap(pair: tuple[str, int], need: int) -> str:
    text, level = pair
    return text if level >= need else f"({text})"


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Atom):
        return f.name, _ATOMIC
    if isinstance(f, NegAtom):
        return "!" + f.name, _ATOMIC
    if isinstance(f, Top):
        return "true", _ATOMIC
    if isinstance(f, Bottom):
        return "false", _ATOMIC
    if isinstance(f, Or):
        return f"{_wrap(_render(f.left), _OR)} | {_wrap(_render(f.right), _AND)}", _OR
    if isinstance(f, And):
        return (
            f"{_wrap(_render(f.left), _AND)} & {_wrap(_render(f.right), _TEMPORAL)}",
            _AND,
        )
    if isinstance(f, _Unary):
        return f"{_UNARY_NAMES[type(f)]} {_wrap(_render(f.arg), _ATOMIC)}", _ATOMIC
    sugar = _SUGAR.get((type(f), type(f.left)))
    if sugar is not None:
        return f"{sugar} {_wrap(_render(f.right), _ATOMIC)}", _ATOMIC
    left = _wrap(_render(f.left), _ATOMIC)
    right = _wrap(_render(f.right), _TEMPORAL)
    return f"{left} {_BINARY_NAMES[type(f)]} {right}", _TEMPORAL


def render(f: Formula) -> str:
    """Text form of ``f`` that parses back to an equal formula."""
    return _render(f)[0]
