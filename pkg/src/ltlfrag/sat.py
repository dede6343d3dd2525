"""Satisfiability and validity, specialised per fragment.

Exact deciders:

* ``sat_finite_progression``: any pure-future formula, finite traces.
* ``sat_safety_finite_one_state``: safety fragments on finite traces; a
  model exists iff a one-letter model exists.
* ``sat_cosafety_infinite``: cosafety LTL and ``F alpha`` on infinite
  traces, through their finite-trace models.

``bounded_model_oracle`` is the exhaustive reference used by the tests.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import FragmentError, UnsupportedFormulaError
from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    Fragment,
    NegAtom,
    Next,
    Or,
    Release,
    Top,
    Until,
    WeakNext,
    atoms,
    classify,
    is_falpha,
    is_galpha,
    is_pure_future,
    letters_over,
    negate_nnf,
    render,
    subformulas,
)
from .past_dfa import build_past_dfa
from .progression import FALSE, accepts_last, dnf, progress
from .semantics import Lasso, TraceBatch, _lasso_future_table, batch_vectors, eval_finite, eval_lasso

SAFETY_FRAGMENTS = (Fragment.LTL_wXG, Fragment.safetyLTL, Fragment.Galpha)

DEFAULT_MAX_STATES = 200_000
DEFAULT_ORACLE_BUDGET = 500_000


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SatVerdict:
    """Outcome of a satisfiability check.

    ``witness`` is a finite trace or a ``Lasso`` whenever ``status`` is
    SAT. ``bound`` records the search limits of bounded procedures: an
    UNSAT carrying a bound only means "no model within the bound".
    """

    status: Status
    witness: tuple | Lasso | None = None
    bound: tuple | None = None
    method: str = ""
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT


def _names(f: Formula, names: Sequence[str] | None) -> tuple[str, ...]:
    return tuple(sorted(atoms(f))) if names is None else tuple(names)


def _checked(verdict: SatVerdict, f: Formula, mode: str = "first") -> SatVerdict:
    """Re-evaluate the witness of a SAT verdict; a mismatch is a bug."""
    if verdict.status is Status.SAT:
        w = verdict.witness
        if isinstance(w, Lasso):
            ok = eval_lasso(f, w)
        else:
            ok = eval_finite(f, w, 0 if mode == "first" else len(w) - 1)
        if not ok:
            raise AssertionError(f"witness does not satisfy {render(f)}")
    return verdict


# Exact deciders

def sat_finite_progression(
    f: Formula, max_states: int = DEFAULT_MAX_STATES, names: Sequence[str] | None = None
) -> SatVerdict:
    """Finite-trace satisfiability of a pure-future formula.

    Breadth-first search over progressed obligations; the first letter
    that satisfies the end-of-trace test closes a shortest witness.
    """
    if not is_pure_future(f):
        raise FragmentError(f"progression needs a pure-future formula: {render(f)}")
    letters = letters_over(_names(f, names))
    start = dnf(f)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        ob = queue.popleft()
        for letter in letters:
            if accepts_last(ob, letter):
                word = [letter]
                node = ob
                while parent[node] is not None:
                    node, prev_letter = parent[node]
                    word.append(prev_letter)
                witness = tuple(reversed(word))
                return _checked(
                    SatVerdict(Status.SAT, witness, method="progression",
                               stats={"states": len(parent)}),
                    f,
                )
        for letter in letters:
            nxt = progress(ob, letter)
            if nxt != FALSE and nxt not in parent:
                if len(parent) >= max_states:
                    return SatVerdict(Status.UNKNOWN, bound=(max_states,), method="progression",
                                      stats={"states": len(parent)})
                parent[nxt] = (ob, letter)
                queue.append(nxt)
    return SatVerdict(Status.UNSAT, method="progression", stats={"states": len(parent)})


def _require_safety(f: Formula):
    if not classify(f) & set(SAFETY_FRAGMENTS):
        raise FragmentError(f"not in LTL[wX,G], safetyLTL or G alpha: {render(f)}")


def sat_safety_finite_one_state(f: Formula, names: Sequence[str] | None = None) -> SatVerdict:
    """Finite-trace satisfiability for the safety fragments via one-letter traces."""
    _require_safety(f)
    for letter in letters_over(_names(f, names)):
        if eval_finite(f, (letter,), 0):
            return SatVerdict(Status.SAT, (letter,), method="one-state")
    return SatVerdict(Status.UNSAT, method="one-state")


def past_nonempty(
    alpha: Formula, max_states: int = DEFAULT_MAX_STATES, names: Sequence[str] | None = None
) -> SatVerdict:
    """Whether some finite word ends in a position satisfying the pure-past ``alpha``.

    The witness is a shortest such word.
    """
    dfa = build_past_dfa(alpha)
    letters = letters_over(_names(alpha, names))
    parent: dict = {dfa.START: None}
    queue = deque([dfa.START])
    while queue:
        q = queue.popleft()
        for letter in letters:
            r = dfa.step(q, letter)
            if r in parent:
                continue
            if len(parent) > max_states:
                return SatVerdict(Status.UNKNOWN, bound=(max_states,), method="past-dfa")
            parent[r] = (q, letter)
            if dfa.accepting(r):
                word = []
                node = r
                while parent[node] is not None:
                    node, a = parent[node]
                    word.append(a)
                witness = tuple(reversed(word))
                return _checked(
                    SatVerdict(Status.SAT, witness, method="past-dfa",
                               stats={"states": len(parent) - 1}),
                    alpha, mode="last",
                )
            queue.append(r)
    return SatVerdict(Status.UNSAT, method="past-dfa", stats={"states": len(parent) - 1})


def sat_cosafety_infinite(
    f: Formula, max_states: int = DEFAULT_MAX_STATES, names: Sequence[str] | None = None
) -> SatVerdict:
    """Infinite-trace satisfiability for cosafety LTL and ``F alpha``.

    Both fragments are suffix independent: a finite model extended by any
    infinite continuation is an infinite model, and every infinite model
    has a finite model as a prefix. The witness lasso repeats ``{}``
    after a finite model.
    """
    frags = classify(f)
    if Fragment.cosafetyLTL in frags:
        finite = sat_finite_progression(f, max_states, names)
        method = "progression"
    elif Fragment.Falpha in frags:
        finite = past_nonempty(f.right, max_states, names)
        method = "past-dfa"
    else:
        raise FragmentError(f"not in cosafetyLTL or F alpha: {render(f)}")
    if finite.status is not Status.SAT:
        return SatVerdict(finite.status, bound=finite.bound, method=method, stats=finite.stats)
    witness = Lasso(finite.witness, (frozenset(),))
    return _checked(SatVerdict(Status.SAT, witness, method=method, stats=finite.stats), f)


# Bounded oracle

_ATOM, _NEG, _TOP, _BOT, _AND, _OR, _X, _WX, _U, _R = range(10)


class _FutureProgram:
    """Bit-vector valuations of all subformulas of a pure-future formula."""

    def __init__(self, f: Formula):
        self.nodes = subformulas(f)
        index = {n: k for k, n in enumerate(self.nodes)}
        ops = []
        for n in self.nodes:
            if isinstance(n, Atom):
                ops.append((_ATOM, n.name, 0))
            elif isinstance(n, NegAtom):
                ops.append((_NEG, n.name, 0))
            elif isinstance(n, Top):
                ops.append((_TOP, 0, 0))
            elif isinstance(n, Bottom):
                ops.append((_BOT, 0, 0))
            elif isinstance(n, And):
                ops.append((_AND, index[n.left], index[n.right]))
            elif isinstance(n, Or):
                ops.append((_OR, index[n.left], index[n.right]))
            elif isinstance(n, Next):
                ops.append((_X, index[n.arg], 0))
            elif isinstance(n, WeakNext):
                ops.append((_WX, index[n.arg], 0))
            elif isinstance(n, Until):
                ops.append((_U, index[n.left], index[n.right]))
            elif isinstance(n, Release):
                ops.append((_R, index[n.left], index[n.right]))
            else:
                raise UnsupportedFormulaError(f"past operator in {render(f)}")
        self.ops = ops
        self.root_bit = 1 << (len(self.nodes) - 1)

    def before(self, letter: frozenset, nxt: int | None) -> int:
        """Valuation at a position reading ``letter``, given the next valuation.

        ``nxt is None`` means the position is the last one of a finite trace.
        """
        v = 0
        for k, (op, a, b) in enumerate(self.ops):
            if op == _ATOM:
                bit = a in letter
            elif op == _NEG:
                bit = a not in letter
            elif op == _TOP:
                bit = True
            elif op == _BOT:
                bit = False
            elif op == _AND:
                bit = bool(v >> a & 1 and v >> b & 1)
            elif op == _OR:
                bit = bool(v >> a & 1 or v >> b & 1)
            elif op == _X:
                bit = nxt is not None and bool(nxt >> a & 1)
            elif op == _WX:
                bit = nxt is None or bool(nxt >> a & 1)
            elif op == _U:
                bit = bool(v >> b & 1) or (
                    bool(v >> a & 1) and nxt is not None and bool(nxt >> k & 1)
                )
            else:
                bit = bool(v >> b & 1) and (
                    bool(v >> a & 1) or nxt is None or bool(nxt >> k & 1)
                )
            if bit:
                v |= 1 << k
        return v

    def loop_valuations(self, loop: tuple) -> list[int]:
        table = _lasso_future_table(self.nodes[-1], Lasso((), loop))
        out = []
        for i in range(len(loop)):
            v = 0
            for k, n in enumerate(self.nodes):
                if table[n][i]:
                    v |= 1 << k
            out.append(v)
        return out


def lyndon_words(letters: Sequence, max_len: int) -> list[tuple]:
    """Words strictly smaller than all their proper rotations (letters ordered by index)."""
    out = []
    for n in range(1, max_len + 1):
        for w in product(range(len(letters)), repeat=n):
            if all(w < w[r:] + w[:r] for r in range(1, n)):
                out.append(tuple(letters[i] for i in w))
    return out


def _search_back(prog: _FutureProgram, letters, seeds: dict, max_steps: int, budget: int):
    """Extend seed valuations backwards by up to ``max_steps`` letters.

    ``seeds`` maps each starting valuation to its origin. Returns the
    first valuation found with the root bit set and the table of parents;
    the table is ``None`` when more than ``budget`` valuations were seen.
    """
    parent: dict = {}
    frontier = []
    for v, origin in seeds.items():
        if v not in parent:
            parent[v] = ("origin", origin)
            frontier.append(v)
    for v in frontier:
        if v & prog.root_bit:
            return v, parent
    for _ in range(max_steps):
        new = []
        for v in frontier:
            for letter in letters:
                u = prog.before(letter, v)
                if u not in parent:
                    if len(parent) >= budget:
                        return None, None
                    parent[u] = ("step", letter, v)
                    if u & prog.root_bit:
                        return u, parent
                    new.append(u)
        frontier = new
        if not frontier:
            break
    return None, parent


def _trail(parent: dict, v: int) -> tuple[list, object]:
    letters = []
    entry = parent[v]
    while entry[0] == "step":
        letters.append(entry[1])
        entry = parent[entry[2]]
    return letters, entry[1]


def bounded_model_oracle(
    f: Formula,
    max_len: int,
    max_loop: int | None = None,
    names: Sequence[str] | None = None,
    mode: str = "first",
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> SatVerdict:
    """Exhaustive model search within bounds.

    With ``max_loop=None`` the search covers every finite trace of length
    at most ``max_len``. Otherwise it covers every lasso whose prefix has
    at most ``max_len`` and whose loop at most ``max_loop`` letters.
    UNSAT means no model within those bounds. When more than ``budget``
    candidates would have to be examined without finding a model, the
    answer is UNKNOWN.
    """
    names = _names(f, names)
    letters = letters_over(names)
    if max_loop is None:
        return _bounded_finite(f, max_len, letters, mode, budget)
    bound = (max_len, max_loop)
    if is_pure_future(f):
        prog = _FutureProgram(f)
        seeds: dict = {}
        for loop in lyndon_words(letters, max_loop):
            for r, v in enumerate(prog.loop_valuations(loop)):
                seeds.setdefault(v, loop[r:] + loop[:r])
        hit, parent = _search_back(prog, letters, seeds, max_len, budget)
        if hit is None:
            if parent is None:
                return SatVerdict(Status.UNKNOWN, bound=bound, method="lasso-oracle")
            return SatVerdict(Status.UNSAT, bound=bound, method="lasso-oracle",
                              stats={"valuations": len(parent)})
        prefix, loop = _trail(parent, hit)
        return _checked(SatVerdict(Status.SAT, Lasso(tuple(prefix), loop), bound=bound,
                                   method="lasso-oracle"), f)
    if is_falpha(f) or is_galpha(f):
        loops = [
            w[r:] + w[:r] for w in lyndon_words(letters, max_loop) for r in range(len(w))
        ]
        if sum(len(letters) ** n for n in range(max_len + 1)) * len(loops) > budget:
            return SatVerdict(Status.UNKNOWN, bound=bound, method="lasso-oracle")
        for n in range(max_len + 1):
            for prefix in product(letters, repeat=n):
                for loop in loops:
                    w = Lasso(prefix, loop)
                    if eval_lasso(f, w):
                        return SatVerdict(Status.SAT, w, bound=bound, method="lasso-oracle")
        return SatVerdict(Status.UNSAT, bound=bound, method="lasso-oracle")
    raise UnsupportedFormulaError(
        "lasso oracle supports pure-future formulas, F alpha and G alpha only"
    )


def _bounded_finite(f: Formula, max_len: int, letters, mode: str, budget: int) -> SatVerdict:
    bound = (max_len,)
    if is_pure_future(f) and mode == "first":
        prog = _FutureProgram(f)
        seeds = {}
        for letter in letters:
            seeds.setdefault(prog.before(letter, None), letter)
        hit, parent = _search_back(prog, letters, seeds, max_len - 1, budget)
        if hit is None:
            status = Status.UNKNOWN if parent is None else Status.UNSAT
            return SatVerdict(status, bound=bound, method="finite-oracle")
        prefix, last = _trail(parent, hit)
        return _checked(SatVerdict(Status.SAT, tuple(prefix) + (last,), bound=bound,
                                   method="finite-oracle"), f)
    if sum(len(letters) ** n for n in range(1, max_len + 1)) > budget:
        return SatVerdict(Status.UNKNOWN, bound=bound, method="finite-oracle")
    for n in range(1, max_len + 1):
        traces = list(product(letters, repeat=n))
        vec = batch_vectors(f, TraceBatch(traces))
        mask = vec[0] if mode == "first" else vec[-1]
        if mask:
            b = (mask & -mask).bit_length() - 1
            return _checked(SatVerdict(Status.SAT, tuple(traces[b]), bound=bound,
                                       method="finite-oracle"), f, mode)
    return SatVerdict(Status.UNSAT, bound=bound, method="finite-oracle")


# Dispatch

def sat(
    f: Formula,
    kind: str = "finite",
    method: str = "auto",
    max_states: int = DEFAULT_MAX_STATES,
    max_len: int = 4,
    max_loop: int = 4,
    names: Sequence[str] | None = None,
) -> SatVerdict:
    """Satisfiability over ``kind`` traces using the most specific decider.

    ``method`` is one of ``auto``, ``one-state``, ``progression``,
    ``cosafety``, ``past-dfa`` or ``oracle``. Searches that are only
    complete within a bound never answer UNSAT through this function;
    they answer UNKNOWN instead.
    """
    if kind not in ("finite", "infinite"):
        raise ValueError(f"unknown trace kind {kind!r}")
    frags = classify(f)
    if method == "auto":
        if kind == "finite":
            if frags & set(SAFETY_FRAGMENTS):
                method = "one-state"
            elif Fragment.LTL in frags:
                method = "progression"
            elif Fragment.Falpha in frags:
                method = "past-dfa"
            else:
                method = "oracle"
        else:
            if frags & {Fragment.cosafetyLTL, Fragment.Falpha}:
                method = "cosafety"
            else:
                method = "oracle"
    if method == "one-state":
        if kind != "finite":
            raise FragmentError("the one-state decider is for finite traces")
        return sat_safety_finite_one_state(f, names)
    if method == "progression":
        if kind == "finite":
            return sat_finite_progression(f, max_states, names)
        return sat_cosafety_infinite(f, max_states, names)
    if method == "cosafety":
        return sat_cosafety_infinite(f, max_states, names)
    if method == "past-dfa":
        if not is_falpha(f):
            raise FragmentError(f"not an F alpha formula: {render(f)}")
        v = past_nonempty(f.right, max_states, names)
        if kind == "finite" or v.status is not Status.SAT:
            return v
        return _checked(SatVerdict(Status.SAT, Lasso(v.witness, (frozenset(),)),
                                   method="past-dfa", stats=v.stats), f)
    if method == "oracle":
        v = bounded_model_oracle(f, max_len, None if kind == "finite" else max_loop, names)
        if v.status is Status.UNSAT:
            return SatVerdict(Status.UNKNOWN, bound=v.bound, method=v.method, stats=v.stats)
        return v
    raise ValueError(f"unknown method {method!r}")


class Validity(str, enum.Enum):
    VALID = "VALID"
    INVALID = "INVALID"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ValidVerdict:
    status: Validity
    counterexample: tuple | Lasso | None = None
    method: str = ""


def valid(f: Formula, kind: str = "finite", **options) -> ValidVerdict:
    """Validity as unsatisfiability of the negation.

    A counterexample, when found, is a model of ``negate_nnf(f)``.
    """
    v = sat(negate_nnf(f), kind, **options)
    if v.status is Status.SAT:
        return ValidVerdict(Validity.INVALID, v.witness, v.method)
    if v.status is Status.UNSAT:
        return ValidVerdict(Validity.VALID, None, v.method)
    return ValidVerdict(Validity.UNKNOWN, None, v.method)
