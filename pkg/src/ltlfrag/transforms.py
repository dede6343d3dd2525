"""Formula-to-formula reductions.

* ``translate_f`` / ``translate_g`` embed finite-trace LTL into
  cosafety LTL over infinite traces, using a fresh atom ``endt`` that
  marks where the finite trace stops.
* ``mealy_shift`` and ``dualize`` swap the roles of the two players.
* ``pastify`` turns a formula whose future part is a single ``X`` on
  literals into a pure-past formula evaluated one step later.
* ``galpha_dual`` combines the three to map ``G alpha`` to an ``F alpha``
  instance and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import FragmentError
from .formula import (
    BOT,
    TOP,
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
    conj,
    has_past,
    is_falpha,
    is_galpha,
    negate_nnf,
    render,
)

ENDT = "endt"


@dataclass(frozen=True)
class PartitionedAlphabet:
    """Propositions split between Controller (``controllable``) and Environment."""

    controllable: frozenset[str]
    uncontrollable: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "controllable", frozenset(self.controllable))
        object.__setattr__(self, "uncontrollable", frozenset(self.uncontrollable))
        both = self.controllable & self.uncontrollable
        if both:
            raise ValueError(f"propositions both controllable and uncontrollable: {sorted(both)}")

    @classmethod
    def of(cls, inputs: Iterable[str] = (), outputs: Iterable[str] = ()) -> PartitionedAlphabet:
        """Build from Environment ``inputs`` and Controller ``outputs``."""
        return cls(frozenset(outputs), frozenset(inputs))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self.controllable | self.uncontrollable))

    @property
    def inputs(self) -> tuple[str, ...]:
        return tuple(sorted(self.uncontrollable))

    @property
    def outputs(self) -> tuple[str, ...]:
        return tuple(sorted(self.controllable))

    def swapped(self) -> PartitionedAlphabet:
        return PartitionedAlphabet(self.uncontrollable, self.controllable)

    def covering(self, f: Formula) -> PartitionedAlphabet:
        """Same partition, with atoms of ``f`` not yet assigned made uncontrollable."""
        extra = atoms(f) - self.controllable - self.uncontrollable
        return PartitionedAlphabet(self.controllable, self.uncontrollable | extra)


def map_literals(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every literal ``l`` replaced by ``fn(l)``."""
    if isinstance(f, (Atom, NegAtom)):
        return fn(f)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, (Next, WeakNext, Yesterday, WeakYesterday)):
        return type(f)(map_literals(f.arg, fn))
    return type(f)(map_literals(f.left, fn), map_literals(f.right, fn))


# f and g

def _check_translatable(phi: Formula):
    if has_past(phi):
        raise FragmentError(f"translate_f needs a pure-future formula: {render(phi)}")
    if ENDT in atoms(phi):
        raise FragmentError(f"the atom {ENDT!r} is reserved")


def translate_f(phi: Formula, guarded: bool = True) -> Formula:
    """Cosafety formula describing the finite models of ``phi`` on infinite words.

    A finite trace of length ``m`` corresponds to an infinite word whose
    first ``endt`` is at position ``m``. With ``guarded=False`` the until
    clauses only require ``!endt`` at the witness position, which lets a
    witness sit beyond the first ``endt`` when ``endt`` occurs again later.
    The default also requires ``!endt`` on the positions before the
    witness, so every witness lies inside the finite trace.
    """
    _check_translatable(phi)
    return _f(phi, guarded)


def _f(phi: Formula, guarded: bool) -> Formula:
    not_end = NegAtom(ENDT)
    end = Atom(ENDT)
    if isinstance(phi, (Atom, NegAtom, Top, Bottom)):
        return phi
    if isinstance(phi, And):
        return And(_f(phi.left, guarded), _f(phi.right, guarded))
    if isinstance(phi, Or):
        return Or(_f(phi.left, guarded), _f(phi.right, guarded))
    if isinstance(phi, Next):
        return Next(And(not_end, _f(phi.arg, guarded)))
    if isinstance(phi, WeakNext):
        return Next(Or(end, _f(phi.arg, guarded)))
    if isinstance(phi, Until):
        left, right = _f(phi.left, guarded), _f(phi.right, guarded)
        if guarded:
            left = And(not_end, left)
        return Until(left, And(not_end, right))
    if isinstance(phi, Release):
        left, right = _f(phi.left, guarded), _f(phi.right, guarded)
        to_end = Until(right, And(right, Next(end)))
        if guarded:
            return Or(to_end, Until(And(not_end, right), And(not_end, And(left, right))))
        return Or(to_end, Until(right, And(left, right)))
    raise FragmentError(f"translate_f needs a pure-future formula: {render(phi)}")


def translate_g(
    phi: Formula, part: PartitionedAlphabet | None = None, guarded: bool = True
) -> tuple[Formula, PartitionedAlphabet]:
    """``!endt & f(phi) & (!endt U endt)`` with ``endt`` made controllable.

    Without ``part`` every atom of ``phi`` is taken as controllable.
    """
    _check_translatable(phi)
    if part is None:
        part = PartitionedAlphabet(atoms(phi), frozenset())
    if ENDT in part.controllable | part.uncontrollable:
        raise FragmentError(f"the atom {ENDT!r} is reserved")
    body = conj([NegAtom(ENDT), _f(phi, guarded), Until(NegAtom(ENDT), Atom(ENDT))])
    return body, PartitionedAlphabet(part.controllable | {ENDT}, part.uncontrollable)


# Player swap

def mealy_shift(psi: Formula, part: PartitionedAlphabet) -> Formula:
    """Replace every uncontrollable literal ``l`` by ``X l``.

    Meant for infinite traces, where ``!X u`` and ``X !u`` coincide.
    """
    shifted = part.uncontrollable

    def shift(lit: Formula) -> Formula:
        return Next(lit) if lit.name in shifted else lit

    return map_literals(psi, shift)


def dualize(phi: Formula, part: PartitionedAlphabet) -> tuple[Formula, PartitionedAlphabet]:
    """The game of ``!phi`` with the players swapped.

    Over infinite traces ``phi`` is realizable exactly when the returned
    instance is not.
    """
    swapped = part.swapped()
    return mealy_shift(negate_nnf(phi), swapped), swapped


def _shift(beta: Formula) -> Formula:
    if isinstance(beta, (Atom, NegAtom)):
        return Yesterday(beta)
    if isinstance(beta, (Top, Bottom)):
        return beta
    if isinstance(beta, Next):
        if not isinstance(beta.arg, (Atom, NegAtom)):
            raise FragmentError(f"X applied to a non-literal: {render(beta)}")
        return beta.arg
    if isinstance(beta, And):
        return And(_shift(beta.left), _shift(beta.right))
    if isinstance(beta, Or):
        return Or(_shift(beta.left), _shift(beta.right))
    # The guards below rule out the position before the trace start,
    # which the shifted formula would otherwise treat as a real position.
    if isinstance(beta, Yesterday):
        return Yesterday(And(_shift(beta.arg), Yesterday(TOP)))
    if isinstance(beta, WeakYesterday):
        return Yesterday(Or(_shift(beta.arg), WeakYesterday(BOT)))
    if isinstance(beta, Since):
        return Since(_shift(beta.left), And(_shift(beta.right), Yesterday(TOP)))
    if isinstance(beta, Triggered):
        return Triggered(_shift(beta.left), Or(_shift(beta.right), WeakYesterday(BOT)))
    raise FragmentError(f"pastify accepts X only on literals, found: {render(beta)}")


def pastify(beta: Formula) -> Formula:
    """Pure-past formula that holds at ``i + 1`` exactly when ``beta`` holds at ``i``.

    ``beta`` may use past operators freely, but its only future operator
    must be ``X`` applied directly to literals. The correspondence holds
    at every position ``i`` with a successor.
    """
    return _shift(beta)


def galpha_dual(g_phi: Formula, part: PartitionedAlphabet) -> tuple[Formula, PartitionedAlphabet]:
    """Dual instance of ``G alpha`` (an ``F alpha``) or of ``F alpha`` (a ``G alpha``).

    Over infinite traces the input is realizable exactly when the output
    is not.
    """
    swapped = part.swapped()
    if is_galpha(g_phi):
        beta = mealy_shift(negate_nnf(g_phi.right), swapped)
        return Until(TOP, And(Yesterday(TOP), pastify(beta))), swapped
    if is_falpha(g_phi):
        beta = mealy_shift(negate_nnf(g_phi.right), swapped)
        return Release(BOT, Or(WeakYesterday(BOT), pastify(beta))), swapped
    raise FragmentError(f"galpha_dual needs an F alpha or G alpha formula: {render(g_phi)}")
