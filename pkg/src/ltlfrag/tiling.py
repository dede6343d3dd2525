"""Corridor tiling games and their encoding as ``G alpha`` realizability.

Cells of a corridor of height ``n`` are filled in column-major order:
cell ``k`` sits in column ``k // n`` and row ``k % n``. Constructor
places the tiles of the even cells, Saboteur those of the odd cells.
Every placed tile must fit:

* border rows (``0`` and ``n - 1``) carry the border tile;
* ``(left, tile)`` is in ``H`` for the cell one column to the left;
* ``(below, tile)`` is in ``V`` for the cell below in the same column.

If the player to move has no fitting tile, Saboteur wins; Constructor
wins by keeping the game going forever.

In the encoding each trace position is one cell. Controller owns
``<t>_c`` for every tile ``t`` plus the row marker ``b``; Environment owns
``<t>_u``.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError
from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Formula,
    NegAtom,
    Or,
    P,
    WeakYesterday,
    Yesterday,
    conj,
    disj,
    G,
    iff,
    implies,
    negate_nnf,
    repeat,
)
from .realize import RealStatus, RealizabilityInstance, real_galpha_infinite
from .transforms import PartitionedAlphabet

BORDER_MARK = "b"


@dataclass(frozen=True)
class TilingStructure:
    tiles: tuple[str, ...]
    border: str
    H: frozenset[tuple[str, str]]
    V: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        object.__setattr__(self, "H", frozenset(self.H))
        object.__setattr__(self, "V", frozenset(self.V))
        if not self.tiles:
            raise ValueError("a tiling structure needs at least one tile")
        if len(set(self.tiles)) != len(self.tiles):
            raise ValueError("duplicate tile names")
        for t in self.tiles:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", t):
                raise ValueError(f"tile names must be alphanumeric: {t!r}")
        if self.border not in self.tiles:
            raise ValueError(f"border tile {self.border!r} is not a tile")
        for a, b in self.H | self.V:
            if a not in self.tiles or b not in self.tiles:
                raise ValueError(f"relation pair ({a}, {b}) uses an unknown tile")

    @classmethod
    def total(cls, tiles: Iterable[str], border: str) -> TilingStructure:
        tiles = tuple(tiles)
        pairs = frozenset((a, b) for a in tiles for b in tiles)
        return cls(tiles, border, pairs, pairs)


def controlled(t: str) -> str:
    return f"{t}_c"


def uncontrolled(t: str) -> str:
    return f"{t}_u"


def parse_tiling(text: str) -> tuple[int | None, TilingStructure]:
    """Read ``tiles: a b; border: a; H: a>a, a>b; V: a>a; n: 3``."""
    fields: dict[str, str] = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {part.strip()!r}")
        fields[key.strip()] = value.strip()
    for key in ("tiles", "border"):
        if key not in fields:
            raise ParseError(f"missing field {key!r}")

    def pairs(key: str) -> frozenset:
        out = set()
        for item in re.split(r"[,\s]+", fields.get(key, "").strip()):
            if not item:
                continue
            a, sep, b = item.partition(">")
            if not sep or not a or not b:
                raise ParseError(f"malformed pair {item!r} in {key}")
            out.add((a, b))
        return frozenset(out)

    try:
        ts = TilingStructure(tuple(fields["tiles"].split()), fields["border"], pairs("H"), pairs("V"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    n = None
    if "n" in fields:
        try:
            n = int(fields["n"])
        except ValueError as exc:
            raise ParseError(f"n must be an integer, got {fields['n']!r}") from exc
    return n, ts


def tiling_partition(ts: TilingStructure) -> PartitionedAlphabet:
    return PartitionedAlphabet(
        frozenset(controlled(t) for t in ts.tiles) | {BORDER_MARK},
        frozenset(uncontrolled(t) for t in ts.tiles),
    )


def _exactly_one(props: list[Formula]) -> Formula:
    return And(
        disj(props),
        conj(Or(negate_nnf(a), negate_nnf(b)) for i, a in enumerate(props) for b in props[i + 1:]),
    )


def encode_galpha(n: int, ts: TilingStructure, verbatim: bool = False) -> RealizabilityInstance:
    """The ``G alpha`` instance realizable iff Constructor wins the corridor game.

    ``verbatim=True`` builds the unrepaired form of the reduction instead.
    That formula is false at position 0 on every trace (its first-column
    vertical check needs a predecessor), so it is kept only for inspection.
    """
    if n < 2:
        raise ValueError("the corridor height must be at least 2")
    alpha = _verbatim_alpha(n, ts) if verbatim else _alpha(n, ts)
    return RealizabilityInstance(G(alpha), tiling_partition(ts), "infinite")


def _alpha(n: int, ts: TilingStructure) -> Formula:
    b = Atom(BORDER_MARK)
    u = {t: Atom(uncontrolled(t)) for t in ts.tiles}
    c = {t: Atom(controlled(t)) for t in ts.tiles}
    tile = {t: Or(u[t], c[t]) for t in ts.tiles}

    first = WeakYesterday(BOT)
    col0 = repeat(WeakYesterday, n, BOT)
    top0 = And(col0, repeat(Yesterday, n - 1, TOP))
    border = Or(And(col0, Or(first, top0)), And(negate_nnf(col0), repeat(Yesterday, n, b)))
    env_turn = Yesterday(disj(c.values()))
    ctrl_turn = negate_nnf(env_turn)
    if n == 2:
        row0 = ctrl_turn
    else:
        row0 = Or(first, And(repeat(Yesterday, n, b), Yesterday(b)))

    def fits(t: str) -> Formula:
        parts = []
        if t != ts.border:
            parts.append(negate_nnf(border))
        left = disj(repeat(Yesterday, n, tile[a]) for a in ts.tiles if (a, t) in ts.H)
        parts.append(Or(col0, left))
        below = disj(Yesterday(tile[a]) for a in ts.tiles if (a, t) in ts.V)
        parts.append(Or(row0, below))
        return conj(parts)

    fit = {t: fits(t) for t in ts.tiles}
    exists_fit = disj(fit.values())

    def one_fitting(props: dict) -> Formula:
        return disj(
            conj([props[t], fit[t]] + [negate_nnf(props[s]) for s in ts.tiles if s != t])
            for t in ts.tiles
        )

    env_fault = Or(
        And(ctrl_turn, disj(u.values())),
        And(env_turn, And(exists_fit, negate_nnf(one_fitting(u)))),
    )
    guarantee = conj([
        iff(b, border),
        implies(ctrl_turn, one_fitting(c)),
        implies(env_turn, And(conj(negate_nnf(x) for x in c.values()), exists_fit)),
    ])
    return Or(P(env_fault), guarantee)


def _verbatim_alpha(n: int, ts: TilingStructure) -> Formula:
    b = Atom(BORDER_MARK)
    u = {t: Atom(uncontrolled(t)) for t in ts.tiles}
    c = {t: Atom(controlled(t)) for t in ts.tiles}
    tile_of = {t: Or(u[t], c[t]) for t in ts.tiles}
    t_bor = tile_of[ts.border]

    env_plays = disj(u.values())
    ctrl_plays = disj(c.values())
    firstplayer = ctrl_plays
    altern = And(iff(env_plays, Yesterday(ctrl_plays)), iff(env_plays, negate_nnf(ctrl_plays)))
    incolumn1 = repeat(WeakYesterday, n, BOT)
    bottomleftangle = WeakYesterday(BOT)
    topleftangle = And(repeat(WeakYesterday, n, BOT), repeat(Yesterday, n - 1, TOP))
    tile = _exactly_one(list(tile_of.values()))
    bcolumn = conj(
        [b, repeat(Yesterday, n - 1, b)]
        + [repeat(Yesterday, i, NegAtom(BORDER_MARK)) for i in range(1, n - 1)]
    )
    bordertiling = And(
        Or(And(NegAtom(BORDER_MARK), repeat(Yesterday, n, NegAtom(BORDER_MARK))),
           And(b, repeat(Yesterday, n, b))),
        Or(NegAtom(BORDER_MARK), t_bor),
    )
    hor = disj(And(tile_of[x], repeat(Yesterday, n, tile_of[y])) for x, y in sorted(ts.H))
    ver = Or(
        And(Yesterday(b), Yesterday(Yesterday(NegAtom(BORDER_MARK)))),
        disj(And(tile_of[x], Yesterday(tile_of[y])) for x, y in sorted(ts.V)),
    )
    return conj([
        implies(bottomleftangle, firstplayer),
        implies(negate_nnf(bottomleftangle), And(altern, tile)),
        implies(topleftangle, bcolumn),
        implies(incolumn1, And(ver, implies(b, t_bor))),
        implies(negate_nnf(incolumn1), conj([bordertiling, hor, ver])),
    ])


# Brute-force game

class TilingOutcome(str, enum.Enum):
    CONSTRUCTOR_WINS = "CONSTRUCTOR-WINS"
    SABOTEUR_WINS = "SABOTEUR-WINS"
    UNKNOWN = "UNKNOWN"


def _fitting(n: int, ts: TilingStructure, window: tuple, k: int) -> list[str]:
    """Tiles that may go into cell ``k``; ``window`` holds the last ``n`` tiles."""
    y = k % n
    out = []
    for t in ts.tiles:
        if y in (0, n - 1) and t != ts.border:
            continue
        if k >= n and (window[0], t) not in ts.H:
            continue
        if y > 0 and (window[-1], t) not in ts.V:
            continue
        out.append(t)
    return out


def solve_tiling_game_bruteforce(
    n: int, ts: TilingStructure, depth: int | None = None, max_positions: int = 1_000_000
) -> TilingOutcome:
    """Decide the corridor game by a safety fixpoint over game positions.

    A position is the window of the last ``n`` tiles together with the
    cell index folded to ``n + (k - n) mod 2n`` once the first column is
    done, which preserves both the row and the parity. The position graph
    is finite, so the answer is exact unless more than ``max_positions``
    positions are reached, or cells past ``depth`` when a depth is given.
    """
    if n < 2:
        raise ValueError("the corridor height must be at least 2")

    def fold(k: int) -> int:
        return k if k < n else n + (k - n) % (2 * n)

    root = ((None,) * n, 0)
    moves: dict = {}
    queue = deque([root])
    seen = {root}
    while queue:
        window, k = queue.popleft()
        succ = []
        for t in _fitting(n, ts, window, k):
            nxt = (window[1:] + (t,), fold(k + 1))
            succ.append(nxt)
            if nxt not in seen:
                if len(seen) >= max_positions or (depth is not None and k + 1 > depth):
                    return TilingOutcome.UNKNOWN
                seen.add(nxt)
                queue.append(nxt)
        moves[(window, k)] = succ

    # greatest fixpoint: positions from which Constructor survives forever
    alive = set(moves)
    changed = True
    while changed:
        changed = False
        for pos in list(alive):
            succ = moves[pos]
            if pos[1] % 2 == 0:
                keep = any(m in alive for m in succ)
            else:
                keep = bool(succ) and all(m in alive for m in succ)
            if not keep:
                alive.discard(pos)
                changed = True
    return TilingOutcome.CONSTRUCTOR_WINS if root in alive else TilingOutcome.SABOTEUR_WINS


@dataclass(frozen=True)
class Crosscheck:
    encoding: RealStatus
    bruteforce: TilingOutcome

    @property
    def conclusive(self) -> bool:
        return self.encoding is not RealStatus.UNKNOWN and self.bruteforce is not TilingOutcome.UNKNOWN

    def __bool__(self) -> bool:
        return self.agree

    @property
    def agree(self) -> bool:
        return self.conclusive and (
            (self.encoding is RealStatus.REALIZABLE)
            == (self.bruteforce is TilingOutcome.CONSTRUCTOR_WINS)
        )


def crosscheck_encoding(n: int, ts: TilingStructure, max_states: int = 200_000) -> Crosscheck:
    """Solve the encoded ``G alpha`` game and the tiling game directly."""
    verdict = real_galpha_infinite(encode_galpha(n, ts), max_states)
    return Crosscheck(verdict.status, solve_tiling_game_bruteforce(n, ts))


__all__ = [
    "Crosscheck",
    "TilingOutcome",
    "TilingStructure",
    "crosscheck_encoding",
    "encode_galpha",
    "parse_tiling",
    "solve_tiling_game_bruteforce",
    "tiling_partition",
]

