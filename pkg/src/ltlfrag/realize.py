"""Realizability deciders and strategy validation.

A play proceeds in rounds. In each round Environment picks the values of
the uncontrollable propositions, then Controller, having seen the whole
history, picks the controllable ones.

On finite traces Controller wins a play once some prefix of it is a model
of the formula. On infinite traces the whole play must be a model.

Deciders:

* ``real_safety_finite_2qbf`` / ``real_galpha_finite_2qbf``: on finite
  traces a safety formula is realizable iff Controller can satisfy it on
  a one-letter trace, which is a quantified boolean formula with one
  alternation.
* ``real_galpha_infinite`` / ``real_falpha_infinite``: safety and
  reachability games over the automaton of the pure-past core.
* ``real_cosafety_finite``: reachability game over progressed
  obligations (also the infinite-trace answer for cosafety formulas).
* ``real_by_dualization``: solves the game with the players swapped and
  turns Environment's winning strategy there into a Controller strategy.
* ``bounded_game_oracle``: exhaustive search of the game tree.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import FragmentError, ParseError, UnsupportedFormulaError
from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Bottom,
    Formula,
    Fragment,
    NegAtom,
    Or,
    Release,
    Since,
    Top,
    Triggered,
    WeakNext,
    WeakYesterday,
    Yesterday,
    atoms,
    classify,
    is_falpha,
    is_galpha,
    letters_over,
    negate_nnf,
    render,
)
from .past_dfa import build_past_dfa
from .progression import FALSE, accepts_last, dnf, progress
from .semantics import eval_finite, format_state
from .transforms import PartitionedAlphabet, dualize, galpha_dual

DEFAULT_MAX_STATES = 100_000


class RealStatus(str, enum.Enum):
    REALIZABLE = "REALIZABLE"
    UNREALIZABLE = "UNREALIZABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class RealizabilityInstance:
    formula: Formula
    partition: PartitionedAlphabet
    kind: str = "finite"

    def __post_init__(self):
        if self.kind not in ("finite", "infinite"):
            raise ValueError(f"unknown trace kind {self.kind!r}")
        missing = atoms(self.formula) - set(self.partition.names)
        if missing:
            raise ValueError(f"atoms not assigned to either player: {sorted(missing)}")

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.partition.inputs

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.partition.outputs


@dataclass(frozen=True, eq=False)
class StrategyMachine:
    """Finite-state Controller strategy.

    ``table[(state, u)]`` is ``(next_state, c)`` where ``u`` and ``c`` are
    the Environment and Controller letters of the current round.
    """

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    initial: int
    table: dict = field(default_factory=dict)

    def states(self) -> list[int]:
        found = {self.initial}
        for (s, _), (t, _) in self.table.items():
            found.update((s, t))
        return sorted(found)

    def _key(self, u: Iterable[str]) -> frozenset:
        return frozenset(u) & frozenset(self.inputs)

    def step(self, state: int, u: Iterable[str]) -> tuple[int, frozenset]:
        return self.table[(state, self._key(u))]

    def is_total(self) -> bool:
        letters = letters_over(self.inputs)
        return all((s, u) in self.table for s in self.states() for u in letters)

    def react(self, us: Iterable[Iterable[str]]) -> list[frozenset]:
        """The play produced against the Environment sequence ``us``."""
        state = self.initial
        play = []
        for u in us:
            state, c = self.step(state, u)
            play.append(self._key(u) | c)
        return play

    def to_text(self) -> str:
        lines = [
            "inputs: " + ",".join(self.inputs),
            "outputs: " + ",".join(self.outputs),
            f"initial: {self.initial}",
        ]
        order = {u: k for k, u in enumerate(letters_over(self.inputs))}
        for (s, u) in sorted(self.table, key=lambda key: (key[0], order[key[1]])):
            t, c = self.table[(s, u)]
            lines.append(f"{s} {format_state(u)} -> {t} {format_state(c)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> StrategyMachine:
        header: dict[str, str] = {}
        table = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if "->" not in line:
                key, _, value = line.partition(":")
                header[key.strip()] = value.strip()
                continue
            try:
                left, right = line.split("->")
                s, u = left.split(None, 1)
                t, c = right.split(None, 1)
                table[(int(s), _read_set(u))] = (int(t), _read_set(c))
            except ValueError as exc:
                raise ParseError(f"malformed transition on line {number}: {raw!r}") from exc
        names = lambda v: tuple(n for n in v.split(",") if n)
        return cls(
            names(header.get("inputs", "")),
            names(header.get("outputs", "")),
            int(header.get("initial", "0")),
            table,
        )

    def to_json(self) -> dict:
        order = {u: k for k, u in enumerate(letters_over(self.inputs))}
        rows = []
        for (s, u) in sorted(self.table, key=lambda key: (key[0], order[key[1]])):
            t, c = self.table[(s, u)]
            rows.append({"state": s, "input": sorted(u), "next": t, "output": sorted(c)})
        return {
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "initial": self.initial,
            "transitions": rows,
        }


def _read_set(text: str) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(text)
    return frozenset(n.strip() for n in text[1:-1].split(",") if n.strip())


@dataclass(frozen=True)
class RealVerdict:
    """Outcome of a realizability check.

    ``check_depth`` is the depth at which ``validate_strategy`` is
    conclusive for the returned strategy.
    """

    status: RealStatus
    strategy: StrategyMachine | None = None
    method: str = ""
    check_depth: int | None = None
    bound: tuple | None = None
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def realizable(self) -> bool:
        return self.status is RealStatus.REALIZABLE


def _letters(inst: RealizabilityInstance):
    return letters_over(inst.inputs), letters_over(inst.outputs)


def _one_state(inst: RealizabilityInstance, choice: dict) -> StrategyMachine:
    return StrategyMachine(inst.inputs, inst.outputs, 0, {(0, u): (0, c) for u, c in choice.items()})


# 2QBF deciders (finite traces)

def _prop_value(f: Formula, letter: frozenset) -> bool:
    if isinstance(f, Atom):
        return f.name in letter
    if isinstance(f, NegAtom):
        return f.name not in letter
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return _prop_value(f.left, letter) and _prop_value(f.right, letter)
    if isinstance(f, Or):
        return _prop_value(f.left, letter) or _prop_value(f.right, letter)
    raise TypeError(f"not propositional: {render(f)}")


def safety_matrix(f: Formula) -> Formula:
    """Boolean residue of a LTL[wX,R] formula at the first position.

    ``a R b`` unfolds to ``(a & b) | (b & wX(a R b))`` and every ``wX``
    subformula then becomes ``true``.
    """
    if isinstance(f, (Atom, NegAtom, Top, Bottom)):
        return f
    if isinstance(f, And):
        return And(safety_matrix(f.left), safety_matrix(f.right))
    if isinstance(f, Or):
        return Or(safety_matrix(f.left), safety_matrix(f.right))
    if isinstance(f, WeakNext):
        return TOP
    if isinstance(f, Release):
        a, b = safety_matrix(f.left), safety_matrix(f.right)
        return Or(And(a, b), And(b, TOP))
    raise FragmentError(f"not a LTL[wX,R] formula: {render(f)}")


def past_matrix(f: Formula) -> Formula:
    """Boolean residue of a pure-past formula at the first position.

    ``S`` and ``T`` unfold one step, then ``Y`` becomes ``false`` and
    ``wY`` becomes ``true``.
    """
    if isinstance(f, (Atom, NegAtom, Top, Bottom)):
        return f
    if isinstance(f, And):
        return And(past_matrix(f.left), past_matrix(f.right))
    if isinstance(f, Or):
        return Or(past_matrix(f.left), past_matrix(f.right))
    if isinstance(f, Yesterday):
        return BOT
    if isinstance(f, WeakYesterday):
        return TOP
    if isinstance(f, Since):
        # a S b  ==  b | (a & Y(a S b))
        return Or(past_matrix(f.right), And(past_matrix(f.left), BOT))
    if isinstance(f, Triggered):
        # a T b  ==  b & (a | wY(a T b))
        return And(past_matrix(f.right), Or(past_matrix(f.left), TOP))
    raise FragmentError(f"not a pure-past formula: {render(f)}")


def _forall_exists(inst: RealizabilityInstance, matrix: Formula, method: str) -> RealVerdict:
    u_letters, c_letters = _letters(inst)
    choice = {}
    for u in u_letters:
        for c in c_letters:
            if _prop_value(matrix, u | c):
                choice[u] = c
                break
        else:
            return RealVerdict(RealStatus.UNREALIZABLE, method=method,
                               stats={"matrix": render(matrix), "refuting_input": sorted(u)})
    return RealVerdict(RealStatus.REALIZABLE, _one_state(inst, choice), method, check_depth=1,
                       stats={"matrix": render(matrix)})


def real_safety_finite_2qbf(inst: RealizabilityInstance) -> RealVerdict:
    """Finite-trace realizability of LTL[wX,G] and LTL[wX,R] formulas."""
    if inst.kind != "finite":
        raise FragmentError("the 2QBF procedure is for finite traces")
    if not classify(inst.formula) & {Fragment.LTL_wXG, Fragment.safetyLTL}:
        raise FragmentError(f"not a LTL[wX,R] formula: {render(inst.formula)}")
    return _forall_exists(inst, safety_matrix(inst.formula), "2qbf")


def real_galpha_finite_2qbf(inst: RealizabilityInstance) -> RealVerdict:
    """Finite-trace realizability of ``G alpha`` formulas."""
    if inst.kind != "finite":
        raise FragmentError("the 2QBF procedure is for finite traces")
    if not is_galpha(inst.formula):
        raise FragmentError(f"not a G alpha formula: {render(inst.formula)}")
    return _forall_exists(inst, past_matrix(inst.formula.right), "2qbf")


# Explicit game arenas

class _Outcome:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


WIN = _Outcome("WIN")
LOSE = _Outcome("LOSE")


class _Arena:
    """Explicit game graph built from a start node.

    ``moves[q][i][j]`` is the result of Environment letter ``i`` followed
    by Controller letter ``j`` at node ``q``: a node, ``WIN`` (Controller
    has won for good) or ``LOSE`` (Controller has lost for good).
    """

    def __init__(self, start, expand: Callable, max_nodes: int):
        self.start = start
        self.nodes = [start]
        self.moves: dict = {}
        self.complete = True
        seen = {start}
        queue = deque([start])
        while queue:
            q = queue.popleft()
            rows = expand(q)
            self.moves[q] = rows
            for row in rows:
                for o in row:
                    if o is WIN or o is LOSE or o in seen:
                        continue
                    if len(seen) >= max_nodes:
                        self.complete = False
                        return
                    seen.add(o)
                    self.nodes.append(o)
                    queue.append(o)

    def __len__(self) -> int:
        return len(self.nodes)


def _solve_reach(arena: _Arena) -> dict:
    """Controller attractor to ``WIN``: node -> rounds needed."""
    rank: dict = {}
    k = 0
    while True:
        k += 1
        newly = [
            q for q in arena.nodes
            if q not in rank and all(
                any(o is WIN or (o is not LOSE and o in rank) for o in row)
                for row in arena.moves[q]
            )
        ]
        if not newly:
            return rank
        for q in newly:
            rank[q] = k


def _solve_safety(arena: _Arena) -> dict:
    """Environment attractor to ``LOSE``: node -> rounds needed."""
    rank: dict = {}
    k = 0
    while True:
        k += 1
        newly = [
            q for q in arena.nodes
            if q not in rank and any(
                all(o is LOSE or (o is not WIN and o in rank) for o in row)
                for row in arena.moves[q]
            )
        ]
        if not newly:
            return rank
        for q in newly:
            rank[q] = k


def _reach_choice(arena: _Arena, rank: dict) -> Callable:
    def choose(q, i):
        best, best_j = None, None
        for j, o in enumerate(arena.moves[q][i]):
            value = 0 if o is WIN else rank.get(o) if o is not LOSE else None
            if value is not None and (best is None or value < best):
                best, best_j = value, j
        return best_j
    return choose


def _safety_choice(arena: _Arena, env_rank: dict) -> Callable:
    def choose(q, i):
        for j, o in enumerate(arena.moves[q][i]):
            if o is WIN or (o is not LOSE and o not in env_rank):
                return j
        return None
    return choose


def _controller_machine(arena: _Arena, choose: Callable, inputs, outputs) -> StrategyMachine:
    """Positional strategy on the arena, with a sink state once the game is won."""
    u_letters, c_letters = letters_over(inputs), letters_over(outputs)
    ids = {arena.start: 0}
    queue = deque([arena.start])
    table = {}
    done = None
    while queue:
        q = queue.popleft()
        for i, u in enumerate(u_letters):
            j = choose(q, i)
            o = arena.moves[q][i][j]
            if o is WIN:
                if done is None:
                    done = len(ids)
                    ids[WIN] = done
                target = done
            else:
                if o not in ids:
                    ids[o] = len(ids)
                    queue.append(o)
                target = ids[o]
            table[(ids[q], u)] = (target, c_letters[j])
    if done is not None:
        for u in u_letters:
            table[(done, u)] = (done, frozenset())
    return StrategyMachine(tuple(inputs), tuple(outputs), 0, table)


# DFA games (infinite traces)

def _letter_grid(inst: RealizabilityInstance):
    u_letters, c_letters = _letters(inst)
    return [[u | c for c in c_letters] for u in u_letters]


def _sticky_false_bits(dfa, f: Formula) -> list[int]:
    """Bits of top-level conjuncts ``H y`` of ``f``: once false they stay false."""
    stack, bits = [f], []
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.extend((g.left, g.right))
        elif isinstance(g, Triggered) and isinstance(g.left, Bottom):
            bits.append(1 << dfa.tracked.index(g))
    return bits


def _galpha_arena(inst: RealizabilityInstance, max_states: int):
    bad_formula = negate_nnf(inst.formula.right)
    dfa = build_past_dfa(bad_formula)
    sticky = _sticky_false_bits(dfa, bad_formula)
    grid = _letter_grid(inst)

    def expand(q):
        rows = []
        for row in grid:
            out = []
            for letter in row:
                r = dfa.step(q, letter)
                if dfa.accepting(r):
                    out.append(LOSE)
                elif any(not r & bit for bit in sticky):
                    out.append(WIN)
                else:
                    out.append(r)
            rows.append(out)
        return rows

    return _Arena(dfa.START, expand, max_states)


def _falpha_arena(inst: RealizabilityInstance, max_states: int):
    dfa = build_past_dfa(inst.formula.right)
    grid = _letter_grid(inst)

    def expand(q):
        rows = []
        for row in grid:
            out = []
            for letter in row:
                r = dfa.step(q, letter)
                out.append(WIN if dfa.accepting(r) else r)
            rows.append(out)
        return rows

    return _Arena(dfa.START, expand, max_states)


def _progression_arena(inst: RealizabilityInstance, max_states: int):
    grid = _letter_grid(inst)

    def expand(ob):
        rows = []
        for row in grid:
            out = []
            for letter in row:
                if accepts_last(ob, letter):
                    out.append(WIN)
                else:
                    nxt = progress(ob, letter)
                    out.append(LOSE if nxt == FALSE else nxt)
            rows.append(out)
        return rows

    return _Arena(dnf(inst.formula), expand, max_states)


def _budget_exceeded(method: str, arena: _Arena, max_states: int) -> RealVerdict:
    return RealVerdict(RealStatus.UNKNOWN, method=method, bound=(max_states,),
                       stats={"arena": len(arena)})


def _solve_reach_instance(inst, arena: _Arena, method: str, max_states: int) -> RealVerdict:
    if not arena.complete:
        return _budget_exceeded(method, arena, max_states)
    rank = _solve_reach(arena)
    stats = {"arena": len(arena)}
    if arena.start not in rank:
        return RealVerdict(RealStatus.UNREALIZABLE, method=method, stats=stats)
    machine = _controller_machine(arena, _reach_choice(arena, rank), inst.inputs, inst.outputs)
    depth = rank[arena.start]
    return RealVerdict(RealStatus.REALIZABLE, machine, method, check_depth=depth,
                       stats={**stats, "rank": depth})


def _solve_safety_instance(inst, arena: _Arena, method: str, max_states: int) -> RealVerdict:
    if not arena.complete:
        return _budget_exceeded(method, arena, max_states)
    env_rank = _solve_safety(arena)
    stats = {"arena": len(arena), "safe": len(arena) - len(env_rank)}
    if arena.start in env_rank:
        return RealVerdict(RealStatus.UNREALIZABLE, method=method, stats=stats)
    machine = _controller_machine(arena, _safety_choice(arena, env_rank), inst.inputs, inst.outputs)
    return RealVerdict(RealStatus.REALIZABLE, machine, method, check_depth=len(arena) + 2,
                       stats=stats)


def real_galpha_infinite(inst: RealizabilityInstance, max_states: int = DEFAULT_MAX_STATES) -> RealVerdict:
    """Safety game on the automaton of ``!alpha`` for ``G alpha`` on infinite traces."""
    if not is_galpha(inst.formula):
        raise FragmentError(f"not a G alpha formula: {render(inst.formula)}")
    return _solve_safety_instance(inst, _galpha_arena(inst, max_states), "galpha-game", max_states)


def real_falpha_infinite(inst: RealizabilityInstance, max_states: int = DEFAULT_MAX_STATES) -> RealVerdict:
    """Reachability game on the automaton of ``alpha`` for ``F alpha``.

    The answer is the same for finite and infinite traces.
    """
    if not is_falpha(inst.formula):
        raise FragmentError(f"not an F alpha formula: {render(inst.formula)}")
    return _solve_reach_instance(inst, _falpha_arena(inst, max_states), "falpha-game", max_states)


def real_finite_progression(inst: RealizabilityInstance, max_states: int = DEFAULT_MAX_STATES) -> RealVerdict:
    """Finite-trace realizability of any pure-future formula (reachability game)."""
    if Fragment.LTL not in classify(inst.formula):
        raise FragmentError(f"not a pure-future formula: {render(inst.formula)}")
    return _solve_reach_instance(inst, _progression_arena(inst, max_states), "progression-game",
                                 max_states)


def real_cosafety_finite(inst: RealizabilityInstance, max_states: int = DEFAULT_MAX_STATES) -> RealVerdict:
    """Realizability of a cosafety formula; the verdict holds for both trace kinds."""
    if Fragment.cosafetyLTL not in classify(inst.formula):
        raise FragmentError(f"not a cosafety formula: {render(inst.formula)}")
    v = real_finite_progression(inst, max_states)
    return RealVerdict(v.status, v.strategy, "cosafety-game", v.check_depth, v.bound,
                       {**v.stats, "kinds": ["finite", "infinite"]})


# Dualization

def _environment_machine(arena: _Arena, env_choice: Callable, inputs, outputs) -> StrategyMachine:
    """Controller strategy read off Environment's winning strategy in the dual game.

    In the dual game Environment owns the original outputs and its letter
    of round ``i + 1`` plays the role of the original output of round
    ``i``; the dual Controller's letter of round ``i`` is the original
    input of round ``i``. States are (dual node, committed dual
    Environment letter).
    """
    u_letters, c_letters = letters_over(inputs), letters_over(outputs)
    first = (arena.start, env_choice(arena.start))
    ids = {first: 0}
    queue = deque([first])
    table = {}
    done = None
    while queue:
        q, e = key = queue.popleft()
        for j, u in enumerate(u_letters):
            o = arena.moves[q][e][j]
            if o is LOSE:
                if done is None:
                    done = len(ids)
                    ids[LOSE] = done
                table[(ids[key], u)] = (done, frozenset())
                continue
            e2 = env_choice(o)
            if o is WIN or e2 is None:
                raise AssertionError("dual Environment strategy is not winning")
            nxt = (o, e2)
            if nxt not in ids:
                ids[nxt] = len(ids)
                queue.append(nxt)
            table[(ids[key], u)] = (ids[nxt], c_letters[e2])
    if done is not None:
        for u in u_letters:
            table[(done, u)] = (done, frozenset())
    return StrategyMachine(tuple(inputs), tuple(outputs), 0, table)


def _env_reach_choice(arena: _Arena, rank: dict) -> Callable:
    """Environment keeps the dual play outside Controller's attractor."""
    def choose(q):
        for i, row in enumerate(arena.moves[q]):
            if all(o is LOSE or (o is not WIN and o not in rank) for o in row):
                return i
        return None
    return choose


def _env_safety_choice(arena: _Arena, env_rank: dict) -> Callable:
    """Environment moves strictly closer to ``LOSE``."""
    def choose(q):
        here = env_rank.get(q)
        if here is None:
            return None
        for i, row in enumerate(arena.moves[q]):
            if all(o is LOSE or (o is not WIN and env_rank.get(o, here) < here) for o in row):
                return i
        return None
    return choose


def real_by_dualization(inst: RealizabilityInstance, max_states: int = DEFAULT_MAX_STATES) -> RealVerdict:
    """Infinite-trace realizability through the dual game.

    ``G alpha`` and ``F alpha`` are dualized with ``galpha_dual``;
    safetyLTL formulas become cosafety formulas through ``dualize``. The
    input is realizable iff the dual instance is not, and a Controller
    strategy is extracted from Environment's side of the dual game.
    """
    if inst.kind != "infinite":
        raise FragmentError("dualization is for infinite traces")
    f, part = inst.formula, inst.partition
    frags = classify(f)
    if is_galpha(f) or is_falpha(f):
        g, dual_part = galpha_dual(f, part)
        dual = RealizabilityInstance(g, dual_part, "infinite")
        if is_falpha(g):
            arena, solver = _falpha_arena(dual, max_states), "reach"
        else:
            arena, solver = _galpha_arena(dual, max_states), "safety"
    elif Fragment.safetyLTL in frags:
        g, dual_part = dualize(f, part)
        dual = RealizabilityInstance(g, dual_part, "infinite")
        arena, solver = _progression_arena(dual, max_states), "reach"
    else:
        raise FragmentError(f"no decider for the dual of {render(f)}")
    if not arena.complete:
        return _budget_exceeded("dual", arena, max_states)
    stats = {"dual": render(g), "arena": len(arena)}
    if solver == "reach":
        rank = _solve_reach(arena)
        if arena.start in rank:
            return RealVerdict(RealStatus.UNREALIZABLE, method="dual", stats=stats)
        choice = _env_reach_choice(arena, rank)
        depth = len(arena) + 2
    else:
        env_rank = _solve_safety(arena)
        if arena.start not in env_rank:
            return RealVerdict(RealStatus.UNREALIZABLE, method="dual", stats=stats)
        choice = _env_safety_choice(arena, env_rank)
        depth = env_rank[arena.start] + 1
    machine = _environment_machine(arena, choice, inst.inputs, inst.outputs)
    return RealVerdict(RealStatus.REALIZABLE, machine, "dual", check_depth=depth, stats=stats)


# Bounded game-tree oracle

def _objective(inst: RealizabilityInstance) -> str:
    """``reach``: Controller must produce a good prefix; ``safety``: avoid a bad one."""
    frags = classify(inst.formula)
    if inst.kind == "finite":
        return "reach"
    if frags & {Fragment.cosafetyLTL, Fragment.Falpha}:
        return "reach"
    if Fragment.Galpha in frags:
        return "safety-galpha"
    if Fragment.safetyLTL in frags:
        return "safety"
    return "other"


def bounded_game_oracle(inst: RealizabilityInstance, depth: int) -> RealVerdict:
    """Exhaustive search of all plays up to ``depth`` rounds.

    Conclusive answers: REALIZABLE whenever Controller can force a good
    prefix within ``depth`` rounds; UNREALIZABLE on finite traces for
    the safety fragments (one round suffices there) and on infinite traces
    when Environment can force a bad prefix of a ``G alpha`` formula.
    Everything else is UNKNOWN.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    f = inst.formula
    u_letters, c_letters = _letters(inst)
    objective = _objective(inst)
    bound = (depth,)

    if objective == "reach":
        def solve(prefix: tuple, left: int):
            plan = {}
            for u in u_letters:
                found = None
                for c in c_letters:
                    if eval_finite(f, prefix + (u | c,), 0):
                        found = (c, None)
                        break
                if found is None and left > 1:
                    for c in c_letters:
                        sub = solve(prefix + (u | c,), left - 1)
                        if sub is not None:
                            found = (c, sub)
                            break
                if found is None:
                    return None
                plan[u] = found
            return plan

        plan = solve((), depth)
        if plan is not None:
            machine = _tree_machine(plan, inst.inputs, inst.outputs, u_letters)
            return RealVerdict(RealStatus.REALIZABLE, machine, "oracle",
                               check_depth=_plan_depth(plan), bound=bound)
        safety = {Fragment.LTL_wXG, Fragment.safetyLTL, Fragment.Galpha}
        if inst.kind == "finite" and classify(f) & safety:
            return RealVerdict(RealStatus.UNREALIZABLE, method="oracle", bound=bound)
        return RealVerdict(RealStatus.UNKNOWN, method="oracle", bound=bound)

    if objective == "safety-galpha":
        alpha = f.right

        def env_wins(prefix: tuple, left: int) -> bool:
            for u in u_letters:
                if all(
                    not eval_finite(alpha, t := prefix + (u | c,), len(t) - 1)
                    or (left > 1 and env_wins(t, left - 1))
                    for c in c_letters
                ):
                    return True
            return False

        if env_wins((), depth):
            return RealVerdict(RealStatus.UNREALIZABLE, method="oracle", bound=bound)
    return RealVerdict(RealStatus.UNKNOWN, method="oracle", bound=bound)


def _plan_depth(plan) -> int:
    return 1 + max((_plan_depth(sub) for _, sub in plan.values() if sub is not None), default=0)


def _tree_machine(plan, inputs, outputs, u_letters) -> StrategyMachine:
    table = {}
    done = None
    counter = [0]

    def build(node) -> int:
        nonlocal done
        sid = counter[0]
        counter[0] += 1
        for u in u_letters:
            c, sub = node[u]
            if sub is None:
                if done is None:
                    done = "pending"
                table[(sid, u)] = ("done", c)
            else:
                table[(sid, u)] = (build(sub), c)
        return sid

    build(plan)
    sink = counter[0]
    final = {}
    for key, (t, c) in table.items():
        final[key] = (sink if t == "done" else t, c)
    if done is not None:
        for u in u_letters:
            final[(sink, u)] = (sink, frozenset())
    return StrategyMachine(tuple(inputs), tuple(outputs), 0, final)


# Validation

def validate_strategy(inst: RealizabilityInstance, m: StrategyMachine, depth: int) -> bool:
    """Check ``m`` against every Environment sequence of up to ``depth`` rounds.

    Good-prefix objectives (finite traces, cosafety, ``F alpha``): every
    play must reach a prefix that is a model within ``depth`` rounds.
    Safety objectives on infinite traces: no reachable play prefix may be
    bad; ``G alpha`` is checked with the automaton of ``alpha``, other
    safety formulas with the finite models of their negation, and the
    search stops early once no new (strategy state, monitor state) pair
    appears.
    """
    objective = _objective(inst)
    u_letters = letters_over(inst.inputs)
    try:
        if objective == "reach":
            return _validate_reach(inst.formula, m, u_letters, depth)
        if objective == "safety-galpha":
            dfa = build_past_dfa(inst.formula.right)
            return _validate_monitor(m, u_letters, depth, dfa.START,
                                     lambda q, a: dfa.step(q, a),
                                     lambda q: not dfa.accepting(q))
        if objective == "safety":
            start = dnf(negate_nnf(inst.formula))

            def step(ob, a):
                if accepts_last(ob, a):
                    return None
                return progress(ob, a)

            return _validate_monitor(m, u_letters, depth, start, step, lambda ob: ob is None)
    except KeyError:
        return False
    raise UnsupportedFormulaError(f"no validation procedure for {render(inst.formula)}")


def _validate_reach(f: Formula, m: StrategyMachine, u_letters, depth: int) -> bool:
    def explore(state: int, prefix: tuple, left: int) -> bool:
        for u in u_letters:
            nxt, c = m.step(state, u)
            play = prefix + (u | c,)
            if eval_finite(f, play, 0):
                continue
            if left <= 1 or not explore(nxt, play, left - 1):
                return False
        return True

    return explore(m.initial, (), depth)


def _validate_monitor(m: StrategyMachine, u_letters, depth: int, start, step, is_bad) -> bool:
    frontier = {(m.initial, start)}
    seen = set(frontier)
    for _ in range(depth):
        new = set()
        for s, q in frontier:
            for u in u_letters:
                s2, c = m.step(s, u)
                q2 = step(q, u | c)
                if is_bad(q2):
                    return False
                if (s2, q2) not in seen:
                    seen.add((s2, q2))
                    new.add((s2, q2))
        if not new:
            break
        frontier = new
    return True


# Dispatch

METHODS = ("auto", "2qbf", "game", "dual", "oracle")


def realize(
    inst: RealizabilityInstance,
    method: str = "auto",
    max_states: int = DEFAULT_MAX_STATES,
    depth: int = 3,
) -> RealVerdict:
    """Realizability with the most specific applicable decider.

    ``method`` forces a family: ``2qbf`` (finite traces, safety
    fragments), ``game`` (automaton or progression games), ``dual``
    (infinite traces via the dual game) or ``oracle`` (bounded search to
    ``depth`` rounds).
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    f = inst.formula
    frags = classify(f)
    if method == "oracle":
        return bounded_game_oracle(inst, depth)
    if method == "dual":
        return real_by_dualization(inst, max_states)
    if method == "2qbf":
        if is_galpha(f):
            return real_galpha_finite_2qbf(inst)
        return real_safety_finite_2qbf(inst)
    if inst.kind == "finite":
        if method == "auto" and frags & {Fragment.LTL_wXG, Fragment.safetyLTL}:
            return real_safety_finite_2qbf(inst)
        if method == "auto" and is_galpha(f):
            return real_galpha_finite_2qbf(inst)
        if Fragment.LTL in frags:
            return real_finite_progression(inst, max_states)
        if is_falpha(f):
            return real_falpha_infinite(inst, max_states)
        if is_galpha(f):
            raise FragmentError("no game solver for G alpha on finite traces; use 2qbf")
    else:
        if is_galpha(f):
            return real_galpha_infinite(inst, max_states)
        if is_falpha(f):
            return real_falpha_infinite(inst, max_states)
        if Fragment.cosafetyLTL in frags:
            return real_cosafety_finite(inst, max_states)
        if Fragment.safetyLTL in frags and method == "auto":
            return real_by_dualization(inst, max_states)
    if method == "auto":
        return bounded_game_oracle(inst, depth)
    raise FragmentError(f"no {method} decider for {render(f)} on {inst.kind} traces")
