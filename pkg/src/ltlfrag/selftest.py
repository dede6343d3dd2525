"""Exhaustive micro-suites backing the acceptance criteria.

Each ``criterion_<k>`` function runs one suite and returns a
``CriterionResult``. The suites are shared by ``ltlfrag selftest`` and
the acceptance tests. Realizable verdicts met along the way are recorded
so that criterion 12 can validate every strategy that was produced.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .families import cosafety_ltl, pure_future, pure_past, safety_family, shiftable
from .formula import (
    BOT,
    F,
    G,
    WeakNext,
    is_galpha,
    is_pure_future,
    letters_over,
    parse,
    render,
)
from .oracles import naive_finite, naive_mask
from .past_dfa import PastDFA
from .realize import (
    RealizabilityInstance,
    RealStatus,
    bounded_game_oracle,
    real_by_dualization,
    real_falpha_infinite,
    real_galpha_finite_2qbf,
    real_galpha_infinite,
    real_safety_finite_2qbf,
    realize,
    validate_strategy,
)
from .sat import (
    Status,
    bounded_model_oracle,
    sat,
    sat_finite_progression,
    sat_safety_finite_one_state,
)
from .semantics import Lasso, TraceBatch, batch_vectors, concat_is_model, eval_finite, eval_lasso
from .tiling import TilingStructure, crosscheck_encoding, encode_galpha
from .transforms import ENDT, PartitionedAlphabet, galpha_dual, pastify, translate_g

PQ = ("p", "q")
UC = PartitionedAlphabet.of(inputs=("u",), outputs=("c",))


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number:2d} {self.title}: {self.summary} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "summary": self.summary, "details": self.details}


def _batches(names, max_len: int) -> list[TraceBatch]:
    letters = letters_over(names)
    return [TraceBatch(list(itertools.product(letters, repeat=n))) for n in range(1, max_len + 1)]


# Realizable verdicts collected for criterion 12: (suite, instance, verdict)
_realized: list = []


def _record(suite: str, inst: RealizabilityInstance, verdict):
    if verdict.status is RealStatus.REALIZABLE:
        _realized.append((suite, inst, verdict))


# 1. memoized evaluator against the naive one

def criterion_1() -> CriterionResult:
    formulas = pure_future(PQ, 6) + pure_past(PQ, 6)
    mismatches = []
    checks = 0
    for batch in _batches(PQ, 4):
        table: dict = {}
        for f in formulas:
            vec = batch_vectors(f, batch, table)
            for i in range(batch.length):
                checks += 1
                if vec[i] != naive_mask(f, batch, i):
                    mismatches.append((render(f), batch.length, i))
    return CriterionResult(
        1, "memoized = naive evaluation", not mismatches,
        f"{len(formulas)} formulas, {checks} (formula, length, position) checks, "
        f"{len(mismatches)} mismatches",
        details={"formulas": len(formulas), "checks": checks, "mismatches": mismatches[:10]},
    )


# 2. a finite model implies a one-letter model

@lru_cache(maxsize=1)
def _safety_pq() -> tuple:
    return tuple(safety_family(PQ, 7))


def criterion_2() -> CriterionResult:
    formulas = _safety_pq()
    letters = letters_over(PQ)
    batches = _batches(PQ, 4)
    first = []
    for batch in batches:
        masks = {}
        for b, t in enumerate(batch.traces):
            masks[t[0]] = masks.get(t[0], 0) | (1 << b)
        first.append(masks)
    violations = []
    with_models = 0
    for f in formulas:
        one = {a for a in letters if batch_vectors(f, batches[0])[0] >> letters.index(a) & 1}
        found = False
        for batch, masks in zip(batches, first):
            models = batch_vectors(f, batch)[0]
            found |= bool(models)
            for a, mask in masks.items():
                if a not in one and models & mask:
                    b = (models & mask).bit_length() - 1
                    violations.append((render(f), batch.traces[b]))
        with_models += found
    return CriterionResult(
        2, "small model for safety fragments", not violations,
        f"{len(formulas)} formulas ({with_models} finitely satisfiable), "
        f"{len(violations)} violations",
        details={"formulas": len(formulas), "satisfiable": with_models,
                 "violations": [(f, [sorted(s) for s in t]) for f, t in violations[:10]]},
    )


# 3. one-state decider against full searches

def criterion_3() -> CriterionResult:
    formulas = _safety_pq()
    disagreements = []
    engines = {"progression": 0, "search": 0}
    for f in formulas:
        fast = sat_safety_finite_one_state(f, PQ).status
        if is_pure_future(f):
            ref = sat_finite_progression(f, names=PQ).status
            engines["progression"] += 1
        else:
            ref = bounded_model_oracle(f, 4, names=PQ).status
            engines["search"] += 1
        if fast is not ref:
            disagreements.append((render(f), fast.value, ref.value))
    return CriterionResult(
        3, "one-state decider = full search", not disagreements,
        f"{len(formulas)} formulas ({engines['progression']} by progression, "
        f"{engines['search']} by search over traces up to length 4), "
        f"{len(disagreements)} disagreements",
        details={"formulas": len(formulas), **engines, "disagreements": disagreements[:10]},
    )


# 4. finite satisfiability through the endt translation

def _finite_part(w: Lasso):
    """States of ``w`` before the first ``endt``, with ``endt`` removed."""
    out = []
    for k in range(len(w)):
        if ENDT in w[k]:
            break
        out.append(w[k] - {ENDT})
    return tuple(out)


def criterion_4() -> CriterionResult:
    formulas = pure_future(("p",), 6)
    names = ("p", ENDT)
    conclusive = 0
    rerun = []
    disagreements = []
    for f in formulas:
        expected = sat_finite_progression(f, names=("p",)).status
        g, _ = translate_g(f)
        v = bounded_model_oracle(g, 4, 4, names)
        if v.status is Status.SAT:
            part = _finite_part(v.witness)
            if expected is not Status.SAT or not part or not eval_finite(f, part, 0):
                disagreements.append(render(f))
            else:
                conclusive += 1
        elif expected is Status.UNSAT:
            conclusive += 1
        else:
            rerun.append(f)
    unresolved = []
    for f in rerun:
        g, _ = translate_g(f)
        if bounded_model_oracle(g, 6, 6, names).status is not Status.SAT:
            unresolved.append(render(f))
    rate = conclusive / len(formulas)
    ok = not disagreements and rate >= 0.95
    return CriterionResult(
        4, "finite sat = lasso sat of g", ok,
        f"{len(formulas)} formulas, conclusive at bound 4: {rate:.1%}, "
        f"re-run at 6: {len(rerun)} ({len(unresolved)} still open), "
        f"{len(disagreements)} disagreements",
        details={"formulas": len(formulas), "conclusive": conclusive, "rerun": len(rerun),
                 "disagreements": disagreements[:10], "unresolved": unresolved[:10]},
    )


# 5. suffix independence of cosafety LTL and F alpha

def _random_lasso(rng: random.Random, letters, max_prefix: int, max_loop: int) -> Lasso:
    prefix = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_prefix)))
    loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_loop)))
    return Lasso(prefix, loop)


def criterion_5(seed: int = 2024, count: int = 500) -> CriterionResult:
    rng = random.Random(seed)
    letters = letters_over(PQ)
    pool = cosafety_ltl(PQ, 6) + [F(a) for a in pure_past(PQ, 4)]
    chosen = []
    while len(chosen) < count:
        f = rng.choice(pool)
        v = sat(f, "finite", names=PQ)
        if v.status is Status.SAT:
            chosen.append((f, v.witness))
    extension_failures = []
    prefix_failures = []
    lasso_models = 0
    for f, u in chosen:
        for _ in range(20):
            if not concat_is_model(f, u, _random_lasso(rng, letters, 3, 3)):
                extension_failures.append(render(f))
        for _ in range(20):
            w = _random_lasso(rng, letters, 2, 2)
            if not eval_lasso(f, w):
                continue
            lasso_models += 1
            prefix = _scan_prefix(f, w)
            if prefix is None or not naive_finite(f, prefix, 0):
                prefix_failures.append(render(f))
    ok = not extension_failures and not prefix_failures
    return CriterionResult(
        5, "suffix independence", ok,
        f"{count} formulas x 20 extensions: {len(extension_failures)} failures; "
        f"{lasso_models} lasso models scanned: {len(prefix_failures)} failures",
        details={"lasso_models": lasso_models, "extension_failures": extension_failures[:10],
                 "prefix_failures": prefix_failures[:10]},
    )


def _scan_prefix(f, w: Lasso, limit: int = 12):
    unrolled = w.prefix + w.loop * limit
    for k in range(1, limit + 1):
        if eval_finite(f, unrolled[:k], 0):
            return unrolled[:k]
    return None


# 6. the G (wX false) litmus

def criterion_6() -> CriterionResult:
    f = G(WeakNext(BOT))
    fin = sat(f, "finite", names=("p",))
    lasso = bounded_model_oracle(f, 4, 4, ("p",))
    ok = (fin.status is Status.SAT and fin.witness is not None and len(fin.witness) == 1
          and lasso.status is Status.UNSAT)
    return CriterionResult(
        6, "G(wX false) litmus", ok,
        f"finite: {fin.status.value} witness length "
        f"{len(fin.witness) if fin.witness else '-'}; lassos <= (4,4): {lasso.status.value}",
    )


# 7. 2QBF against the one-round game

@lru_cache(maxsize=1)
def _suite_7() -> tuple:
    rows = []
    for f in safety_family(("u", "c"), 7):
        inst = RealizabilityInstance(f, UC, "finite")
        fast = real_galpha_finite_2qbf(inst) if is_galpha(f) else real_safety_finite_2qbf(inst)
        ref = bounded_game_oracle(inst, 1)
        rows.append((inst, fast, ref))
    return tuple(rows)


def criterion_7() -> CriterionResult:
    rows = _suite_7()
    disagreements = [render(i.formula) for i, a, b in rows if a.status is not b.status]
    for inst, a, b in rows:
        _record("2qbf", inst, a)
        _record("oracle-1", inst, b)
    realizable = sum(a.realizable for _, a, _ in rows)
    return CriterionResult(
        7, "2QBF = one-round game", not disagreements,
        f"{len(rows)} formulas ({realizable} realizable), {len(disagreements)} disagreements",
        details={"formulas": len(rows), "realizable": realizable,
                 "disagreements": disagreements[:10]},
    )


# 8. duality between G alpha and F alpha games

@lru_cache(maxsize=1)
def _suite_8() -> tuple:
    rows = []
    for alpha in pure_past(("u", "c"), 6):
        inst = RealizabilityInstance(G(alpha), UC, "infinite")
        dual_f, dual_part = galpha_dual(inst.formula, UC)
        dual = RealizabilityInstance(dual_f, dual_part, "infinite")
        rows.append((inst, real_galpha_infinite(inst), dual, real_falpha_infinite(dual)))
    return tuple(rows)


def criterion_8() -> CriterionResult:
    rows = _suite_8()
    bad = []
    unknown = 0
    for inst, v, dual, w in rows:
        _record("galpha-game", inst, v)
        _record("falpha-game", dual, w)
        if RealStatus.UNKNOWN in (v.status, w.status):
            unknown += 1
        elif v.realizable == w.realizable:
            bad.append(render(inst.formula))
    realizable = sum(v.realizable for _, v, _, _ in rows)
    ok = not bad and not unknown
    return CriterionResult(
        8, "G alpha game = complement of dual F alpha game", ok,
        f"{len(rows)} cores ({realizable} realizable), {len(bad)} non-complementary, "
        f"{unknown} unknown",
        details={"formulas": len(rows), "realizable": realizable, "unknown": unknown,
                 "non_complementary": bad[:10]},
    )


# 9. past automaton against last-position evaluation

def criterion_9() -> CriterionResult:
    letters = letters_over(PQ)
    # words of length n + 1 are indexed as  letter_index * 4**n + prefix_index
    batches = []
    traces = [()]
    for _ in range(5):
        traces = [t + (a,) for a in letters for t in traces]
        batches.append(TraceBatch(traces))
    formulas = pure_past(PQ, 7)
    largest_from = len(pure_past(PQ, 6))
    tables = [{} for _ in batches]
    mismatches = []
    for k, alpha in enumerate(formulas):
        dfa = PastDFA(alpha)
        _, delta = dfa.reachable(PQ)
        reach = {dfa.START: 1}
        width = 1
        for n, batch in enumerate(batches):
            nxt: dict = {}
            for q, words in reach.items():
                for j, a in enumerate(letters):
                    r = delta[(q, a)]
                    nxt[r] = nxt.get(r, 0) | (words << (j * width))
            reach = nxt
            width *= len(letters)
            accepted = 0
            for q, words in reach.items():
                if dfa.accepting(q):
                    accepted |= words
            table = tables[n]
            expected = batch_vectors(alpha, batch, table)[n]
            if k >= largest_from:
                # largest formulas are never subformulas of others
                del table[alpha]
            if accepted != expected:
                mismatches.append((render(alpha), n + 1))
    return CriterionResult(
        9, "past automaton = last-position evaluation", not mismatches,
        f"{len(formulas)} formulas x {sum(len(b.traces) for b in batches)} words, "
        f"{len(mismatches)} mismatches",
        details={"formulas": len(formulas), "mismatches": mismatches[:10]},
    )


# 10. pastify shift contract

def criterion_10() -> CriterionResult:
    names = ("p", "c")
    formulas = shiftable(names, names, 6)
    batches = _batches(names, 5)
    tables = [{} for _ in batches]
    violations = []
    for beta in formulas:
        shifted = pastify(beta)
        for batch, table in zip(batches, tables):
            vb = batch_vectors(beta, batch, table)
            vs = batch_vectors(shifted, batch, table)
            for i in range(batch.length - 1):
                if vb[i] != vs[i + 1]:
                    violations.append((render(beta), batch.length, i))
    return CriterionResult(
        10, "pastify shift contract", not violations,
        f"{len(formulas)} formulas, traces up to length 5, {len(violations)} violations",
        details={"formulas": len(formulas), "violations": violations[:10]},
    )


# 11. tiling encoding against the direct game solver

def tiling_micro_suite() -> list[tuple[int, str, TilingStructure]]:
    cases = []
    for n in (2, 3):
        for tiles in (("a",), ("a", "b")):
            total = frozenset((x, y) for x in tiles for y in tiles)
            for name, h, v in (("total", total, total), ("H empty", frozenset(), total),
                               ("V empty", total, frozenset())):
                cases.append((n, f"|T|={len(tiles)} {name}", TilingStructure(tiles, "a", h, v)))
    return cases


@lru_cache(maxsize=1)
def _suite_11() -> tuple:
    rows = []
    for n, name, ts in tiling_micro_suite():
        inst = encode_galpha(n, ts)
        verdict = real_galpha_infinite(inst)
        rows.append((n, name, ts, inst, verdict, crosscheck_encoding(n, ts)))
    return tuple(rows)


def criterion_11() -> CriterionResult:
    start = time.perf_counter()
    rows = _suite_11()
    elapsed = time.perf_counter() - start
    bad = [f"n={n} {name}" for n, name, _, _, _, c in rows if c.conclusive and not c.agree]
    open_cases = [f"n={n} {name}" for n, name, _, _, _, c in rows if not c.conclusive]
    for _, _, _, inst, verdict, _ in rows:
        _record("tiling", inst, verdict)
    wins = sum(c.agree and c.encoding is RealStatus.REALIZABLE for *_, c in rows)
    ok = not bad and elapsed < 300
    return CriterionResult(
        11, "tiling encoding = tiling game", ok,
        f"{len(rows)} instances ({wins} Constructor wins), {len(bad)} disagreements, "
        f"{len(open_cases)} inconclusive",
        details={"instances": len(rows), "constructor_wins": wins, "seconds": elapsed,
                 "disagreements": bad, "inconclusive": open_cases},
    )


# 12. every realizable verdict ships a valid strategy

def _extra_instances() -> list[RealizabilityInstance]:
    out = []
    for text, kind in (("G (u -> c)", "finite"), ("G (u <-> c)", "infinite"),
                       ("G (wY false | u)", "infinite"), ("G (c | Y u)", "infinite"),
                       ("F (c & Y u)", "infinite"), ("c U u | F c", "finite"),
                       ("G (c -> wX !c) & G (!c -> wX c)", "infinite")):
        out.append(RealizabilityInstance(parse(text), UC, kind))
    return out


def criterion_12() -> CriterionResult:
    global _realized
    _realized = []
    criterion_7()
    criterion_8()
    criterion_11()
    for inst in _extra_instances():
        _record("auto", inst, realize(inst))
        if inst.kind == "infinite":
            _record("dual", inst, real_by_dualization(inst))
    failures = []
    per_suite: dict = {}
    for suite, inst, v in _realized:
        per_suite[suite] = per_suite.get(suite, 0) + 1
        if v.strategy is None or v.check_depth is None or not validate_strategy(
            inst, v.strategy, v.check_depth
        ):
            failures.append((suite, render(inst.formula)))
    counts = ", ".join(f"{k}: {n}" for k, n in sorted(per_suite.items()))
    return CriterionResult(
        12, "every realizable verdict validates", not failures,
        f"{len(_realized)} strategies ({counts}), {len(failures)} failures",
        details={"strategies": len(_realized), "per_suite": per_suite, "failures": failures[:10]},
    )


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}


def run_criterion(number: int) -> CriterionResult:
    start = time.perf_counter()
    result = CRITERIA[number]()
    result.seconds = time.perf_counter() - start
    return result


def run_criteria(only=None, echo: bool = True) -> list[CriterionResult]:
    results = []
    for number in sorted(CRITERIA) if only is None else only:
        result = run_criterion(number)
        if echo:
            print(result.line(), flush=True)
        results.append(result)
    return results
