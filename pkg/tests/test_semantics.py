import itertools

import pytest
from hypothesis import given, strategies as st

from ltlfrag.errors import ParseError, UnknownAtomError, UnsupportedFormulaError
from ltlfrag.families import by_size, literals
from ltlfrag.formula import (
    TOP,
    BOT,
    Alphabet,
    And,
    Fragment,
    Next,
    Or,
    Release,
    Since,
    Triggered,
    Until,
    WeakNext,
    WeakYesterday,
    Yesterday,
    classify,
    letters_over,
    parse,
)
from ltlfrag.oracles import naive_finite, naive_lasso, naive_mask
from ltlfrag.semantics import (
    Lasso,
    TraceBatch,
    batch_vectors,
    concat_is_model,
    eval_finite,
    eval_lasso,
    eval_model_finite,
    format_trace,
    lasso_acceptance_stream,
    parse_trace,
)

from strategies import formulas, lassos, traces

E = frozenset()
P_ = frozenset({"p"})
Q_ = frozenset({"q"})


class TestFiniteExamples:
    def test_weak_next_false_at_last_position(self):
        assert eval_finite(parse("wX false"), [P_], 0)

    def test_next_false_at_last_position(self):
        assert not eval_finite(parse("X p"), [P_], 0)

    def test_until_witness(self):
        assert eval_finite(parse("p U q"), [P_, Q_], 0)

    def test_yesterday(self):
        assert eval_finite(parse("Y p"), [P_, E], 1)
        assert not eval_finite(parse("Y p"), [P_], 0)

    def test_weak_yesterday_true_at_start(self):
        assert eval_finite(parse("wY false"), [E], 0)
        assert not eval_finite(parse("wY false"), [E, E], 1)

    def test_g_wx_false_has_one_letter_model(self):
        assert eval_model_finite(parse("G (wX false)"), [P_])
        assert not eval_model_finite(parse("G (wX false)"), [P_, P_])

    def test_since_at_last_position(self):
        assert eval_model_finite(parse("p S q"), [Q_, P_], mode="last")

    def test_eventually_fails_without_p(self):
        assert not eval_model_finite(parse("F p"), [E, E])

    def test_release_is_weak(self):
        # q held until the end of the trace suffices
        assert eval_finite(parse("p R q"), [Q_, Q_], 0)
        assert not eval_finite(parse("p R q"), [Q_, E], 0)

    def test_triggered(self):
        assert eval_finite(parse("p T q"), [E, Q_], 1) is False
        assert eval_finite(parse("p T q"), [Q_, Q_], 1)
        assert eval_finite(parse("p T q"), [E, frozenset({"p", "q"}), Q_], 2)

    def test_last_mode_needs_pure_past(self):
        with pytest.raises(UnsupportedFormulaError):
            eval_model_finite(parse("X p"), [P_], mode="last")

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            eval_finite(parse("p"), [], 0)

    def test_position_out_of_range(self):
        with pytest.raises(IndexError):
            eval_finite(parse("p"), [P_], 1)

    def test_alphabet_check(self):
        with pytest.raises(UnknownAtomError):
            eval_finite(parse("r"), [P_], 0, Alphabet.of("p"))


class TestLassoExamples:
    def test_globally_on_constant_loop(self):
        assert eval_lasso(parse("G p"), Lasso((), (P_,)))

    @pytest.mark.parametrize("w", [Lasso((), (E,)), Lasso((P_,), (Q_, E)), Lasso((E, E), (P_,))])
    def test_g_wx_false_has_no_infinite_model(self, w):
        assert not eval_lasso(parse("G (wX false)"), w)

    def test_eventually_since(self):
        assert eval_lasso(parse("F (p S q)"), Lasso((Q_,), (P_,)))

    def test_interior_position(self):
        w = Lasso((E,), (P_, E))
        f = parse("X p")
        assert [eval_lasso(f, w, i) for i in range(5)] == [True, False, True, False, True]

    def test_globally_alpha(self):
        assert eval_lasso(parse("G (wY false | Y p | p)"), Lasso((), (P_, E)))
        assert not eval_lasso(parse("G (wY false | Y p)"), Lasso((), (P_, E, E)))

    def test_mixed_formula_unsupported(self):
        with pytest.raises(UnsupportedFormulaError):
            eval_lasso(parse("X (Y p)"), Lasso((), (P_,)))

    def test_acceptance_stream_repeats(self):
        bits, start = lasso_acceptance_stream(parse("Y p"), Lasso((E,), (P_, E)))
        assert bits[:3] == [False, False, True]
        assert bits[start:] and len(bits) - start == 2

    def test_concatenation(self):
        assert concat_is_model(parse("F p"), (P_,), Lasso((), (E,)))
        assert concat_is_model(parse("p U q"), (P_, Q_), Lasso((), (E, P_)))
        assert concat_is_model(parse("p U q"), (P_, Q_), Lasso((P_,), (Q_,)))
        assert not concat_is_model(parse("G p"), (P_,), Lasso((), (E,)))

    def test_empty_loop_rejected(self):
        with pytest.raises(ValueError):
            Lasso((P_,), ())


def _all_ltlp(max_size):
    table = by_size(
        max_size,
        {1: literals(["p", "q"]) + [TOP, BOT]},
        [(Next, 1), (WeakNext, 1), (Yesterday, 1), (WeakYesterday, 1)],
        [And, Or, Until, Release, Since, Triggered],
    )
    return [f for row in table for f in row]


def test_dynamic_programming_matches_naive_evaluator_exhaustively():
    # every LTLP formula of size <= 4, every trace of length <= 6 over {p, q}
    fs = _all_ltlp(4)
    letters = letters_over(["p", "q"])
    for n in range(1, 7):
        batch = TraceBatch(list(itertools.product(letters, repeat=n)))
        table: dict = {}
        for f in fs:
            vec = batch_vectors(f, batch, table)
            for i in range(n):
                assert vec[i] == naive_mask(f, batch, i), (f, n, i)


@given(formulas(), traces(), st.data())
def test_single_trace_evaluation_matches_naive(f, t, data):
    i = data.draw(st.integers(0, len(t) - 1))
    assert eval_finite(f, t, i) == naive_finite(f, t, i)


@given(formulas(past=False), lassos(), st.integers(0, 7))
def test_lasso_evaluation_matches_bounded_quantifiers(f, w, i):
    assert eval_lasso(f, w, i) == naive_lasso(f, w, i)


@given(formulas(future=False, max_leaves=6), lassos(max_prefix=2, max_loop=2), st.booleans())
def test_lasso_galpha_falpha_matches_unrolling(alpha, w, eventually):
    f = Until(TOP, alpha) if eventually else Release(BOT, alpha)
    assert eval_lasso(f, w) == naive_lasso(f, w)


@given(formulas(past=False, max_leaves=8), lassos(max_prefix=2, max_loop=2), st.integers(1, 8))
def test_finite_prefixes_decide_cosafety_and_safety(f, w, k):
    # a finite model of a cosafety formula is a good prefix, and a finite
    # counterexample to a safety formula is a bad prefix
    trace = w.unroll(k)
    frags = classify(f)
    if Fragment.cosafetyLTL in frags and eval_finite(f, trace, 0):
        assert eval_lasso(f, w)
    if Fragment.safetyLTL in frags and not eval_finite(f, trace, 0):
        assert not eval_lasso(f, w)


@given(formulas(past=False, max_leaves=8), traces(max_size=4), lassos())
def test_suffix_independence_of_cosafety(f, u, v):
    if Fragment.cosafetyLTL in classify(f) and eval_finite(f, u, 0):
        assert concat_is_model(f, u, v)


class TestTraceText:
    def test_finite(self):
        assert parse_trace("{p};{p,q};{}") == (P_, frozenset({"p", "q"}), E)

    def test_lasso(self):
        assert parse_trace("{p};{p,q};({q})*") == Lasso((P_, frozenset({"p", "q"})), (Q_,))
        assert parse_trace("({q};{})*") == Lasso((), (Q_, E))

    def test_spaces_allowed(self):
        assert parse_trace(" { p , q } ; ( { } )* ") == Lasso((frozenset({"p", "q"}),), (E,))

    @pytest.mark.parametrize("text", ["", "{p", "{p};(", "{p}({q})*", "{p};(q)*", "{1x}", "({})"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_trace(text)

    @given(traces())
    def test_finite_roundtrip(self, t):
        assert parse_trace(format_trace(t)) == t

    @given(lassos())
    def test_lasso_roundtrip(self, w):
        assert parse_trace(format_trace(w)) == w

    def test_format(self):
        assert format_trace(Lasso((frozenset({"q", "p"}),), (E,))) == "{p,q};({})*"
