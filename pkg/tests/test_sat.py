import pytest
from hypothesis import given, settings

from ltlfrag.errors import FragmentError, UnsupportedFormulaError
from ltlfrag.families import words_up_to
from ltlfrag.formula import Fragment, classify, negate_nnf, parse
from ltlfrag.sat import (
    SAFETY_FRAGMENTS,
    Status,
    Validity,
    bounded_model_oracle,
    lyndon_words,
    past_nonempty,
    sat,
    sat_cosafety_infinite,
    sat_finite_progression,
    sat_safety_finite_one_state,
    valid,
)
from ltlfrag.semantics import Lasso, eval_finite, eval_lasso, eval_model_finite

from strategies import formulas

E = frozenset()
P_ = frozenset({"p"})


class TestProgression:
    def test_g_wx_false(self):
        v = sat_finite_progression(parse("G (wX false)"))
        assert v.status is Status.SAT and len(v.witness) == 1

    def test_contradiction(self):
        assert sat_finite_progression(parse("p & !p")).status is Status.UNSAT

    def test_next_against_globally(self):
        assert sat_finite_progression(parse("X p & G !p")).status is Status.UNSAT

    def test_shortest_witness(self):
        v = sat_finite_progression(parse("X X p"))
        assert len(v.witness) == 3 and "p" in v.witness[2]

    def test_budget(self):
        v = sat_finite_progression(parse("G !q & F (p & X X X X q)"), max_states=2)
        assert v.status is Status.UNKNOWN and v.bound == (2,)

    def test_rejects_past(self):
        with pytest.raises(FragmentError):
            sat_finite_progression(parse("Y p"))

    @given(formulas(past=False, max_leaves=8))
    @settings(deadline=None)
    def test_witnesses_are_models(self, f):
        v = sat_finite_progression(f)
        if v.is_sat:
            assert eval_finite(f, v.witness, 0)
        else:
            assert v.status is Status.UNSAT
            assert not any(eval_finite(f, w, 0) for w in words_up_to(["p", "q"], 3))


class TestOneState:
    def test_examples(self):
        v = sat_safety_finite_one_state(parse("G (p | q)"))
        assert v.is_sat and len(v.witness) == 1 and v.witness[0] & {"p", "q"}
        assert sat_safety_finite_one_state(parse("G (wX false)")).witness == (E,)
        assert sat_safety_finite_one_state(parse("G (p & !p)")).status is Status.UNSAT

    def test_rejects_other_fragments(self):
        with pytest.raises(FragmentError):
            sat_safety_finite_one_state(parse("F p"))

    def test_galpha(self):
        assert sat_safety_finite_one_state(parse("G (wY false | Y p)")).is_sat
        assert sat_safety_finite_one_state(parse("G (Y p)")).status is Status.UNSAT

    @given(formulas(max_leaves=10))
    @settings(deadline=None)
    def test_agrees_with_progression(self, f):
        if not classify(f) & set(SAFETY_FRAGMENTS) or Fragment.LTL not in classify(f):
            return
        one = sat_safety_finite_one_state(f, ["p", "q"])
        full = sat_finite_progression(f, names=["p", "q"])
        assert one.is_sat == full.is_sat
        if full.is_sat:
            # the first letter of any witness is a witness by itself
            assert eval_finite(f, full.witness[:1], 0)


class TestPastNonempty:
    def test_since(self):
        v = past_nonempty(parse("p S q"))
        assert v.is_sat and eval_model_finite(parse("p S q"), v.witness, mode="last")

    def test_empty(self):
        assert past_nonempty(parse("Y false")).status is Status.UNSAT
        assert past_nonempty(parse("H p & !p")).status is Status.UNSAT

    def test_shortest(self):
        assert len(past_nonempty(parse("Y Y p")).witness) == 3


class TestCosafetyInfinite:
    def test_eventually_since(self):
        v = sat_cosafety_infinite(parse("F (p S q)"))
        assert v.is_sat and isinstance(v.witness, Lasso)

    def test_contradiction(self):
        assert sat_cosafety_infinite(parse("p U (q & X false)")).status is Status.UNSAT

    def test_g_of_globally(self):
        from ltlfrag.transforms import translate_g

        g, _ = translate_g(parse("G p"))
        v = sat_cosafety_infinite(g)
        assert v.is_sat and eval_lasso(g, v.witness)
        assert bounded_model_oracle(g, 3, 2).is_sat

    def test_rejects_safety(self):
        with pytest.raises(FragmentError):
            sat_cosafety_infinite(parse("G p"))

    @given(formulas(past=False, max_leaves=8))
    @settings(deadline=None)
    def test_agrees_with_lasso_oracle(self, f):
        if Fragment.cosafetyLTL not in classify(f):
            return
        exact = sat_cosafety_infinite(f)
        bounded = bounded_model_oracle(f, 3, 2)
        if bounded.is_sat:
            assert exact.is_sat
        if exact.status is Status.UNSAT:
            assert not bounded.is_sat


class TestOracle:
    def test_g_wx_false(self):
        assert bounded_model_oracle(parse("G (wX false)"), 3).is_sat
        v = bounded_model_oracle(parse("G (wX false)"), 3, 3)
        assert v.status is Status.UNSAT and v.bound == (3, 3)

    def test_eventually(self):
        v = bounded_model_oracle(parse("F p"), 2, 2)
        assert v.is_sat and eval_lasso(parse("F p"), v.witness)

    def test_galpha_lasso(self):
        f = parse("G (wY false | (p <-> !Y p))")
        v = bounded_model_oracle(f, 2, 2)
        assert v.is_sat and eval_lasso(f, v.witness)

    def test_budget_gives_unknown(self):
        f = parse("G !q & F (p & X X X X q)")
        assert bounded_model_oracle(f, 6).status is Status.UNSAT
        assert bounded_model_oracle(f, 6, budget=10).status is Status.UNKNOWN
        assert bounded_model_oracle(parse("G (Y false | (p & !p & q))"), 4, 4, budget=10).status is Status.UNKNOWN

    def test_mixed_unsupported(self):
        with pytest.raises(UnsupportedFormulaError):
            bounded_model_oracle(parse("X (Y p)"), 2, 2)

    def test_lyndon_words(self):
        assert lyndon_words(["a", "b"], 3) == [
            ("a",), ("b",), ("a", "b"), ("a", "a", "b"), ("a", "b", "b"),
        ]

    @given(formulas(past=False, max_leaves=8))
    @settings(deadline=None)
    def test_finite_oracle_matches_enumeration(self, f):
        v = bounded_model_oracle(f, 3, names=["p", "q"])
        found = any(eval_finite(f, w, 0) for w in words_up_to(["p", "q"], 3))
        assert v.is_sat == found
        if v.is_sat:
            assert len(v.witness) <= 3 and eval_finite(f, v.witness, 0)


class TestDispatch:
    def test_auto_methods(self):
        assert sat(parse("G p")).method == "one-state"
        assert sat(parse("F p")).method == "progression"
        assert sat(parse("F (p S q)")).method == "past-dfa"
        assert sat(parse("F p"), kind="infinite").method == "progression"
        assert sat(parse("F (p S q)"), kind="infinite").method == "past-dfa"

    def test_bounded_search_never_answers_unsat(self):
        v = sat(parse("G (wX false)"), kind="infinite")
        assert v.status is Status.UNKNOWN

    def test_infinite_safety_model_found(self):
        v = sat(parse("G (p -> X !p)"), kind="infinite")
        assert v.is_sat and isinstance(v.witness, Lasso)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            sat(parse("p"), kind="weird")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            sat(parse("p"), method="weird")


class TestValid:
    def test_eventually_not_valid(self):
        v = valid(parse("F p"))
        assert v.status is Validity.INVALID and v.counterexample == (E,)

    def test_globally_true(self):
        assert valid(parse("G true")).status is Validity.VALID

    def test_weak_next_false(self):
        v = valid(parse("wX false"))
        assert v.status is Validity.INVALID and len(v.counterexample) == 2

    def test_excluded_middle_infinite(self):
        assert valid(parse("F p | G !p"), kind="infinite").status is Validity.UNKNOWN
        assert valid(parse("p | !p"), kind="infinite").status is Validity.VALID

    @given(formulas(past=False, max_leaves=8))
    @settings(deadline=None)
    def test_agrees_with_bounded_enumeration(self, f):
        v = valid(f)
        assert v.status is not Validity.UNKNOWN
        refuted = any(not eval_finite(f, w, 0) for w in words_up_to(["p", "q"], 3))
        if refuted:
            assert v.status is Validity.INVALID
        if v.status is Validity.INVALID:
            assert eval_finite(negate_nnf(f), v.counterexample, 0)
