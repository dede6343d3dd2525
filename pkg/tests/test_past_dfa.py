import pytest
from hypothesis import given

from ltlfrag.errors import FragmentError
from ltlfrag.families import pure_past, words_up_to
from ltlfrag.formula import parse, subformulas
from ltlfrag.past_dfa import PastDFA, build_past_dfa, run
from ltlfrag.semantics import eval_model_finite

from strategies import formulas, traces

E = frozenset()
P_ = frozenset({"p"})
Q_ = frozenset({"q"})


class TestExamples:
    def test_atom(self):
        d = build_past_dfa(parse("p"))
        assert len(d) == 1
        assert run(d, [P_])[1]
        assert run(d, [E, P_])[1]
        assert not run(d, [P_, E])[1]

    def test_yesterday(self):
        d = build_past_dfa(parse("Y p"))
        assert run(d, [P_, E])[1]
        assert not run(d, [E])[1]
        assert not run(d, [P_])[1]

    def test_since(self):
        d = build_past_dfa(parse("p S q"))
        assert run(d, [Q_, P_, P_])[1]
        assert run(d, [E, Q_])[1]
        assert not run(d, [Q_, E])[1]

    def test_weak_yesterday_at_start(self):
        d = build_past_dfa(parse("wY false"))
        assert run(d, [E])[1]
        assert not run(d, [E, E])[1]

    def test_triggered(self):
        d = build_past_dfa(parse("H p"))
        assert run(d, [P_, P_])[1]
        assert not run(d, [E, P_])[1]


def test_future_operators_rejected():
    with pytest.raises(FragmentError):
        build_past_dfa(parse("X p"))
    with pytest.raises(FragmentError):
        PastDFA(parse("p S F q"))


def test_empty_word_rejected():
    with pytest.raises(ValueError):
        run(build_past_dfa(parse("p")), [])


def test_start_is_not_accepting():
    d = build_past_dfa(parse("wY false"))
    assert not d.accepting(d.START)


def test_value_reads_tracked_subformulas():
    f = parse("p S q")
    d = build_past_dfa(f)
    state, _ = run(d, [Q_, P_])
    assert d.value(state, parse("p"))
    assert not d.value(state, parse("q"))
    assert d.value(state, f)


def test_exhaustive_agreement_on_small_formulas():
    for f in pure_past(["p", "q"], 4):
        d = build_past_dfa(f)
        for w in words_up_to(["p", "q"], 4):
            assert run(d, w)[1] == eval_model_finite(f, w, mode="last"), (f, w)


@given(formulas(future=False), traces())
def test_acceptance_is_last_position_truth(f, w):
    assert run(build_past_dfa(f), w)[1] == eval_model_finite(f, w, mode="last")


@given(formulas(future=False, max_leaves=5))
def test_transition_table_is_total_and_bounded(f):
    d = build_past_dfa(f)
    states, delta = d.reachable(["p", "q"])
    assert len(states) <= 2 ** len(subformulas(f))
    sources = [d.START] + states
    assert len(delta) == 4 * len(sources)
    for (q, letter), r in delta.items():
        assert d.step(q, letter) == r
        assert r in states


def test_irrelevant_atoms_do_not_change_the_state():
    d = build_past_dfa(parse("Y p"))
    s = d.initial({"p"})
    assert d.step(s, {"q"}) == d.step(s, frozenset())


def test_to_dot():
    text = build_past_dfa(parse("p S q")).to_dot()
    assert text.startswith("digraph pastdfa {")
    assert "doublecircle" in text
    assert "start ->" in text
    assert text.rstrip().endswith("}")
