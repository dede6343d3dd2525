import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ltlfrag.errors import FragmentError
from ltlfrag.formula import (
    BOT,
    TOP,
    And,
    Atom,
    Fragment,
    NegAtom,
    Next,
    Or,
    Release,
    Since,
    Until,
    WeakYesterday,
    Yesterday,
    atoms,
    classify,
    is_falpha,
    is_galpha,
    is_pure_past,
    letters_over,
    parse,
    subformulas,
)
from ltlfrag.realize import RealizabilityInstance, real_falpha_infinite, real_galpha_infinite
from ltlfrag.sat import Status, sat
from ltlfrag.semantics import eval_finite
from ltlfrag.transforms import (
    ENDT,
    PartitionedAlphabet,
    dualize,
    galpha_dual,
    map_literals,
    mealy_shift,
    pastify,
    translate_f,
    translate_g,
)

from strategies import formulas

UC = PartitionedAlphabet.of(inputs=("u",), outputs=("c",))


class TestPartition:
    def test_disjoint(self):
        with pytest.raises(ValueError):
            PartitionedAlphabet(frozenset({"a"}), frozenset({"a"}))

    def test_swap_is_involution(self):
        assert UC.swapped().swapped() == UC
        assert UC.swapped().inputs == ("c",)

    def test_covering(self):
        part = UC.covering(parse("u & c & r"))
        assert part.inputs == ("r", "u")
        assert part.names == ("c", "r", "u")


class TestTranslateF:
    def test_next(self):
        assert translate_f(parse("X p")) == parse("X (!endt & p)")

    def test_weak_next(self):
        assert translate_f(parse("wX p")) == parse("X (endt | p)")

    def test_release_clause(self):
        assert translate_f(parse("p R q"), guarded=False) == parse(
            "(q U (q & X endt)) | (q U (p & q))"
        )

    def test_release_guarded(self):
        assert translate_f(parse("p R q")) == parse(
            "(q U (q & X endt)) | ((!endt & q) U (!endt & (p & q)))"
        )

    def test_until_guarded(self):
        assert translate_f(parse("p U q")) == parse("(!endt & p) U (!endt & q)")
        assert translate_f(parse("p U q"), guarded=False) == parse("p U (!endt & q)")

    def test_literals_unchanged(self):
        assert translate_f(parse("p & !q")) == parse("p & !q")

    def test_rejects_past(self):
        with pytest.raises(FragmentError):
            translate_f(parse("Y p"))

    def test_rejects_reserved_atom(self):
        with pytest.raises(FragmentError):
            translate_f(parse("F endt"))

    @given(formulas(past=False))
    def test_output_is_cosafety(self, f):
        assert Fragment.cosafetyLTL in classify(translate_f(f))
        assert Fragment.cosafetyLTL in classify(translate_f(f, guarded=False))


class TestTranslateG:
    def test_atom(self):
        g, part = translate_g(parse("p"))
        assert g == parse("!endt & p & (!endt U endt)")
        assert part.controllable == {"p", ENDT}

    def test_partition_keeps_inputs(self):
        _, part = translate_g(parse("u & c"), UC)
        assert part.inputs == ("u",)
        assert part.outputs == ("c", ENDT)

    def test_reserved_in_partition(self):
        with pytest.raises(FragmentError):
            translate_g(parse("p"), PartitionedAlphabet.of(outputs=("p", ENDT)))

    @pytest.mark.parametrize("text", ["F p", "G p", "p & !p", "G (wX false)", "X X p", "G (p -> X !p)"])
    def test_finite_sat_matches_infinite_sat_of_g(self, text):
        phi = parse(text)
        g, _ = translate_g(phi)
        assert sat(phi).is_sat == sat(g, kind="infinite").is_sat

    @given(formulas(names=("p",), past=False, max_leaves=6))
    @settings(max_examples=60, deadline=None)
    def test_finite_sat_matches_infinite_sat_property(self, phi):
        g, _ = translate_g(phi)
        a, b = sat(phi), sat(g, kind="infinite")
        assert Status.UNKNOWN not in (a.status, b.status)
        assert a.is_sat == b.is_sat

    @given(formulas(past=False, max_leaves=16))
    def test_size_is_linear(self, phi):
        # size measured as the number of distinct subformulas
        g, _ = translate_g(phi)
        assert len(subformulas(g)) <= 8 * len(subformulas(phi)) + 8


class TestMealy:
    def test_examples(self):
        part = PartitionedAlphabet.of(inputs=("u",), outputs=("c",))
        assert mealy_shift(parse("u & c"), part) == And(Next(Atom("u")), Atom("c"))
        assert mealy_shift(parse("!u"), part) == Next(NegAtom("u"))
        assert mealy_shift(parse("c U u"), part) == Until(Atom("c"), Next(Atom("u")))

    def test_map_literals_identity(self):
        f = parse("(p S q) U (X !r)")
        assert map_literals(f, lambda lit: lit) == f


class TestDualize:
    def test_eventually_controllable(self):
        f, part = dualize(parse("F c"), PartitionedAlphabet.of(outputs=("c",)))
        assert f == Release(BOT, Next(NegAtom("c")))
        assert part.inputs == ("c",) and part.outputs == ()

    def test_globally_uncontrollable(self):
        # only the new uncontrollables are shifted, and there are none here
        f, part = dualize(parse("G u"), PartitionedAlphabet.of(inputs=("u",)))
        assert f == Until(TOP, NegAtom("u"))
        assert part.outputs == ("u",) and part.inputs == ()

    def test_partition_swap(self):
        _, part = dualize(parse("u U c"), UC)
        assert part == UC.swapped()


class TestPastify:
    def test_next_cancels(self):
        assert pastify(parse("X c")) == Atom("c")

    def test_literal_moves_back(self):
        assert pastify(parse("p")) == Yesterday(Atom("p"))

    def test_since(self):
        assert pastify(parse("p S X c")) == Since(Yesterday(Atom("p")), And(Atom("c"), Yesterday(TOP)))

    def test_output_is_pure_past(self):
        assert is_pure_past(pastify(parse("(Y p T X !c) | wY X c")))

    @pytest.mark.parametrize("text", ["X X c", "X (p & c)", "p U c", "wX c"])
    def test_rejected(self, text):
        with pytest.raises(FragmentError):
            pastify(parse(text))

    def test_shift_contract_exhaustive(self):
        pool = [parse(t) for t in [
            "p", "!c", "X c", "X !p", "Y p", "wY X c", "p S X c", "X p T c",
            "Y (p & X c)", "wY (X !c | p)", "(Y p) S (X c & p)", "H (X c | P p)",
            "p T (wY false | X c)", "(X p S c) & Y X !c",
        ]]
        letters = letters_over(["c", "p"])
        for beta in pool:
            alpha = pastify(beta)
            for n in range(2, 6):
                for trace in itertools.product(letters, repeat=n):
                    for i in range(n - 1):
                        assert eval_finite(beta, trace, i) == eval_finite(alpha, trace, i + 1), (beta, trace, i)

    @given(
        formulas(names=("p", "c"), future=False, max_leaves=8),
        st.sets(st.sampled_from(["p", "c"])),
        st.lists(st.frozensets(st.sampled_from(["p", "c"])), min_size=2, max_size=5),
    )
    def test_shift_contract_property(self, core, shifted, trace):
        beta = map_literals(core, lambda lit: Next(lit) if lit.name in shifted else lit)
        alpha = pastify(beta)
        for i in range(len(trace) - 1):
            assert eval_finite(beta, trace, i) == eval_finite(alpha, trace, i + 1)


class TestGalphaDual:
    def test_eventually(self):
        f, part = galpha_dual(parse("F c"), PartitionedAlphabet.of(outputs=("c",)))
        assert f == Release(BOT, Or(WeakYesterday(BOT), NegAtom("c")))
        assert part.inputs == ("c",)

    def test_globally_since_goes_to_falpha(self):
        f, _ = galpha_dual(parse("G (u S c)"), UC)
        assert is_falpha(f)

    def test_rejects_other_formulas(self):
        with pytest.raises(FragmentError):
            galpha_dual(parse("u U c"), UC)

    @pytest.mark.parametrize("text", ["F c", "G (wY false | (c <-> Y u))", "F (u & c)", "G (u -> c)", "F (Y u & c)"])
    def test_equirealizable_complement(self, text):
        f = parse(text)
        d, dpart = galpha_dual(f, UC)
        inst = RealizabilityInstance(f, UC, "infinite")
        dual = RealizabilityInstance(d, dpart, "infinite")
        solve = real_galpha_infinite if is_galpha(f) else real_falpha_infinite
        solve_dual = real_galpha_infinite if is_galpha(d) else real_falpha_infinite
        assert solve(inst).realizable != solve_dual(dual).realizable

    @given(formulas(names=("u", "c"), future=False, max_leaves=6), st.booleans())
    @settings(max_examples=50, deadline=None)
    def test_double_dual_preserves_verdict(self, alpha, eventually):
        f = Until(TOP, alpha) if eventually else Release(BOT, alpha)
        part = UC.covering(f)
        d1, p1 = galpha_dual(f, part)
        d2, p2 = galpha_dual(d1, p1)
        assert p2 == part
        assert atoms(d2) <= set(part.names)

        def verdict(g, q):
            inst = RealizabilityInstance(g, q, "infinite")
            return (real_galpha_infinite if is_galpha(g) else real_falpha_infinite)(inst).realizable

        v = verdict(f, part)
        assert verdict(d1, p1) != v
        assert verdict(d2, p2) == v
