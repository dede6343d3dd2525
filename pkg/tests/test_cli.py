import json

import pytest

from ltlfrag.cli import EXIT_NO, EXIT_PARSE, EXIT_UNKNOWN, EXIT_USAGE, EXIT_YES, run
from ltlfrag.realize import StrategyMachine


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestClassify:
    def test_falpha(self, capsys):
        code, out, _ = call(capsys, "classify", "F (p S q)")
        assert code == EXIT_YES
        assert "Falpha" in out.split()

    def test_json(self, capsys):
        _, out, _ = call(capsys, "classify", "--json", "p U q")
        data = json.loads(out)
        assert data["formula"] == "p U q" and "cosafetyLTL" in data["fragments"]


class TestEval:
    def test_finite(self, capsys):
        assert call(capsys, "eval", "wX false", "{p}")[:2] == (EXIT_YES, "true\n")
        assert call(capsys, "eval", "X p", "{p}")[:2] == (EXIT_NO, "false\n")

    def test_position(self, capsys):
        assert call(capsys, "eval", "Y p", "{p};{}", "--position", "1")[0] == EXIT_YES
        assert call(capsys, "eval", "p", "{p}", "--position", "3")[0] == EXIT_USAGE

    def test_lasso(self, capsys):
        assert call(capsys, "eval", "G p", "({p})*")[0] == EXIT_YES
        assert call(capsys, "eval", "G (wX false)", "{p};({})*")[0] == EXIT_NO


class TestSat:
    def test_g_wx_false(self, capsys):
        code, out, _ = call(capsys, "sat", "--trace", "finite", "--witness", "G (wX false)")
        assert code == EXIT_YES
        assert out.split() == ["SAT", "{}"]

    def test_unsat(self, capsys):
        assert call(capsys, "sat", "p & !p")[0] == EXIT_NO

    def test_unknown(self, capsys):
        assert call(capsys, "sat", "--trace", "infinite", "G (wX false)")[0] == EXIT_UNKNOWN

    def test_fragment_flag(self, capsys):
        code, out, _ = call(capsys, "sat", "--json", "--fragment", "safetyLTL", "G p")
        assert code == EXIT_YES and json.loads(out)["method"] == "one-state"
        assert call(capsys, "sat", "--fragment", "safetyLTL", "F p")[0] == EXIT_USAGE
        assert call(capsys, "sat", "--fragment", "nonsense", "F p")[0] == EXIT_USAGE
        assert call(capsys, "sat", "--fragment", "LTL", "--method", "oracle", "F p")[0] == EXIT_USAGE

    def test_json(self, capsys):
        _, out, _ = call(capsys, "sat", "--json", "--trace", "infinite", "F (p S q)")
        data = json.loads(out)
        assert data["status"] == "SAT" and data["witness"].endswith(")*")
        assert set(data) == {"status", "witness", "method", "bound", "stats"}


class TestValid:
    def test_eventually(self, capsys):
        code, out, _ = call(capsys, "valid", "--witness", "F p")
        assert code == EXIT_NO and out.split() == ["INVALID", "{}"]

    def test_valid(self, capsys):
        assert call(capsys, "valid", "G true")[0] == EXIT_YES

    def test_fragment_membership(self, capsys):
        assert call(capsys, "valid", "--fragment", "cosafetyLTL", "F p")[0] == EXIT_NO
        assert call(capsys, "valid", "--fragment", "Galpha", "F p")[0] == EXIT_USAGE


class TestRealize:
    def test_example(self, capsys):
        code, out, _ = call(capsys, "realize", "--inputs", "u", "--outputs", "c", "--trace", "finite", "G (u -> c)")
        assert code == EXIT_YES
        assert out.splitlines()[0] == "REALIZABLE"

    def test_unrealizable(self, capsys):
        assert call(capsys, "realize", "--inputs", "u", "--trace", "infinite", "G u")[0] == EXIT_NO

    def test_unknown(self, capsys):
        code = call(capsys, "realize", "--inputs", "u", "--method", "oracle", "F u")[0]
        assert code == EXIT_UNKNOWN

    def test_unassigned_atom(self, capsys):
        code, _, err = call(capsys, "realize", "--inputs", "u", "G (u -> c)")
        assert code == EXIT_USAGE and "c" in err

    def test_overlapping_partition(self, capsys):
        assert call(capsys, "realize", "--inputs", "u", "--outputs", "u", "G u")[0] == EXIT_USAGE

    def test_strategy_file(self, capsys, tmp_path):
        target = tmp_path / "strategy.txt"
        code = call(capsys, "realize", "--inputs", "u", "--outputs", "c", "--trace", "infinite",
                    "--strategy-out", str(target), "G (wY false | (c <-> Y u))")[0]
        assert code == EXIT_YES
        m = StrategyMachine.from_text(target.read_text())
        assert m.inputs == ("u",) and m.outputs == ("c",) and m.is_total()

    def test_json_is_deterministic(self, capsys):
        argv = ["realize", "--json", "--inputs", "u", "--outputs", "c", "--trace", "infinite",
                "G (wY false | (c <-> Y u))"]
        first = call(capsys, *argv)[1]
        second = call(capsys, *argv)[1]
        assert first == second
        data = json.loads(first)
        assert data["status"] == "REALIZABLE" and data["strategy"]["inputs"] == ["u"]

    def test_wrong_method_for_fragment(self, capsys):
        assert call(capsys, "realize", "--inputs", "u", "--outputs", "c", "--method", "2qbf", "F c")[0] == EXIT_USAGE


class TestTransform:
    def test_f(self, capsys):
        assert call(capsys, "transform", "f", "X p")[1] == "X (!endt & p)\n"

    def test_g_partition_line(self, capsys):
        code, out, _ = call(capsys, "transform", "g", "--inputs", "u", "--outputs", "c", "u U c")
        assert code == EXIT_YES
        assert out.splitlines()[1] == "--inputs u --outputs c,endt"

    def test_pastify(self, capsys):
        assert call(capsys, "transform", "pastify", "p S X c")[1] == "Y p S (c & Y true)\n"

    def test_galpha_dual(self, capsys):
        code, out, _ = call(capsys, "transform", "galpha-dual", "--outputs", "c", "F c")
        assert out.splitlines() == ["G (wY false | !c)", "--inputs c"]

    def test_rejected(self, capsys):
        assert call(capsys, "transform", "f", "Y p")[0] == EXIT_USAGE


class TestGenTiling:
    def test_instance(self, capsys):
        code, out, _ = call(capsys, "gen-tiling", "tiles: a; border: a; H: a>a; V: a>a; n: 2")
        flags, formula = out.splitlines()
        assert code == EXIT_YES
        assert flags == "--inputs a_u --outputs a_c,b --trace infinite"
        assert formula.startswith("G ")

    def test_output_round_trips_through_realize(self, capsys):
        _, out, _ = call(capsys, "gen-tiling", "tiles: a; border: a; H: a>a; V: a>a", "--n", "2")
        flags, formula = out.splitlines()
        assert call(capsys, "realize", *flags.split(), formula)[0] == EXIT_YES

    def test_missing_height(self, capsys):
        assert call(capsys, "gen-tiling", "tiles: a; border: a")[0] == EXIT_USAGE
        assert call(capsys, "gen-tiling", "tiles: a; border: a; n: 1")[0] == EXIT_USAGE

    def test_bad_structure(self, capsys):
        assert call(capsys, "gen-tiling", "tiles: a")[0] == EXIT_PARSE


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["sat", "p &"], ["classify", "(p"], ["eval", "p", "{p"], ["realize", "--inputs", "u", "u $ c"],
    ])
    def test_parse_errors(self, capsys, argv):
        code, _, err = call(capsys, *argv)
        assert code == EXIT_PARSE and err.startswith("parse error")

    @pytest.mark.parametrize("argv", [
        [], ["frobnicate"], ["sat"], ["sat", "--trace", "sometimes", "p"], ["selftest", "--only", "x"],
        ["selftest", "--only", "13"],
    ])
    def test_usage_errors(self, capsys, argv):
        assert call(capsys, *argv)[0] == EXIT_USAGE


class TestSelftest:
    def test_single_criterion(self, capsys):
        code, out, _ = call(capsys, "selftest", "--only", "6")
        assert code == EXIT_YES
        assert "[PASS]" in out and out.rstrip().endswith("1/1 criteria passed")

    def test_json(self, capsys):
        code, out, _ = call(capsys, "selftest", "--json", "--only", "6,11")
        data = json.loads(out)
        assert code == EXIT_YES and data["passed"] == 2 and data["failed"] == 0
        assert [c["number"] for c in data["criteria"]] == [6, 11]
