"""Command-line front end.

Exit codes: 0 for a positive answer (SAT, VALID, REALIZABLE, true),
1 for a negative one, 2 for UNKNOWN, 64 for usage errors and 65 for
input that does not parse.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FragmentError, LtlFragError, ParseError, UnsupportedFormulaError
from .formula import Fragment, atoms, classify, parse, render, size
from .realize import METHODS as REAL_METHODS
from .realize import RealizabilityInstance, RealStatus, realize
from .sat import Status, Validity, sat, valid
from .semantics import Lasso, eval_finite, eval_lasso, format_trace, parse_trace
from .tiling import encode_galpha, parse_tiling
from .transforms import PartitionedAlphabet, dualize, galpha_dual, pastify, translate_f, translate_g

EXIT_YES, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_PARSE = 64, 65

SAT_METHODS = ("auto", "one-state", "progression", "cosafety", "past-dfa", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _names(text: str | None) -> list[str]:
    return [n.strip() for n in (text or "").split(",") if n.strip()]


def _method_for_fragment(name: str, f, kind: str) -> str:
    """Decider implied by ``--fragment``, after checking membership."""
    try:
        frag = Fragment.from_name(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if frag not in classify(f):
        raise UsageError(f"formula is not in {frag.value}: {render(f)}")
    if kind == "finite":
        if frag in (Fragment.LTL_wXG, Fragment.safetyLTL, Fragment.Galpha):
            return "one-state"
        if frag is Fragment.Falpha:
            return "past-dfa"
        if frag in (Fragment.LTL, Fragment.cosafetyLTL, Fragment.LTL_XF):
            return "progression"
        return "oracle"
    if frag in (Fragment.cosafetyLTL, Fragment.LTL_XF, Fragment.Falpha):
        return "cosafety"
    return "oracle"


def _flags(inputs, outputs) -> str:
    parts = []
    if inputs:
        parts.append("--inputs " + ",".join(inputs))
    if outputs:
        parts.append("--outputs " + ",".join(outputs))
    return " ".join(parts)


def _witness_text(w) -> str | None:
    return None if w is None else format_trace(w)


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


# Subcommands

def cmd_classify(args) -> int:
    f = parse(args.formula)
    frags = [frag.value for frag in Fragment if frag in classify(f)]
    _emit(args, {"formula": render(f), "fragments": frags, "size": size(f)}, frags)
    return EXIT_YES


def cmd_eval(args) -> int:
    f = parse(args.formula)
    trace = parse_trace(args.trace)
    if isinstance(trace, Lasso):
        value = eval_lasso(f, trace, args.position)
    else:
        if args.position >= len(trace):
            raise UsageError(f"position {args.position} is outside a trace of length {len(trace)}")
        value = eval_finite(f, trace, args.position)
    _emit(args, {"formula": render(f), "trace": format_trace(trace),
                 "position": args.position, "value": value}, [str(value).lower()])
    return EXIT_YES if value else EXIT_NO


def _sat_method(args, f) -> str:
    if args.fragment != "auto":
        if args.method != "auto":
            raise UsageError("--fragment and --method are mutually exclusive")
        return _method_for_fragment(args.fragment, f, args.trace)
    return args.method


def cmd_sat(args) -> int:
    f = parse(args.formula)
    v = sat(f, args.trace, _sat_method(args, f), args.max_states, args.max_len, args.max_loop)
    payload = {
        "status": v.status.value,
        "witness": _witness_text(v.witness),
        "method": v.method,
        "bound": list(v.bound) if v.bound else None,
        "stats": v.stats,
    }
    lines = [v.status.value]
    if args.witness and v.witness is not None:
        lines.append(_witness_text(v.witness))
    _emit(args, payload, lines)
    return {Status.SAT: EXIT_YES, Status.UNSAT: EXIT_NO}.get(v.status, EXIT_UNKNOWN)


def cmd_valid(args) -> int:
    f = parse(args.formula)
    if args.fragment != "auto":
        # only a membership check: the decider runs on the negation,
        # which lies in the dual fragment
        _method_for_fragment(args.fragment, f, args.trace)
    v = valid(f, args.trace, method=args.method, max_states=args.max_states,
              max_len=args.max_len, max_loop=args.max_loop)
    payload = {
        "status": v.status.value,
        "witness": _witness_text(v.counterexample),
        "method": v.method,
    }
    lines = [v.status.value]
    if args.witness and v.counterexample is not None:
        lines.append(_witness_text(v.counterexample))
    _emit(args, payload, lines)
    return {Validity.VALID: EXIT_YES, Validity.INVALID: EXIT_NO}.get(v.status, EXIT_UNKNOWN)


def _partition(args, f) -> PartitionedAlphabet:
    inputs, outputs = _names(args.inputs), _names(args.outputs)
    try:
        part = PartitionedAlphabet.of(inputs, outputs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    missing = atoms(f) - set(part.names)
    if missing:
        raise UsageError(f"atoms in neither --inputs nor --outputs: {','.join(sorted(missing))}")
    return part


def cmd_realize(args) -> int:
    f = parse(args.formula)
    inst = RealizabilityInstance(f, _partition(args, f), args.trace)
    v = realize(inst, args.method, args.max_states, args.depth)
    payload = {
        "status": v.status.value,
        "method": v.method,
        "check_depth": v.check_depth,
        "strategy": v.strategy.to_json() if v.strategy else None,
        "stats": v.stats,
    }
    lines = [v.status.value]
    if v.strategy is not None:
        if args.strategy_out:
            with open(args.strategy_out, "w") as fh:
                fh.write(v.strategy.to_text())
        elif not args.json:
            lines.append(v.strategy.to_text().rstrip("\n"))
    _emit(args, payload, lines)
    return {RealStatus.REALIZABLE: EXIT_YES, RealStatus.UNREALIZABLE: EXIT_NO}.get(
        v.status, EXIT_UNKNOWN
    )


def cmd_transform(args) -> int:
    f = parse(args.formula)
    part = None
    if args.kind in ("g", "dual", "galpha-dual"):
        if args.kind == "g" and args.inputs is None and args.outputs is None:
            part = None
        else:
            part = _partition(args, f)
    if args.kind == "f":
        out, out_part = translate_f(f, guarded=not args.verbatim), None
    elif args.kind == "g":
        out, out_part = translate_g(f, part, guarded=not args.verbatim)
    elif args.kind == "dual":
        out, out_part = dualize(f, part)
    elif args.kind == "pastify":
        out, out_part = pastify(f), None
    else:
        out, out_part = galpha_dual(f, part)
    payload = {"formula": render(out)}
    lines = [render(out)]
    if out_part is not None:
        payload["inputs"] = list(out_part.inputs)
        payload["outputs"] = list(out_part.outputs)
        lines.append(_flags(out_part.inputs, out_part.outputs))
    _emit(args, payload, lines)
    return EXIT_YES


def cmd_gen_tiling(args) -> int:
    n, ts = parse_tiling(args.structure)
    if args.n is not None:
        n = args.n
    if n is None:
        raise UsageError("corridor height missing: give 'n: <k>' or --n")
    try:
        inst = encode_galpha(n, ts, verbatim=args.verbatim)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = render(inst.formula)
    payload = {
        "formula": text,
        "inputs": list(inst.inputs),
        "outputs": list(inst.outputs),
        "trace": "infinite",
        "size": size(inst.formula),
    }
    lines = [
        _flags(inst.inputs, inst.outputs) + " --trace infinite",
        text,
    ]
    _emit(args, payload, lines)
    return EXIT_YES


def cmd_selftest(args) -> int:
    from .selftest import CRITERIA, run_criteria

    only = None
    if args.only:
        try:
            only = [int(k) for k in args.only.split(",")]
        except ValueError as exc:
            raise UsageError(f"--only takes criterion numbers, got {args.only!r}") from exc
        unknown = set(only) - set(CRITERIA)
        if unknown:
            raise UsageError(f"no such criteria: {sorted(unknown)}")
    results = run_criteria(only, echo=not args.json)
    passed = sum(r.passed for r in results)
    if args.json:
        print(json.dumps({
            "passed": passed,
            "failed": len(results) - passed,
            "criteria": [r.to_json() for r in results],
        }, sort_keys=True))
    else:
        print(f"{passed}/{len(results)} criteria passed")
    return EXIT_YES if passed == len(results) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltlfrag", description="Safety and cosafety LTL with past.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def command(name: str, fn, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(fn=fn)
        return p

    p = command("classify", cmd_classify, "list the fragments a formula belongs to")
    p.add_argument("formula")

    p = command("eval", cmd_eval, "evaluate a formula on a finite trace or lasso")
    p.add_argument("formula")
    p.add_argument("trace", help="e.g. '{p};{p,q}' or '{p};({q})*'")
    p.add_argument("--position", type=int, default=0)

    for name, fn in (("sat", cmd_sat), ("valid", cmd_valid)):
        p = command(name, fn, f"{name}isfiability" if name == "sat" else "validity")
        p.add_argument("formula")
        p.add_argument("--trace", choices=("finite", "infinite"), default="finite")
        p.add_argument("--fragment", default="auto", help="auto or a fragment name")
        p.add_argument("--method", choices=SAT_METHODS, default="auto")
        p.add_argument("--witness", action="store_true", help="print the witness trace")
        p.add_argument("--max-states", type=int, default=200_000)
        p.add_argument("--max-len", type=int, default=4)
        p.add_argument("--max-loop", type=int, default=4)

    p = command("realize", cmd_realize, "realizability with strategy extraction")
    p.add_argument("formula")
    p.add_argument("--inputs", default="", help="Environment propositions, comma separated")
    p.add_argument("--outputs", default="", help="Controller propositions, comma separated")
    p.add_argument("--trace", choices=("finite", "infinite"), default="finite")
    p.add_argument("--method", choices=REAL_METHODS, default="auto")
    p.add_argument("--strategy-out", metavar="FILE")
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--depth", type=int, default=3, help="rounds for the bounded oracle")

    p = command("transform", cmd_transform, "apply a translation")
    p.add_argument("kind", choices=("f", "g", "dual", "pastify", "galpha-dual"))
    p.add_argument("formula")
    p.add_argument("--inputs")
    p.add_argument("--outputs")
    p.add_argument("--verbatim", action="store_true",
                   help="f/g: unguarded until clauses")

    p = command("gen-tiling", cmd_gen_tiling, "encode a corridor tiling game")
    p.add_argument("structure", help="e.g. 'tiles: a b; border: a; H: a>a; V: a>a; n: 3'")
    p.add_argument("--n", type=int)
    p.add_argument("--verbatim", action="store_true", help="unrepaired reduction (unsatisfiable)")

    p = command("selftest", cmd_selftest, "run the acceptance micro-suites")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FragmentError, UnsupportedFormulaError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LtlFragError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
