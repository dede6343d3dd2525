"""Satisfiability, validity and realizability for safety and cosafety LTL with past."""

from .errors import (
    FragmentError,
    LtlFragError,
    ParseError,
    UnknownAtomError,
    UnsupportedFormulaError,
)
from .formula import (
    Alphabet,
    Formula,
    Fragment,
    classify,
    negate_nnf,
    parse,
    render,
    size,
)
from .past_dfa import PastDFA, build_past_dfa
from .realize import (
    RealizabilityInstance,
    RealStatus,
    RealVerdict,
    StrategyMachine,
    realize,
    validate_strategy,
)
from .sat import SatVerdict, Status, ValidVerdict, Validity, sat, valid
from .semantics import Lasso, eval_finite, eval_lasso, format_trace, parse_trace
from .tiling import TilingStructure, crosscheck_encoding, encode_galpha, solve_tiling_game_bruteforce
from .transforms import (
    ENDT,
    PartitionedAlphabet,
    dualize,
    galpha_dual,
    mealy_shift,
    pastify,
    translate_f,
    translate_g,
)

__version__ = "0.1.0"

__all__ = [
    "ENDT",
    "Alphabet",
    "Formula",
    "Fragment",
    "FragmentError",
    "Lasso",
    "LtlFragError",
    "ParseError",
    "PartitionedAlphabet",
    "PastDFA",
    "RealStatus",
    "RealVerdict",
    "RealizabilityInstance",
    "SatVerdict",
    "Status",
    "StrategyMachine",
    "TilingStructure",
    "UnknownAtomError",
    "UnsupportedFormulaError",
    "ValidVerdict",
    "Validity",
    "build_past_dfa",
    "classify",
    "crosscheck_encoding",
    "dualize",
    "encode_galpha",
    "eval_finite",
    "eval_lasso",
    "format_trace",
    "galpha_dual",
    "mealy_shift",
    "negate_nnf",
    "parse",
    "parse_trace",
    "pastify",
    "realize",
    "render",
    "sat",
    "size",
    "solve_tiling_game_bruteforce",
    "translate_f",
    "translate_g",
    "valid",
    "validate_strategy",
]
