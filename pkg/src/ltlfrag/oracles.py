"""Reference evaluators written directly from the quantifier definitions.

These are deliberately slow and share no code with the dynamic-programming
evaluators, so they can be used to cross-check them.
"""

from __future__ import annotations

from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    NegAtom,
    Next,
    Or,
    Release,
    Since,
    Top,
    Triggered,
    Until,
    WeakNext,
    WeakYesterday,
    Yesterday,
    is_falpha,
    is_galpha,
    is_pure_future,
    subformulas,
)
from .errors import UnsupportedFormulaError
from .semantics import Lasso, TraceBatch, batch_vectors


def naive_mask(f: Formula, batch: TraceBatch, i: int) -> int:
    """Bit-set of the traces in ``batch`` whose position ``i`` satisfies ``f``."""
    n = batch.length
    full = batch.full
    if isinstance(f, Atom):
        return batch.atom(f.name)[i]
    if isinstance(f, NegAtom):
        return full ^ batch.atom(f.name)[i]
    if isinstance(f, Top):
        return full
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, And):
        return naive_mask(f.left, batch, i) & naive_mask(f.right, batch, i)
    if isinstance(f, Or):
        return naive_mask(f.left, batch, i) | naive_mask(f.right, batch, i)
    if isinstance(f, Next):
        return naive_mask(f.arg, batch, i + 1) if i + 1 < n else 0
    if isinstance(f, WeakNext):
        return naive_mask(f.arg, batch, i + 1) if i + 1 < n else full
    if isinstance(f, Yesterday):
        return naive_mask(f.arg, batch, i - 1) if i > 0 else 0
    if isinstance(f, WeakYesterday):
        return naive_mask(f.arg, batch, i - 1) if i > 0 else full
    a, b = f.left, f.right
    if isinstance(f, Until):
        # exists j in [i, n): b at j and a on [i, j)
        result = 0
        for j in range(i, n):
            result |= naive_mask(b, batch, j) & _all(a, batch, range(i, j))
        return result
    if isinstance(f, Release):
        # b on [i, n), or exists k in [i, n): a at k and b on [i, k]
        result = _all(b, batch, range(i, n))
        for k in range(i, n):
            result |= naive_mask(a, batch, k) & _all(b, batch, range(i, k + 1))
        return result
    if isinstance(f, Since):
        # exists j <= i: b at j and a on (j, i]
        result = 0
        for j in range(0, i + 1):
            result |= naive_mask(b, batch, j) & _all(a, batch, range(j + 1, i + 1))
        return result
    if isinstance(f, Triggered):
        # b on [0, i], or exists k <= i: a at k and b on [k, i]
        result = _all(b, batch, range(0, i + 1))
        for k in range(0, i + 1):
            result |= naive_mask(a, batch, k) & _all(b, batch, range(k, i + 1))
        return result
    raise TypeError(f"not a formula node: {f!r}")


def _all(f: Formula, batch: TraceBatch, positions) -> int:
    result = batch.full
    for j in positions:
        result &= naive_mask(f, batch, j)
    return result


def naive_finite(f: Formula, trace, i: int = 0) -> bool:
    return bool(naive_mask(f, TraceBatch([trace]), i))


def naive_lasso(f: Formula, w: Lasso, i: int = 0) -> bool:
    """Reference lasso evaluation.

    For pure-future formulas every quantifier over positions ``j >= i`` is
    cut at ``max(i, |prefix|) + |loop|``: subformula values are periodic
    from the prefix on, so the first witness of an "exists" (and the first
    counterexample of a "for all") always occurs before that point.

    For ``F alpha`` and ``G alpha`` the word is unrolled far enough for the
    pair (loop offset, valuation of all subformulas) to repeat.
    """
    if is_pure_future(f):
        return _naive_future(f, w, i)
    if (is_falpha(f) or is_galpha(f)) and i == 0:
        count = len(subformulas(f.right))
        copies = (1 << count) + 1
        trace = w.unroll(copies)
        values = batch_vectors(f.right, TraceBatch([trace]))
        bits = [bool(v) for v in values]
        return any(bits) if is_falpha(f) else all(bits)
    raise UnsupportedFormulaError("unsupported formula for lasso evaluation")


def _canon(w: Lasso, i: int) -> int:
    p = len(w.prefix)
    return i if i < p else p + (i - p) % len(w.loop)


def _naive_future(f: Formula, w: Lasso, i: int) -> bool:
    i = _canon(w, i)
    if isinstance(f, Atom):
        return f.name in w[i]
    if isinstance(f, NegAtom):
        return f.name not in w[i]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return _naive_future(f.left, w, i) and _naive_future(f.right, w, i)
    if isinstance(f, Or):
        return _naive_future(f.left, w, i) or _naive_future(f.right, w, i)
    if isinstance(f, (Next, WeakNext)):
        return _naive_future(f.arg, w, i + 1)
    horizon = max(i, len(w.prefix)) + len(w.loop)
    a, b = f.left, f.right
    if isinstance(f, Until):
        return any(
            _naive_future(b, w, j) and all(_naive_future(a, w, k) for k in range(i, j))
            for j in range(i, horizon)
        )
    if isinstance(f, Release):
        if all(_naive_future(b, w, j) for j in range(i, horizon)):
            return True
        return any(
            _naive_future(a, w, k) and all(_naive_future(b, w, j) for j in range(i, k + 1))
            for k in range(i, horizon)
        )
    raise UnsupportedFormulaError(f"past operator in future-only lasso evaluation: {f}")
