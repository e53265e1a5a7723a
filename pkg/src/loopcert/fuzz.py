"""Differential fuzzing of the simple pipeline.

Generates well-typed jump-free imperative programs, asserts type
preservation of the translation, and compares the direct interpreter
against the machine on random inputs.  Failures are shrunk by dropping
sequence links and decrementing numerals.
"""

from __future__ import annotations

import random
from typing import Any, Dict, Iterator, List, Optional, Tuple

from . import gen, runtime, simple
from . import syntax as S
from .errors import CheckError, EvalError
from .printer import show, show_file

FUZZ_FUEL = 1_000_000


def _check_and_translate(sf: S.SourceFile) -> Tuple[Optional[Dict[str, Any]], Optional[S.Term]]:
    """Check the file, translate it, re-check the image; returns
    (failure report or None, closed entry term)."""
    gamma: S.Env = ()
    try:
        for name, expr in sf.csts:
            ty = simple.is_check_expr(gamma, (), expr)
            gamma = gamma + ((name, ty),)
    except CheckError as ex:
        return {"phase": "check-source", "message": str(ex)}, None
    tctx = simple.TranslateCtx()
    try:
        terms = [(name, simple.translate_is_expr(expr, tctx)) for name, expr in sf.csts]
    except CheckError as ex:
        return {"phase": "translate", "message": str(ex)}, None
    sigma: S.Env = ()
    for (name, term), (_, source_ty) in zip(terms, gamma):
        try:
            fty = simple.fs_check_term(sigma, term)
        except CheckError as ex:
            return {"phase": "check-target", "message": str(ex)}, None
        want = simple.translate_is_type(source_ty)
        if not S.alpha_eq(fty, want):
            return {
                "phase": "check-target",
                "message": f"'{name}' translates at {show(fty)}, expected {show(want)}",
            }, None
        sigma = sigma + ((name, fty),)
    closed: S.Term = S.TVar(terms[-1][0])
    for name, term in reversed(terms):
        closed = S.TLet(name, term, closed)
    return None, closed


def run_one(
    sf: S.SourceFile, entry: str, inputs: List[Tuple[int, ...]], fuel: int = FUZZ_FUEL
) -> Optional[Dict[str, Any]]:
    """Returns a failure description, or None if all properties hold."""
    failure, closed = _check_and_translate(sf)
    if failure is not None:
        return failure
    erased = runtime.erase(closed)
    for iv in inputs:
        try:
            want = runtime.interpret_program(sf.csts, None, entry, iv)
        except EvalError as ex:
            return {"phase": "differential", "message": f"interpreter: {ex}", "inputs": iv}
        applied = runtime.RApp(erased, runtime.RTuple(tuple(runtime.RNum(n) for n in iv)))
        try:
            got = runtime.evaluate(applied, fuel)
        except EvalError as ex:
            return {"phase": "differential", "message": f"machine: {ex}", "inputs": iv}
        if got != want:
            return {
                "phase": "differential",
                "message": f"stores disagree on input {iv}: "
                f"interpreter {runtime.show_value(want)}, machine {runtime.show_value(got)}",
                "inputs": iv,
            }
    return None


# ---------------------------------------------------------------------------
# Shrinking
# ---------------------------------------------------------------------------

def _variants(value: Any) -> Iterator[Any]:
    """One-change simplifications: drop a sequence link or lower a numeral."""
    if isinstance(value, (S.SCmd, S.SCst, S.SVar)):
        yield value.rest
    if isinstance(value, S.ENum) and value.value > 0:
        yield S.ENum(value.value - 1)
    if isinstance(value, S.Node):
        for fname in S.node_fields(value):
            child = getattr(value, fname)
            for new_child in _variants(child):
                yield S._rebuild(value, **{fname: new_child})
        return
    if isinstance(value, tuple):
        for k, item in enumerate(value):
            for new_item in _variants(item):
                yield value[:k] + (new_item,) + value[k + 1 :]


def shrink(
    sf: S.SourceFile, entry: str, inputs: List[Tuple[int, ...]], budget: int = 400
) -> S.SourceFile:
    """Greedily minimize while the program still fails past check-source."""
    current = sf
    spent = 0
    improved = True
    while improved and spent < budget:
        improved = False
        for candidate in _variants(current):
            spent += 1
            if spent >= budget:
                break
            failure = run_one(candidate, entry, inputs)
            if failure is not None and failure["phase"] in ("check-target", "differential"):
                current = candidate
                improved = True
                break
    return current


def fuzz_differential(count: int, seed: int, size_bound: int = 30) -> Dict[str, Any]:
    """The statistics report; deterministic given (count, seed, size_bound)."""
    failures: List[Dict[str, Any]] = []
    for index in range(count):
        rng = random.Random(f"{seed}:{index}")
        sf, entry, arity = gen.gen_is_program(rng, size_bound)
        inputs = gen.gen_inputs(rng, arity)
        failure = run_one(sf, entry, inputs)
        if failure is not None:
            small = shrink(sf, entry, inputs)
            failure = dict(failure)
            failure["index"] = index
            failure["program"] = show_file(sf)
            failure["shrunk"] = show_file(small)
            failures.append(failure)
    return {
        "count": count,
        "seed": seed,
        "size_bound": size_bound,
        "passed": count - len(failures),
        "failures": failures,
    }
