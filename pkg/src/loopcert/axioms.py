"""The axiom judgment |- i = i' as a schema matcher, plus the closed
numeric evaluator used only by the runtime and the test oracle.

The nine schemas are matched schematically: metavariables bind arbitrary
individuals, including free program variables and eigenvariables, so
``add(0, m) = m`` is an AX_ADD_0 instance with ``m`` free.  Symmetry is
never applied here; callers try the flipped pair themselves.

Note that AX_MULT_0 reads ``mult(0, i') = i'`` as printed, which makes
``mult`` denote (n+1)*m; the evaluator agrees with the schemas so the
soundness link between them holds.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from .errors import CheckError, OpenIndividual
from .syntax import (
    IAdd,
    IF32,
    IMult,
    IPred,
    ISub,
    ISucc,
    IVar,
    IZero,
    Ind,
    alpha_eq,
    num_ind,
)

_I = IVar("%i")
_J = IVar("%j")

# (name, left pattern, right pattern); %-names are schema metavariables
SCHEMAS: Tuple[Tuple[str, Ind, Ind], ...] = (
    ("AX_PRED_0", IPred(IZero()), IZero()),
    ("AX_PRED_S", IPred(ISucc(_I)), _I),
    ("AX_ADD_0", IAdd(IZero(), _J), _J),
    ("AX_ADD_S", IAdd(ISucc(_I), _J), ISucc(IAdd(_I, _J))),
    ("AX_MULT_0", IMult(IZero(), _J), _J),
    ("AX_MULT_S", IMult(ISucc(_I), _J), IAdd(IMult(_I, _J), _J)),
    ("AX_F32_0", IF32(IZero()), num_ind(3)),
    ("AX_F32_S", IF32(ISucc(_I)), num_ind(2)),
)


def _match(pattern: Ind, subject: Ind, binding: Dict[str, Ind]) -> bool:
    if isinstance(pattern, IVar) and pattern.name.startswith("%"):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = subject
            return True
        return alpha_eq(bound, subject)
    if type(pattern) is not type(subject):
        return False
    match pattern:
        case IVar(name):
            return name == subject.name  # type: ignore[union-attr]
        case IZero():
            return True
        case ISucc(a) | IPred(a) | IF32(a):
            return _match(a, subject.arg, binding)  # type: ignore[union-attr]
        case IAdd(a, b) | ISub(a, b) | IMult(a, b):
            return _match(a, subject.left, binding) and _match(  # type: ignore[union-attr]
                b, subject.right, binding  # type: ignore[union-attr]
            )
    raise AssertionError(pattern)


def try_match_axiom(i1: Ind, i2: Ind) -> Optional[str]:
    """The schema name instantiating to (i1, i2) exactly, or None.

    AX_REFL is realized as alpha equality and tried first, matching the
    printed order of the axioms.
    """
    if alpha_eq(i1, i2):
        return "AX_REFL"
    for name, left, right in SCHEMAS:
        binding: Dict[str, Ind] = {}
        if _match(left, i1, binding) and _match(right, i2, binding):
            return name
    return None


def match_axiom(i1: Ind, i2: Ind, rule: str = "AXIOM", span=None) -> str:
    name = try_match_axiom(i1, i2)
    if name is None:
        from .printer import show

        raise CheckError(
            rule,
            f"'{show(i1)} = {show(i2)}' is not an axiom instance",
            span=span,
            reason="NoAxiom",
        )
    return name


def eval_individual(i: Ind) -> int:
    """Closed individuals as naturals; pred and sub are truncated."""
    match i:
        case IVar(name):
            raise OpenIndividual(name)
        case IZero():
            return 0
        case ISucc(a):
            return eval_individual(a) + 1
        case IPred(a):
            return max(eval_individual(a) - 1, 0)
        case IAdd(a, b):
            return eval_individual(a) + eval_individual(b)
        case ISub(a, b):
            return max(eval_individual(a) - eval_individual(b), 0)
        case IMult(a, b):
            # mult(0, m) = m and mult(succ(n), m) = add(mult(n, m), m)
            return (eval_individual(a) + 1) * eval_individual(b)
        case IF32(a):
            return 3 if eval_individual(a) == 0 else 2
    raise AssertionError(i)
