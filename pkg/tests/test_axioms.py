"""The axiom schema matcher and the closed evaluator, including the
soundness link between them."""

import itertools
import random

import pytest

from loopcert import gen
from loopcert import syntax as S
from loopcert.axioms import SCHEMAS, eval_individual, match_axiom, try_match_axiom
from loopcert.errors import CheckError, OpenIndividual
from loopcert.parser import Parser


def ind(text: str) -> S.Ind:
    p = Parser(text)
    out = p.parse_ind()
    assert p.peek().kind == "eof"
    return out


# one positive instance per schema, with free variables where allowed
POSITIVE = [
    ("AX_REFL", "add(n, m)", "add(n, m)"),
    ("AX_PRED_0", "pred(0)", "0"),
    ("AX_PRED_S", "pred(succ(k))", "k"),
    ("AX_ADD_0", "add(0, m)", "m"),
    ("AX_ADD_S", "add(succ(l), m)", "succ(add(l, m))"),
    ("AX_MULT_0", "mult(0, m)", "m"),
    ("AX_MULT_S", "mult(succ(l), m)", "add(mult(l, m), m)"),
    ("AX_F32_0", "F32(0)", "3"),
    ("AX_F32_S", "F32(succ(k))", "2"),
]


@pytest.mark.parametrize("name,left,right", POSITIVE)
def test_schema_positive(name, left, right):
    assert try_match_axiom(ind(left), ind(right)) == name


def test_no_symmetry_here():
    # callers flip the pair; the matcher itself never does
    assert try_match_axiom(ind("0"), ind("pred(0)")) is None
    assert try_match_axiom(ind("3"), ind("F32(0)")) is None


def test_figure1_annotations():
    assert try_match_axiom(ind("add(0, m)"), ind("m")) == "AX_ADD_0"
    assert try_match_axiom(ind("add(succ(l), m)"), ind("succ(add(l, m))")) == "AX_ADD_S"


def test_figure2_annotations():
    assert try_match_axiom(ind("F32(0)"), ind("3")) == "AX_F32_0"
    assert try_match_axiom(ind("F32(succ(i))"), ind("2")) == "AX_F32_S"


def test_schema_variable_consistency():
    # the metavariable must bind the same individual on both sides
    assert try_match_axiom(ind("pred(succ(k))"), ind("j")) is None
    assert try_match_axiom(ind("add(succ(l), m)"), ind("succ(add(l, l))")) is None


def test_match_axiom_raises():
    with pytest.raises(CheckError) as err:
        match_axiom(ind("add(0, m)"), ind("succ(m)"))
    assert err.value.reason == "NoAxiom"


def test_sub_never_matches():
    assert try_match_axiom(ind("sub(succ(0), succ(0))"), ind("0")) is None


def test_eval_examples():
    assert eval_individual(ind("succ(succ(0))")) == 2
    assert eval_individual(ind("F32(succ(succ(0)))")) == 2
    assert eval_individual(ind("F32(0)")) == 3
    # mult follows the printed schemas: mult(0, m) = m
    assert eval_individual(ind("mult(succ(0), succ(succ(0)))")) == 4
    assert eval_individual(ind("mult(0, succ(succ(0)))")) == 2
    assert eval_individual(ind("pred(0)")) == 0
    assert eval_individual(ind("sub(succ(0), succ(succ(0)))")) == 0


def test_eval_open_individual():
    with pytest.raises(OpenIndividual):
        eval_individual(ind("add(n, 0)"))


def test_soundness_link_exhaustive():
    """match_axiom implies equal evaluation, for all closed instances with
    arguments up to 6."""
    numerals = [S.num_ind(k) for k in range(7)]
    checked = 0
    for name, left, right in SCHEMAS:
        metas = sorted(S.free_ind_vars(left) | S.free_ind_vars(right))
        for values in itertools.product(numerals, repeat=len(metas)):
            li, ri = left, right
            for meta, value in zip(metas, values):
                li = S.subst_ind(li, meta, value)
                ri = S.subst_ind(ri, meta, value)
            assert try_match_axiom(li, ri) == name or try_match_axiom(li, ri) is not None
            assert eval_individual(li) == eval_individual(ri), name
            checked += 1
    # 2 closed schemas, 4 unary ones over 0..6, 2 binary ones over [0,6]^2
    assert checked == 2 + 4 * 7 + 2 * 49


def test_refl_on_generated_individuals():
    rng = random.Random(11)
    for _ in range(100):
        i = gen.gen_ind(rng, 3)
        assert try_match_axiom(i, i) is not None
