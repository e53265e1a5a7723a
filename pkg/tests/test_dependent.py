"""FD term checking, ID checking, defined negation, and the dependent
translation."""

import random

import pytest

from loopcert import dependent, envs, gen
from loopcert import syntax as S
from loopcert.errors import CheckError
from loopcert.parser import (
    parse_expr,
    parse_formula,
    parse_prop,
    parse_qenv,
    parse_seq,
    parse_term,
)
from loopcert.printer import show
from loopcert.simple import TranslateCtx


# ---------------------------------------------------------------------------
# FD
# ---------------------------------------------------------------------------

def test_fd_callcc():
    t = parse_term("callcc (fn k : ~nat(0) => 0)")
    assert S.alpha_eq(dependent.fd_check_term((), t), parse_formula("nat(0)"))


def test_fd_pack():
    t = parse_term("pack(0, 0 : exists n. nat(n))")
    assert S.alpha_eq(dependent.fd_check_term((), t), parse_formula("exists n. nat(n)"))


def test_fd_forall_intro_elim():
    t = parse_term("lam n. fn x : nat(n) => x")
    ty = dependent.fd_check_term((), t)
    assert S.alpha_eq(ty, parse_formula("forall n. nat(n) -> nat(n)"))
    inst = parse_term("(lam n. fn x : nat(n) => x){succ(0)}")
    assert S.alpha_eq(dependent.fd_check_term((), inst), parse_formula("nat(succ(0)) -> nat(succ(0))"))


def test_fd_axiom_both_directions():
    assert S.alpha_eq(
        dependent.fd_check_term((), parse_term("add(0, m) = m")),
        parse_formula("add(0, m) = m"),
    )
    # the symmetric reading is admitted by the second axiom rule
    assert S.alpha_eq(
        dependent.fd_check_term((), parse_term("3 = F32(0)")),
        parse_formula("succ(succ(succ(0))) = F32(0)"),
    )


def test_fd_coercion():
    t = parse_term("0 :> {i/nat(i)}[add(0, 0) = 0]")
    assert S.alpha_eq(dependent.fd_check_term((), t), parse_formula("nat(add(0, 0))"))


def test_fd_throw_result_is_annotation():
    t = parse_term("fn k : ~nat(0) => throw[top] k 0")
    assert S.alpha_eq(dependent.fd_check_term((), t), parse_formula("~nat(0) -> top"))


def test_fd_rec_needs_motive():
    with pytest.raises(CheckError) as err:
        dependent.fd_check_term((), parse_term("rec(0, 0, fn y : nat(0) => fn a : nat(0) => a)"))
    assert err.value.reason == "MissingMotive"


def test_fd_dependent_rec_positive():
    t = parse_term(
        "fn x : nat(succ(0)) => "
        "rec{v.nat(v)}(x, 0, lam l. fn y : nat(l) => fn a : nat(l) => succ(a))"
    )
    ty = dependent.fd_check_term((), t)
    assert S.alpha_eq(ty, parse_formula("nat(succ(0)) -> nat(succ(0))"))


def test_fd_dependent_rec_bad_step_rejected():
    t = parse_term(
        "fn x : nat(succ(0)) => "
        "rec{v.nat(v)}(x, 0, lam l. fn y : nat(l) => fn a : nat(l) => a)"
    )
    with pytest.raises(CheckError) as err:
        dependent.fd_check_term((), t)
    assert err.value.rule == "TC_REC"


def test_fd_pred_gated():
    t = parse_term("fn x : nat(succ(0)) => pred(x)")
    ty = dependent.fd_check_term((), t, allow_pred=True)
    assert S.alpha_eq(ty, parse_formula("nat(succ(0)) -> nat(pred(succ(0)))"))
    with pytest.raises(CheckError) as err:
        dependent.fd_check_term((), t, allow_pred=False)
    assert err.value.rule == "TC_PRED_D"


def test_fd_eigen_escape_detected():
    t = parse_term("fn w : exists n. <nat(n)> => let <x> = w in ?n. x")
    with pytest.raises(CheckError) as err:
        dependent.fd_check_term((), t)
    assert err.value.reason == "EigenEscape"


def test_fd_unpack_required():
    t = parse_term("fn w : exists n. <nat(n)> => let <x> = w in 0")
    with pytest.raises(CheckError) as err:
        dependent.fd_check_term((), t)
    assert err.value.reason == "MissingUnpack"


def test_fd_unpack_ok_when_no_escape():
    t = parse_term("fn w : exists n. <nat(n)> => let <x> = w in 0")
    t_ok = parse_term("fn w : exists n. <nat(n)> => let <x> = w in ?n. 0")
    assert S.alpha_eq(
        dependent.fd_check_term((), t_ok), parse_formula("(exists n. <nat(n)>) -> nat(0)")
    )


# ---------------------------------------------------------------------------
# defined negation
# ---------------------------------------------------------------------------

def test_neg_simple_output():
    out = S.OSimple((S.PNat(S.IZero()),))
    assert S.alpha_eq(dependent.neg_output(out), parse_prop("~(nat(0))"))


def test_neg_figure2_continuation():
    _, out = envs.qsplit(parse_qenv("exists u. [r : nat(u), mk : ~(nat(F32(u)))]"))
    neg = dependent.neg_output(out)
    assert isinstance(neg, S.PNeg) and isinstance(neg.out, S.OExists)
    # translating it gives the negation of the translated output
    assert S.alpha_eq(
        dependent.translate_id_type(neg),
        parse_formula("~exists u. <nat(u), ~<nat(F32(u))>>"),
    )


def test_neg_translation_coherence_depth3():
    rng = random.Random(5)
    for _ in range(120):
        out = gen.gen_output(rng, 3)
        lhs = dependent.translate_id_type(dependent.neg_output(out))
        rhs = S.neg_f(dependent.translate_output(out))
        assert S.alpha_eq(lhs, rhs)


# ---------------------------------------------------------------------------
# ID expressions and sequences
# ---------------------------------------------------------------------------

def test_id_star_and_numerals():
    assert dependent.id_check_expr((), (), parse_expr("*")) == S.PTop()
    assert S.alpha_eq(
        dependent.id_check_expr((), (), parse_expr("succ(succ(0))")),
        parse_prop("nat(succ(succ(0)))"),
    )


def test_id_empty_subset():
    omega = (("x", S.PNat(S.IZero())), ("y", S.PTop()))
    dependent.id_check_seq((), omega, parse_seq(""), parse_qenv("[x : nat(0)]"))


def test_id_empty_subset_violation():
    omega = (("x", S.PNat(S.IZero())),)
    with pytest.raises(CheckError) as err:
        dependent.id_check_seq((), omega, parse_seq(""), parse_qenv("[x : nat(succ(0))]"))
    assert err.value.rule == "T_EMPTY"


def test_id_cont_inst_result_is_jumpable():
    fam = parse_qenv("exists u. [k0 : nat(u)]")
    _, out = envs.qsplit(fam)
    gamma = (("k", dependent.neg_output(out)),)
    e = parse_expr("k <: {u/[nat(u)]}{succ(0)}")
    got = dependent.id_check_expr(gamma, (), e)
    assert S.alpha_eq(got, parse_prop("~(nat(succ(0)))"))


def test_id_inst_on_continuation_rejected():
    _, out = envs.qsplit(parse_qenv("exists u. [k0 : nat(u)]"))
    gamma = (("k", dependent.neg_output(out)),)
    with pytest.raises(CheckError) as err:
        dependent.id_check_expr(gamma, (), parse_expr("k{0}"))
    assert err.value.rule == "T_PROC_INST"


def test_id_proc_inst_normalizes_bottom():
    gamma = (("p", parse_prop("proc forall n. ([nat(n)] out [bot])")),)
    got = dependent.id_check_expr(gamma, (), parse_expr("p{0}"))
    assert S.alpha_eq(got, parse_prop("~(nat(0))"))


def test_id_figure1_prototype():
    text = """proc forall n. forall m. [x : nat(n), y : nat(m)] out [z : nat(add(n, m))] {
      z := y :> {i/nat(i)}[add(0, m) = m];
      for l : nat(l) := 0 until x {
        inc(z);
        z := z :> {i/nat(i)}[add(succ(l), m) = succ(add(l, m))];
      }[z : nat(add(l, m))];
    }"""
    ty = dependent.id_check_expr((), (), parse_expr(text))
    want = parse_prop("proc forall n. forall m. ([nat(n), nat(m)] out [nat(add(n, m))])")
    assert S.alpha_eq(ty, want)


# ---------------------------------------------------------------------------
# dependent translation
# ---------------------------------------------------------------------------

def test_translate_prototype():
    rho = parse_prop("proc forall n. forall m. ([nat(n), nat(m)] out [nat(add(n, m))])")
    want = parse_formula("forall n. forall m. <nat(n), nat(m)> -> <nat(add(n, m))>")
    assert S.alpha_eq(dependent.translate_id_type(rho), want)


def test_translate_qenv_examples():
    names, phi = dependent.translate_qenv(parse_qenv("[x : nat(0)]"))
    assert names == ("x",) and S.alpha_eq(phi, parse_formula("<nat(0)>"))
    names, phi = dependent.translate_qenv(parse_qenv("exists u. [r : nat(u), mk : ~(nat(F32(u)))]"))
    assert names == ("r", "mk")
    assert S.alpha_eq(phi, parse_formula("exists u. <nat(u), ~<nat(F32(u))>>"))


def test_translate_witness_packs():
    seq = parse_seq("[0 in exists n. [z : nat(n)]]")
    t = dependent.translate_id_seq(seq, ("z",), TranslateCtx())
    assert S.alpha_eq(t, parse_term("pack(0, <z> : exists n. <nat(n)>)"))


def test_translate_jump_throws():
    seq = parse_seq("jump(mk, y)[r : nat(0)];")
    t = dependent.translate_id_seq(seq, ("r",), TranslateCtx())
    assert S.alpha_eq(t, parse_term("let <r> = throw[<nat(0)>] mk <y> in <r>"))


def test_translate_cont_inst_eta_expands():
    e = parse_expr("k <: {u/[nat(u)]}{x}")
    t = dependent.translate_id_expr(e, TranslateCtx())
    want = parse_term("fn v : <nat(x)> => k pack(x, v : exists u. <nat(u)>)")
    assert S.alpha_eq(t, want)


def test_translate_label_callcc():
    seq = parse_seq("k : { jump(k, 0)[z : nat(0)]; }[z : nat(0)];")
    t = dependent.translate_id_seq(seq, ("z",), TranslateCtx())
    want = parse_term(
        "let <z> = callcc (fn k : ~<nat(0)> => let <z> = throw[<nat(0)>] k <0> in <z>) in <z>"
    )
    assert S.alpha_eq(t, want)


def test_translate_fresh_names_deterministic():
    e = parse_expr("k <: {u/[nat(u)]}{x}")
    a = show(dependent.translate_id_expr(e, TranslateCtx()))
    b = show(dependent.translate_id_expr(e, TranslateCtx()))
    assert a == b and "_v1" in a


# ---------------------------------------------------------------------------
# freshness of declarations
# ---------------------------------------------------------------------------

def test_id_var_may_shadow_constants_but_not_outputs():
    gamma = (("w", S.PTop()),)
    omega = (("z", S.PTop()),)
    # shadowing a constant is fine
    dependent.id_check_seq(
        gamma, omega, parse_seq("var w := 0; z := w;"), parse_qenv("[z : nat(0)]")
    )
    with pytest.raises(CheckError) as err:
        dependent.id_check_seq(
            gamma, omega, parse_seq("var z := 0;"), parse_qenv("[z : top]")
        )
    assert err.value.reason == "FreshnessViolation"


def test_id_cst_may_not_shadow_store():
    omega = (("z", S.PTop()),)
    with pytest.raises(CheckError) as err:
        dependent.id_check_seq((), omega, parse_seq("cst z = 0;"), parse_qenv("[z : top]"))
    assert err.value.reason == "FreshnessViolation" and err.value.rule == "T_CST"


def test_header_param_output_collision_rejected():
    with pytest.raises(CheckError):
        dependent.id_check_expr(
            (), (), parse_expr("proc [x : nat(0)] out [x : nat(0)] { x := 0; }")
        )


def test_id_for_without_index_binder():
    gamma = (("x", parse_prop("nat(succ(0))")),)
    omega = (("z", parse_prop("nat(0)")),)
    dependent.id_check_seq(
        gamma, omega, parse_seq("for i := 0 until x { }[z : nat(0)];"), parse_qenv("[z : nat(0)]")
    )


def test_id_index_free_loop_under_quantified_header():
    # the constant frame mentions the header's binder: opening the header
    # must substitute inside the loop even though the loop binds no index
    text = """proc forall n. [x : nat(n)] out [z : nat(n)] {
      z := x;
      for i := 0 until x { }[z : nat(n)];
    }"""
    ty = dependent.id_check_expr((), (), parse_expr(text))
    assert S.alpha_eq(ty, parse_prop("proc forall n. ([nat(n)] out [nat(n)])"))


def test_id_goal_trace_deterministic():
    goal = dependent.IdSeqGoal(
        gamma=(("k", dependent.neg_output(S.OSimple((parse_prop("nat(0)"),)))),),
        omega=(("z", S.PTop()),),
        subject=parse_seq("k : { jump(k, 0)[z : nat(0)]; }[z : nat(0)];"),
        expected=parse_qenv("[z : nat(0)]"),
    )
    first = dependent.id_check_goal(goal)
    second = dependent.id_check_goal(goal)
    assert first == second
    assert "T_LABEL" in first and "T_JUMP" in first and "T_EMPTY" in first
