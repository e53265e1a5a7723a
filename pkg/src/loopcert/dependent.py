"""The dependently-typed half: FD term checking, ID checking with
quantified environments, labels and jumps, defined negation, and the
ID-to-FD translation.

Checking is bidirectional by annotation: sequence goals flow down from
proc, label, block and jump annotations, and every witness, axiom
instance and coercion must be written in the program.  Hypothetical
premises over individuals are realized with eigenvariables; a fresh
eigenvariable must never escape into a type visible outside its scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from . import envs
from . import syntax as S
from .axioms import try_match_axiom
from .errors import CheckError
from .printer import show
from .simple import CheckCtx, TranslateCtx, check_header_idents, fn_over_tuple

# TC_PRED_D is not part of the core functional rule set; it is forced by
# the imperative dec rule (which retypes through pred) and is on by default.
ALLOW_PRED_DEFAULT = True


def neg_output(out: S.Output) -> S.Prop:
    """Defined negation of an output.

    A simple output gives the continuation type ~(psi, ...); negating an
    existentially quantified output keeps the quantifier, which is what
    makes it instantiable like a universally quantified procedure.
    """
    return S.PNeg(out)


# ---------------------------------------------------------------------------
# FD: functional dependent type system
# ---------------------------------------------------------------------------

def fd_check_term(
    sigma: S.Env,
    t: S.Term,
    ctx: Optional[CheckCtx] = None,
    allow_pred: Optional[bool] = None,
) -> S.Formula:
    ctx = ctx or CheckCtx()
    if allow_pred is None:
        allow_pred = ALLOW_PRED_DEFAULT
    return _fd(sigma, t, ctx, allow_pred)


def _fd(sigma: S.Env, t: S.Term, ctx: CheckCtx, ap: bool) -> S.Formula:
    match t:
        case S.TVar(name):
            ty = envs.lookup(sigma, name)
            if ty is None:
                raise CheckError("TC_VAR", f"unbound variable '{name}'", span=t.span, reason="UnboundVariable")
            ctx.rule("TC_VAR")
            return ty
        case S.TZero():
            ctx.rule("TC_ZERO")
            return S.FNat(S.IZero())
        case S.TSucc(arg):
            ity = _fd_nat(sigma, arg, ctx, ap, "TC_SUCC", t.span)
            ctx.rule("TC_SUCC")
            return S.FNat(S.ISucc(ity))
        case S.TPred(arg):
            if not ap:
                raise CheckError("TC_PRED_D", "the optional pred rule is disabled", span=t.span)
            ity = _fd_nat(sigma, arg, ctx, ap, "TC_PRED_D", t.span)
            ctx.rule("TC_PRED_D")
            return S.FNat(S.IPred(ity))
        case S.TFn(param, ann, body):
            cod = _fd(sigma + ((param, ann),), body, ctx, ap)
            ctx.rule("TC_LAM")
            return S.FArrow(ann, cod)
        case S.TApp(fn, arg):
            fnty = _fd(sigma, fn, ctx, ap)
            if not isinstance(fnty, S.FArrow):
                raise CheckError("TC_APP", f"applied a non-function of type {show(fnty)}", span=t.span)
            got = _fd(sigma, arg, ctx, ap)
            if not S.alpha_eq(got, fnty.dom):
                raise CheckError(
                    "TC_APP", f"argument has type {show(got)}, expected {show(fnty.dom)}", span=t.span
                )
            ctx.rule("TC_APP")
            return fnty.cod
        case S.TIndLam(var, body):
            eigen, opened = ctx.fresh.open(var, body)
            phi = _fd(sigma, opened, ctx, ap)
            ctx.rule("TC_FORALL_I")
            return _generalize(var, eigen, phi, S.FForall)
        case S.TIndApp(fn, arg):
            fnty = _fd(sigma, fn, ctx, ap)
            if not isinstance(fnty, S.FForall):
                raise CheckError(
                    "TC_FORALL_E", f"instantiated a non-universal of type {show(fnty)}", span=t.span
                )
            ctx.rule("TC_FORALL_E")
            return S.subst_ind(fnty.body, fnty.var, arg)
        case S.TTuple(items):
            types = tuple(_fd(sigma, item, ctx, ap) for item in items)
            ctx.rule("TC_TUPLE")
            return S.FTuple(types)
        case S.TLet(name, value, body):
            ty = _fd(sigma, value, ctx, ap)
            ctx.rule("TC_LET")
            return _fd(sigma + ((name, ty),), body, ctx, ap)
        case S.TLetMatch(names, value, body):
            ty = _fd(sigma, value, ctx, ap)
            ctx.rule("TC_MATCH")
            return _fd_extended(sigma, names, ty, body, ctx, ap, t.span)
        case S.TPack(witness, value, ann):
            if not isinstance(ann, S.FExists):
                raise CheckError("TC_EXISTS_I", f"pack annotation {show(ann)} is not existential", span=t.span)
            want = S.subst_ind(ann.body, ann.var, witness)
            got = _fd(sigma, value, ctx, ap)
            if not S.alpha_eq(got, want):
                raise CheckError(
                    "TC_EXISTS_I", f"witness body has type {show(got)}, expected {show(want)}", span=t.span
                )
            ctx.rule("TC_EXISTS_I")
            return ann
        case S.TRec(bound, base, step, motive):
            if motive is None:
                raise CheckError("TC_REC", "dependent rec requires a motive", span=t.span, reason="MissingMotive")
            idx = _fd_nat(sigma, bound, ctx, ap, "TC_REC", t.span)
            base_want = S.subst_ind(motive.body, motive.var, S.IZero())
            base_got = _fd(sigma, base, ctx, ap)
            if not S.alpha_eq(base_got, base_want):
                raise CheckError(
                    "TC_REC", f"base has type {show(base_got)}, expected {show(base_want)}", span=t.span
                )
            match step:
                case S.TIndLam(svar, S.TFn(yname, yann, sbody)):
                    eigen = ctx.fresh.fresh(svar)
                    ev = S.IVar(eigen)
                    if not S.alpha_eq(S.subst_ind(yann, svar, ev), S.FNat(ev)):
                        raise CheckError(
                            "TC_REC", f"step counter annotated {show(yann)}, expected nat({svar})", span=t.span
                        )
                    opened = S.subst_ind(sbody, svar, ev)
                    want = S.FArrow(
                        S.subst_ind(motive.body, motive.var, ev),
                        S.subst_ind(motive.body, motive.var, S.ISucc(ev)),
                    )
                    got = _fd(sigma + ((yname, S.FNat(ev)),), opened, ctx, ap)
                    if not S.alpha_eq(got, want):
                        raise CheckError(
                            "TC_REC", f"step has type {show(got)}, expected {show(want)}", span=t.span
                        )
                case _:
                    raise CheckError(
                        "TC_REC", "dependent rec step must be 'lam n. fn y : nat(n) => ...'", span=t.span
                    )
            ctx.rule("TC_REC")
            return S.subst_ind(motive.body, motive.var, idx)
        case S.TAxiom(left, right):
            name = try_match_axiom(left, right)
            if name is not None:
                ctx.rule("TC_AX_I")
                return S.FEq(left, right)
            name = try_match_axiom(right, left)
            if name is not None:
                ctx.rule("TC_AX_II")
                return S.FEq(left, right)
            raise CheckError(
                "TC_AX", f"'{show(left)} = {show(right)}' is not an axiom instance", span=t.span, reason="NoAxiom"
            )
        case S.TCoerce(subject, fam, proof):
            proof_ty = _fd(sigma, proof, ctx, ap)
            if not isinstance(proof_ty, S.FEq):
                raise CheckError(
                    "TC_EQUAL_E", f"coercion proof has type {show(proof_ty)}, expected an equation", span=t.span
                )
            want = S.subst_ind(fam.body, fam.var, proof_ty.right)
            got = _fd(sigma, subject, ctx, ap)
            if not S.alpha_eq(got, want):
                raise CheckError(
                    "TC_EQUAL_E", f"subject has type {show(got)}, expected {show(want)}", span=t.span
                )
            ctx.rule("TC_EQUAL_E")
            return S.subst_ind(fam.body, fam.var, proof_ty.left)
        case S.TThrow(ann, cont, arg):
            cont_ty = _fd(sigma, cont, ctx, ap)
            negated = S.as_neg_f(cont_ty)
            if negated is None:
                raise CheckError(
                    "TC_THROW", f"throw target has type {show(cont_ty)}, expected a negation", span=t.span
                )
            got = _fd(sigma, arg, ctx, ap)
            if not S.alpha_eq(got, negated):
                raise CheckError(
                    "TC_THROW", f"thrown value has type {show(got)}, expected {show(negated)}", span=t.span
                )
            ctx.rule("TC_THROW")
            return ann
        case S.TCallcc(arg):
            ty = _fd(sigma, arg, ctx, ap)
            shape_err = CheckError(
                "TC_CALLCC", f"callcc argument has type {show(ty)}, expected ~phi -> phi", span=t.span
            )
            if not isinstance(ty, S.FArrow):
                raise shape_err
            negated = S.as_neg_f(ty.dom)
            if negated is None or not S.alpha_eq(negated, ty.cod):
                raise shape_err
            ctx.rule("TC_CALLCC")
            return ty.cod
        case S.TUnpack():
            raise CheckError("TC_EXISTS", "'?n.' is only meaningful under a tuple match", span=t.span)
    raise CheckError("FD", f"unhandled term {show(t)}", span=getattr(t, "span", None))


def _fd_nat(sigma: S.Env, t: S.Term, ctx: CheckCtx, ap: bool, rule: str, span) -> S.Ind:
    ty = _fd(sigma, t, ctx, ap)
    if not isinstance(ty, S.FNat) or ty.index is None:
        raise CheckError(rule, f"expected an indexed nat, found {show(ty)}", span=span)
    return ty.index


def _fd_extended(
    sigma: S.Env,
    names: Tuple[str, ...],
    phi: S.Formula,
    body: S.Term,
    ctx: CheckCtx,
    ap: bool,
    span,
) -> S.Formula:
    """Sigma, <x...> : phi |- body (TC_PRODUCT / TC_EXISTS)."""
    if isinstance(phi, S.FExists):
        if not isinstance(body, S.TUnpack):
            raise CheckError(
                "TC_EXISTS",
                f"matched value has existential type {show(phi)}; the body must begin with '?n.'",
                span=span,
                reason="MissingUnpack",
            )
        eigen = ctx.fresh.fresh(body.var)
        ev = S.IVar(eigen)
        phi_open = S.subst_ind(phi.body, phi.var, ev)
        body_open = S.subst_ind(body.body, body.var, ev)
        ctx.rule("TC_EXISTS")
        result = _fd_extended(sigma, names, phi_open, body_open, ctx, ap, span)
        if eigen in S.free_ind_vars(result):
            raise CheckError(
                "TC_EXISTS",
                f"eigenvariable {eigen} escapes into the result type {show(result)}",
                span=span,
                reason="EigenEscape",
            )
        return result
    if isinstance(phi, S.FTuple):
        if len(phi.items) != len(names):
            raise CheckError(
                "TC_PRODUCT",
                f"pattern <{', '.join(names)}> does not match {show(phi)}",
                span=span,
            )
        ctx.rule("TC_PRODUCT")
        return _fd(sigma + tuple(zip(names, phi.items)), body, ctx, ap)
    raise CheckError("TC_PRODUCT", f"cannot match a tuple pattern against {show(phi)}", span=span)


def _generalize(var: str, eigen: str, phi: S.Formula, wrap) -> S.Formula:
    free = S.free_ind_vars(phi) - {eigen}
    binder = S._fresh_name(var, free)
    return wrap(binder, S.subst_ind(phi, eigen, S.IVar(binder)))


# ---------------------------------------------------------------------------
# ID: imperative dependent type system
# ---------------------------------------------------------------------------

def proto_of_header(header: S.Header) -> S.Proto:
    match header:
        case S.HForall(var, body):
            return S.ProtoAll(var, proto_of_header(body))
        case S.HBase(params, out, _):
            _, types = envs.split(params)
            _, output = envs.qsplit(out)
            return S.ProtoBase(types, output)
    raise AssertionError(header)


def id_check_expr(gamma: S.Env, omega: S.Env, e: S.Expr, ctx: Optional[CheckCtx] = None) -> S.Prop:
    ctx = ctx or CheckCtx()
    match e:
        case S.EVar(name):
            local = envs.lookup(omega, name)
            const = envs.lookup(gamma, name)
            if local is not None:
                if const is not None:
                    ctx.warn(f"'{name}' is bound both as constant and store variable; the store wins")
                ctx.rule("T_ENV_II")
                return local
            if const is not None:
                ctx.rule("T_ENV_I")
                return const
            raise CheckError("T_ENV", f"unbound ident '{name}'", span=e.span, reason="UnboundVariable")
        case S.EStar():
            ctx.rule("T_TRUE")
            return S.PTop()
        case S.ENum(value):
            ctx.rule("T_ZERO" if value == 0 else "T_SUCC")
            return S.PNat(S.num_ind(value))
        case S.EAxiom(left, right):
            if try_match_axiom(left, right) is not None:
                ctx.rule("T_AX_I")
                return S.PEq(left, right)
            if try_match_axiom(right, left) is not None:
                ctx.rule("T_AX_II")
                return S.PEq(left, right)
            raise CheckError(
                "T_AX",
                f"'{show(left)} = {show(right)}' is not an axiom instance",
                span=e.span,
                reason="NoAxiom",
            )
        case S.ECoerce(subject, fam, proof):
            proof_ty = id_check_expr(gamma, omega, proof, ctx)
            if not isinstance(proof_ty, S.PEq):
                raise CheckError(
                    "T_EQUAL_E", f"coercion proof has type {show(proof_ty)}, expected an equation", span=e.span
                )
            want = S.subst_ind(fam.body, fam.var, proof_ty.right)
            got = id_check_expr(gamma, omega, subject, ctx)
            if not S.alpha_eq(got, want):
                raise CheckError(
                    "T_EQUAL_E", f"subject has type {show(got)}, expected {show(want)}", span=e.span
                )
            ctx.rule("T_EQUAL_E")
            return S.subst_ind(fam.body, fam.var, proof_ty.left)
        case S.EInst(fn, arg):
            fnty = id_check_expr(gamma, omega, fn, ctx)
            match fnty:
                case S.PProc(S.ProtoAll(var, body)):
                    ctx.rule("T_PROC_INST")
                    return S.proc_t(S.subst_ind(body, var, arg))
                case S.PNeg(S.OExists()):
                    raise CheckError(
                        "T_PROC_INST",
                        "a continuation is instantiated with '<: {n/phi}{i}', not '{i}'",
                        span=e.span,
                    )
                case _:
                    raise CheckError(
                        "T_PROC_INST",
                        f"instantiated a non-universal of type {show(fnty)}",
                        span=e.span,
                    )
        case S.EContInst(fn, fam, arg):
            want = neg_output(S.OExists(fam.var, fam.body))
            got = id_check_expr(gamma, omega, fn, ctx)
            if not S.alpha_eq(got, want):
                raise CheckError(
                    "T_CONT_INST",
                    f"continuation has type {show(got)}, the annotation negates to {show(want)}",
                    span=e.span,
                    reason="NegationMismatch",
                )
            ctx.rule("T_CONT_INST")
            return S.PNeg(S.subst_ind(fam.body, fam.var, arg))
        case S.EProc(header):
            declared = proto_of_header(header)
            _id_check_header(gamma, omega, header, ctx, getattr(e, "span", None))
            return S.proc_t(declared)
    raise CheckError("ID", f"unhandled expression {show(e)}", span=getattr(e, "span", None))


def _id_check_header(gamma: S.Env, omega: S.Env, header: S.Header, ctx: CheckCtx, span) -> None:
    match header:
        case S.HForall(var, body):
            _, opened = ctx.fresh.open(var, body)
            ctx.rule("T_PROC_ABS")
            _id_check_header(gamma, omega, opened, ctx, span)
        case S.HBase(params, out, body):
            names, _ = envs.qsplit(out)
            check_header_idents(params, names, "T_PROC_DECL", span)
            start = envs.init(names, S.PTop())
            gamma2 = envs.append(gamma, params)
            ctx.rule("T_PROC_DECL")
            id_check_seq(gamma2, start, body, out, ctx)
        case _:
            raise AssertionError(header)


def id_check_exprs(
    gamma: S.Env,
    omega: S.Env,
    args: Tuple[S.Expr, ...],
    wanted: Tuple[S.Prop, ...],
    ctx: CheckCtx,
    rule: str,
    span,
) -> None:
    if len(args) != len(wanted):
        raise CheckError(
            rule, f"{len(args)} arguments for {len(wanted)} parameters", span=span, reason="LengthMismatch"
        )
    for arg, want in zip(args, wanted):
        got = id_check_expr(gamma, omega, arg, ctx)
        ctx.rule("T_EXPS_II")
        if not S.alpha_eq(got, want):
            raise CheckError(
                rule,
                f"argument {show(arg)} has type {show(got)}, expected {show(want)}",
                span=span,
            )


@dataclass(frozen=True)
class IdSeqGoal:
    """A sequence-checking goal: constants, store, subject, and the
    expected quantified output from the enclosing annotation."""

    gamma: S.Env
    omega: S.Env
    subject: S.Seq
    expected: S.QEnv


def id_check_goal(goal: IdSeqGoal) -> Tuple[str, ...]:
    """Check a goal and return the derivation's rule trace."""
    trace: list = []
    id_check_seq(goal.gamma, goal.omega, goal.subject, goal.expected, CheckCtx(trace=trace))
    return tuple(trace)


def id_check_seq(
    gamma: S.Env, omega: S.Env, s: S.Seq, expected: S.QEnv, ctx: Optional[CheckCtx] = None
) -> None:
    """Check a sequence against an expected quantified output environment."""
    ctx = ctx or CheckCtx()
    match s:
        case S.SEmpty():
            match expected:
                case S.QSimple(env):
                    envs.subset(env, omega, "T_EMPTY", s.span)
                    ctx.rule("T_EMPTY")
                case S.QExists():
                    raise CheckError(
                        "T_EMPTY",
                        f"output {show(expected)} is existential; a witness annotation is required",
                        span=s.span,
                        reason="MissingWitness",
                    )
            return
        case S.SWitness(witness, ann, rest):
            if not isinstance(ann, S.QExists):
                raise CheckError(
                    "T_WITNESS", f"witness annotates non-existential {show(ann)}", span=s.span,
                    reason="WitnessMismatch",
                )
            if not S.alpha_eq(ann, expected):
                raise CheckError(
                    "T_WITNESS",
                    f"witness annotation {show(ann)} does not match the goal {show(expected)}",
                    span=s.span,
                    reason="WitnessMismatch",
                )
            ctx.rule("T_WITNESS")
            id_check_seq(gamma, omega, rest, S.subst_ind(ann.body, ann.var, witness), ctx)
            return
        case S.SSubst(body, fam, proof):
            proof_ty = id_check_expr(gamma, omega, proof, ctx)
            if not isinstance(proof_ty, S.PEq):
                raise CheckError(
                    "T_SUBST", f"coercion proof has type {show(proof_ty)}, expected an equation", span=s.span
                )
            claimed = S.subst_ind(fam.body, fam.var, proof_ty.left)
            if not S.alpha_eq(claimed, expected):
                raise CheckError(
                    "T_SUBST",
                    f"coercion yields {show(claimed)}, the goal is {show(expected)}",
                    span=s.span,
                )
            ctx.rule("T_SUBST")
            id_check_seq(gamma, omega, body, S.subst_ind(fam.body, fam.var, proof_ty.right), ctx)
            return
        case S.SCst(name, value, rest):
            if envs.lookup(omega, name) is not None:
                raise CheckError(
                    "T_CST",
                    f"'{name}' shadows a live store variable; rename the constant",
                    span=s.span,
                    reason="FreshnessViolation",
                )
            ty = id_check_expr(gamma, omega, value, ctx)
            ctx.rule("T_CST")
            id_check_seq(gamma + ((name, ty),), omega, rest, expected, ctx)
            return
        case S.SVar(name, value, rest):
            ty = id_check_expr(gamma, omega, value, ctx)
            if envs.belongs(name, expected):
                raise CheckError(
                    "T_VAR",
                    f"local '{name}' must not occur in the output environment {show(expected)}",
                    span=s.span,
                    reason="FreshnessViolation",
                )
            ctx.rule("T_VAR")
            id_check_seq(gamma, omega + ((name, ty),), rest, expected, ctx)
            return
        case S.SUnpack():
            raise CheckError(
                "TC_UPDATE_SEQ_II",
                "'?n.' may only follow a call, block, label or jump delivering an existential",
                span=s.span,
            )
        case S.SCmd(cmd, rest):
            _id_command(gamma, omega, cmd, rest, expected, ctx)
            return
    raise AssertionError(s)


def _id_command(
    gamma: S.Env, omega: S.Env, cmd: S.Command, rest: S.Seq, expected: S.QEnv, ctx: CheckCtx
) -> None:
    match cmd:
        case S.CAssign(name, value):
            envs.require(omega, name, "T_ASSIGN", cmd.span)
            ty = id_check_expr(gamma, omega, value, ctx)
            ctx.rule("T_ASSIGN")
            id_check_seq(gamma, envs.update(omega, name, ty, "T_ASSIGN", cmd.span), rest, expected, ctx)
            return
        case S.CInc(name) | S.CDec(name):
            rule = "T_INC" if isinstance(cmd, S.CInc) else "T_DEC"
            ty = envs.require(omega, name, rule, cmd.span)
            if not isinstance(ty, S.PNat) or ty.index is None:
                raise CheckError(rule, f"'{name}' has type {show(ty)}, expected an indexed nat", span=cmd.span)
            new_index = S.ISucc(ty.index) if isinstance(cmd, S.CInc) else S.IPred(ty.index)
            ctx.rule(rule)
            omega2 = envs.update(omega, name, S.PNat(new_index), rule, cmd.span)
            id_check_seq(gamma, omega2, rest, expected, ctx)
            return
        case S.CBlock(body, ann):
            ctx.rule("T_BLOCK")
            id_check_seq(gamma, omega, body, ann, ctx)
            _id_update_seq(gamma, omega, ann, rest, expected, ctx, cmd.span)
            return
        case S.CLabel(name, body, ann):
            _, out = envs.qsplit(ann)
            cont_ty = neg_output(out)
            ctx.rule("T_LABEL")
            id_check_seq(gamma + ((name, cont_ty),), omega, body, ann, ctx)
            _id_update_seq(gamma, omega, ann, rest, expected, ctx, cmd.span)
            return
        case S.CJump(target, args, ann):
            target_ty = id_check_expr(gamma, omega, target, ctx)
            match target_ty:
                case S.PNeg(S.OSimple(types)):
                    id_check_exprs(gamma, omega, args, types, ctx, "T_JUMP", cmd.span)
                case S.PNeg(S.OExists()):
                    raise CheckError(
                        "T_JUMP",
                        f"jump target expects an existential package {show(target_ty)}; instantiate it with '<:'",
                        span=cmd.span,
                        reason="NegationMismatch",
                    )
                case _:
                    raise CheckError(
                        "T_JUMP",
                        f"jump target has type {show(target_ty)}, expected a negation",
                        span=cmd.span,
                        reason="NegationMismatch",
                    )
            ctx.rule("T_JUMP")
            _id_update_seq(gamma, omega, ann, rest, expected, ctx, cmd.span)
            return
        case S.CFor(var, idx, bound, body, frame):
            frame0 = S.subst_ind(frame, idx, S.IZero()) if idx else frame
            envs.subset(frame0, omega, "T_FOR", cmd.span)
            bound_ty = id_check_expr(gamma, omega, bound, ctx)
            if not isinstance(bound_ty, S.PNat) or bound_ty.index is None:
                raise CheckError(
                    "T_FOR", f"loop bound has type {show(bound_ty)}, expected an indexed nat", span=cmd.span
                )
            eigen = ctx.fresh.fresh(idx or "i")
            ev = S.IVar(eigen)
            if idx is not None:
                body_n = S.subst_ind(body, idx, ev)
                frame_n = S.subst_ind(frame, idx, ev)
                frame_s = S.subst_ind(frame, idx, S.ISucc(ev))
                frame_end = S.subst_ind(frame, idx, bound_ty.index)
            else:
                body_n, frame_n, frame_s, frame_end = body, frame, frame, frame
            ctx.rule("T_FOR")
            id_check_seq(gamma + ((var, S.PNat(ev)),), frame_n, body_n, S.QSimple(frame_s), ctx)
            omega2 = envs.multi_update(omega, frame_end, "T_FOR", cmd.span)
            id_check_seq(gamma, omega2, rest, expected, ctx)
            return
        case S.CCall(fn, args, outs):
            if len(set(outs)) != len(outs):
                raise CheckError("T_CALL", "output idents of a call must be distinct", span=cmd.span)
            fnty = id_check_expr(gamma, omega, fn, ctx)
            match fnty:
                case S.PProc(S.ProtoBase(params, out)):
                    pass
                case S.PProc(S.ProtoAll()):
                    raise CheckError(
                        "T_CALL", f"procedure of type {show(fnty)} must be instantiated before the call",
                        span=cmd.span,
                    )
                case S.PNeg():
                    raise CheckError(
                        "T_CALL",
                        f"'{show(fn)}' is a continuation of type {show(fnty)}; use jump",
                        span=cmd.span,
                    )
                case _:
                    raise CheckError(
                        "T_CALL", f"called a non-procedure of type {show(fnty)}", span=cmd.span
                    )
            id_check_exprs(gamma, omega, args, params, ctx, "T_CALL", cmd.span)
            theta = envs.qzip(outs, out, "T_CALL", cmd.span)
            ctx.rule("T_CALL")
            _id_update_seq(gamma, omega, theta, rest, expected, ctx, cmd.span)
            return
    raise AssertionError(cmd)


def _id_update_seq(
    gamma: S.Env,
    omega: S.Env,
    theta: S.QEnv,
    s: S.Seq,
    expected: S.QEnv,
    ctx: CheckCtx,
    span,
) -> None:
    """Continue checking from the store updated by theta (TC_UPDATE_SEQ)."""
    match theta:
        case S.QSimple(env):
            ctx.rule("TC_UPDATE_SEQ_I")
            omega2 = envs.multi_update(omega, env, "TC_UPDATE_SEQ", span)
            id_check_seq(gamma, omega2, s, expected, ctx)
            return
        case S.QExists(var, body):
            if not isinstance(s, S.SUnpack):
                raise CheckError(
                    "TC_UPDATE_SEQ_II",
                    f"the store update {show(theta)} is existential; the continuation must begin with '?{var}.'",
                    span=span,
                    reason="MissingUnpack",
                )
            eigen = ctx.fresh.fresh(s.var)
            ev = S.IVar(eigen)
            theta_open = S.subst_ind(body, var, ev)
            rest_open = S.subst_ind(s.rest, s.var, ev)
            ctx.rule("TC_UPDATE_SEQ_II")
            _id_update_seq(gamma, omega, theta_open, rest_open, expected, ctx, span)
            return
    raise AssertionError(theta)


# ---------------------------------------------------------------------------
# ID -> FD type translation
# ---------------------------------------------------------------------------

def translate_id_type(p: S.Prop) -> S.Formula:
    match p:
        case S.PProp(name):
            return S.FProp(name)
        case S.PTop():
            return S.FTop()
        case S.PBot():
            return S.FBot()
        case S.PNat(idx):
            return S.FNat(idx)
        case S.PEq(left, right):
            return S.FEq(left, right)
        case S.PProc(proto):
            return translate_proto(proto)
        case S.PNeg(out):
            # absent from the printed translation; the unique choice that
            # makes the label and jump translations well-typed
            return S.neg_f(translate_output(out))
    raise AssertionError(p)


def translate_types(types: Tuple[S.Prop, ...]) -> Tuple[S.Formula, ...]:
    return tuple(translate_id_type(p) for p in types)


def translate_output(out: S.Output) -> S.Formula:
    match out:
        case S.OSimple(types):
            return S.FTuple(translate_types(types))
        case S.OExists(var, body):
            return S.FExists(var, translate_output(body))
    raise AssertionError(out)


def translate_proto(rho: S.Proto) -> S.Formula:
    match rho:
        case S.ProtoBase(params, out):
            return S.FArrow(S.FTuple(translate_types(params)), translate_output(out))
        case S.ProtoAll(var, body):
            return S.FForall(var, translate_proto(body))
    raise AssertionError(rho)


def translate_qenv(theta: S.QEnv) -> Tuple[Tuple[str, ...], S.Formula]:
    """TR_QENV: the ident tuple together with the translated formula."""
    names, out = envs.qsplit(theta)
    return names, translate_output(out)


# ---------------------------------------------------------------------------
# ID -> FD term translation (runs on checked programs)
# ---------------------------------------------------------------------------

def translate_id_expr(e: S.Expr, tctx: TranslateCtx) -> S.Term:
    match e:
        case S.ENum(value):
            term: S.Term = S.TZero()
            for _ in range(value):
                term = S.TSucc(term)
            return term
        case S.EVar(name):
            return S.TVar(name)
        case S.EStar():
            return S.TTuple(())
        case S.EAxiom(left, right):
            return S.TAxiom(left, right)
        case S.EProc(header):
            return translate_header(header, tctx)
        case S.EInst(fn, arg):
            return S.TIndApp(translate_id_expr(fn, tctx), arg)
        case S.EContInst(fn, fam, arg):
            body_f = translate_output(fam.body)
            fresh = tctx.fresh()
            pack = S.TPack(arg, S.TVar(fresh), S.FExists(fam.var, body_f))
            return S.TFn(
                fresh,
                S.subst_ind(body_f, fam.var, arg),
                S.TApp(translate_id_expr(fn, tctx), pack),
            )
        case S.ECoerce(subject, fam, proof):
            return S.TCoerce(
                translate_id_expr(subject, tctx),
                S.Fam(fam.var, translate_id_type(fam.body)),
                translate_id_expr(proof, tctx),
            )
    raise AssertionError(e)


def translate_header(header: S.Header, tctx: TranslateCtx) -> S.Term:
    match header:
        case S.HForall(var, body):
            return S.TIndLam(var, translate_header(body, tctx))
        case S.HBase(params, out, body):
            names, types = envs.split(params)
            live, _ = envs.qsplit(out)
            inner = translate_id_seq(body, live, tctx)
            return fn_over_tuple(names, translate_types(types), inner, tctx)
    raise AssertionError(header)


def translate_id_seq(s: S.Seq, live: Tuple[str, ...], tctx: TranslateCtx) -> S.Term:
    match s:
        case S.SEmpty():
            return S.TTuple(tuple(S.TVar(x) for x in live))
        case S.SCst(name, value, rest) | S.SVar(name, value, rest):
            return S.TLet(name, translate_id_expr(value, tctx), translate_id_seq(rest, live, tctx))
        case S.SUnpack(var, rest):
            return S.TUnpack(var, translate_id_seq(rest, live, tctx))
        case S.SWitness(witness, ann, rest):
            _, phi = translate_qenv(ann)
            return S.TPack(witness, translate_id_seq(rest, live, tctx), phi)
        case S.SSubst(body, fam, proof):
            _, phi = translate_qenv(fam.body)
            return S.TCoerce(
                translate_id_seq(body, live, tctx),
                S.Fam(fam.var, phi),
                translate_id_expr(proof, tctx),
            )
        case S.SCmd(cmd, rest):
            tail = translate_id_seq(rest, live, tctx)
            return _translate_id_command(cmd, tail, tctx)
    raise AssertionError(s)


def _translate_id_command(cmd: S.Command, tail: S.Term, tctx: TranslateCtx) -> S.Term:
    match cmd:
        case S.CAssign(name, value):
            return S.TLet(name, translate_id_expr(value, tctx), tail)
        case S.CInc(name):
            return S.TLet(name, S.TSucc(S.TVar(name)), tail)
        case S.CDec(name):
            return S.TLet(name, S.TPred(S.TVar(name)), tail)
        case S.CCall(fn, args, outs):
            call = S.TApp(
                translate_id_expr(fn, tctx),
                S.TTuple(tuple(translate_id_expr(a, tctx) for a in args)),
            )
            return S.TLetMatch(outs, call, tail)
        case S.CBlock(body, ann):
            names, _ = translate_qenv(ann)
            return S.TLetMatch(names, translate_id_seq(body, names, tctx), tail)
        case S.CLabel(name, body, ann):
            names, phi = translate_qenv(ann)
            inner = translate_id_seq(body, names, tctx)
            return S.TLetMatch(names, S.TCallcc(S.TFn(name, S.neg_f(phi), inner)), tail)
        case S.CJump(target, args, ann):
            names, phi = translate_qenv(ann)
            throw = S.TThrow(
                phi,
                translate_id_expr(target, tctx),
                S.TTuple(tuple(translate_id_expr(a, tctx) for a in args)),
            )
            return S.TLetMatch(names, throw, tail)
        case S.CFor(var, idx, bound, body, frame):
            names, types = envs.split(frame)
            if idx is None:
                idx_name = S._fresh_name("i", S.free_ind_vars(types) | {var})
            else:
                idx_name = idx
            ftypes = translate_types(types)
            inner = translate_id_seq(body, names, tctx)
            step = S.TIndLam(
                idx_name,
                S.TFn(var, S.FNat(S.IVar(idx_name)), fn_over_tuple(names, ftypes, inner, tctx)),
            )
            motive = S.Fam(idx_name, S.FTuple(ftypes))
            loop = S.TRec(
                translate_id_expr(bound, tctx),
                S.TTuple(tuple(S.TVar(x) for x in names)),
                step,
                motive,
            )
            return S.TLetMatch(names, loop, tail)
    raise AssertionError(cmd)
