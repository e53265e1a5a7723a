"""The simply-typed half: FS term checking, IS pseudo-dynamic checking,
and the IS-to-FS translation.

Both checkers are syntax directed and synthesize types; IS assignment
may retype a store variable ("pseudo-dynamic").  Translation is defined
on well-typed programs and must be run after checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import envs
from . import syntax as S
from .errors import CheckError
from .printer import show


class CheckCtx:
    """Per-run checker state: rule trace and warnings."""

    def __init__(self, trace: Optional[List[str]] = None, warnings: Optional[List[str]] = None):
        self.trace = trace
        self.warnings = warnings if warnings is not None else []
        self.fresh = S.Freshener()

    def rule(self, label: str) -> None:
        if self.trace is not None:
            self.trace.append(label)

    def warn(self, message: str) -> None:
        self.warnings.append(message)


def _simple_formula(phi: S.Formula, span=None) -> None:
    if not S.is_simple_formula(phi):
        raise CheckError("FS", f"{show(phi)} is not a simple type", span=span)


# ---------------------------------------------------------------------------
# FS: functional simple type system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FsDerivationReport:
    """A checked term with its type and the rule trace of the derivation.

    Checking is syntax directed, so re-deriving the subject replays the
    trace exactly.
    """

    subject: S.Term
    type: S.Formula
    trace: Tuple[str, ...]


def fs_derivation(sigma: S.Env, t: S.Term) -> FsDerivationReport:
    trace: List[str] = []
    ty = fs_check_term(sigma, t, CheckCtx(trace=trace))
    return FsDerivationReport(t, ty, tuple(trace))


def fs_check_term(sigma: S.Env, t: S.Term, ctx: Optional[CheckCtx] = None) -> S.Formula:
    """Synthesize the unique simple type of t, or raise CheckError."""
    ctx = ctx or CheckCtx()
    return _fs(sigma, t, ctx)


def _fs(sigma: S.Env, t: S.Term, ctx: CheckCtx) -> S.Formula:
    match t:
        case S.TVar(name):
            ty = envs.lookup(sigma, name)
            if ty is None:
                raise CheckError("TC_VAR", f"unbound variable '{name}'", span=t.span, reason="UnboundVariable")
            ctx.rule("TC_VAR")
            return ty
        case S.TZero():
            ctx.rule("TC_ZERO")
            return S.FNat(None)
        case S.TSucc(arg):
            _expect(_fs(sigma, arg, ctx), S.FNat(None), "TC_SUCC", t.span)
            ctx.rule("TC_SUCC")
            return S.FNat(None)
        case S.TPred(arg):
            _expect(_fs(sigma, arg, ctx), S.FNat(None), "TC_PRED", t.span)
            ctx.rule("TC_PRED")
            return S.FNat(None)
        case S.TFn(param, ann, body):
            _simple_formula(ann, t.span)
            cod = _fs(sigma + ((param, ann),), body, ctx)
            ctx.rule("TC_LAM")
            return S.FArrow(ann, cod)
        case S.TApp(fn, arg):
            fnty = _fs(sigma, fn, ctx)
            if not isinstance(fnty, S.FArrow):
                raise CheckError("TC_APP", f"applied a non-function of type {show(fnty)}", span=t.span)
            _expect(_fs(sigma, arg, ctx), fnty.dom, "TC_APP", t.span)
            ctx.rule("TC_APP")
            return fnty.cod
        case S.TRec(bound, base, step, motive):
            if motive is not None:
                raise CheckError("TC_REC", "simple rec carries no motive", span=t.span)
            _expect(_fs(sigma, bound, ctx), S.FNat(None), "TC_REC", t.span)
            tau = _fs(sigma, base, ctx)
            expected = S.FArrow(S.FNat(None), S.FArrow(tau, tau))
            _expect(_fs(sigma, step, ctx), expected, "TC_REC", t.span)
            ctx.rule("TC_REC")
            return tau
        case S.TTuple(items):
            types = tuple(_fs(sigma, item, ctx) for item in items)
            ctx.rule("TC_TUPLE")
            return S.FTuple(types)
        case S.TLet(name, value, body):
            ty = _fs(sigma, value, ctx)
            ctx.rule("TC_LET")
            return _fs(sigma + ((name, ty),), body, ctx)
        case S.TLetMatch(names, value, body):
            ty = _fs(sigma, value, ctx)
            if not isinstance(ty, S.FTuple) or len(ty.items) != len(names):
                raise CheckError(
                    "TC_MATCH",
                    f"pattern <{', '.join(names)}> does not match {show(ty)}",
                    span=t.span,
                )
            ctx.rule("TC_MATCH")
            ctx.rule("TCTE_PRODUCT")
            extended = sigma + tuple(zip(names, ty.items))
            return _fs(extended, body, ctx)
    raise CheckError("FS", f"term not in the simple fragment: {show(t)}", span=getattr(t, "span", None))


def _expect(found: S.Formula, wanted: S.Formula, rule: str, span) -> None:
    if not S.alpha_eq(found, wanted):
        raise CheckError(rule, f"expected {show(wanted)}, found {show(found)}", span=span)


# ---------------------------------------------------------------------------
# IS: imperative pseudo-dynamic simple type system
# ---------------------------------------------------------------------------

def _fresh_for_store(name: str, omega: S.Env, rule: str, span) -> None:
    """Declarations may not shadow live store idents: a shadowed store
    name would resolve differently in the checker (rightmost binding)
    and in the let-based translation (innermost binding)."""
    if envs.lookup(omega, name) is not None:
        raise CheckError(
            rule,
            f"'{name}' shadows a live store variable; rename the declaration",
            span=span,
            reason="FreshnessViolation",
        )


def check_header_idents(params: S.Env, out_names: Tuple[str, ...], rule: str, span) -> None:
    """Parameter and output idents are distinct, and do not collide."""
    pnames = [x for x, _ in params]
    if len(set(pnames)) != len(pnames):
        raise CheckError(rule, "duplicate parameter idents", span=span)
    if len(set(out_names)) != len(out_names):
        raise CheckError(rule, "duplicate output idents", span=span)
    clash = set(pnames) & set(out_names)
    if clash:
        raise CheckError(rule, f"ident '{sorted(clash)[0]}' is both parameter and output", span=span)


def _simple_prop(p: S.Prop, span=None) -> None:
    match p:
        case S.PTop():
            return
        case S.PNat(None):
            return
        case S.PProc(S.ProtoBase(params, S.OSimple(types))):
            for q in params:
                _simple_prop(q, span)
            for q in types:
                _simple_prop(q, span)
            return
    raise CheckError("IS", f"{show(p)} is not a simple type", span=span)


def is_check_expr(gamma: S.Env, omega: S.Env, e: S.Expr, ctx: Optional[CheckCtx] = None) -> S.Prop:
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
            ctx.rule("T_UNIT")
            return S.PTop()
        case S.ENum(_):
            ctx.rule("T_NUM")
            return S.PNat(None)
        case S.EProc(header):
            return S.proc_t(is_check_header(gamma, header, ctx, span=e.span))
    raise CheckError("IS", f"expression not in the simple fragment: {show(e)}", span=getattr(e, "span", None))


def is_check_header(gamma: S.Env, header: S.Header, ctx: CheckCtx, span=None) -> S.Proto:
    """T_PROC: check a procedure literal against its declared prototype."""
    if not isinstance(header, S.HBase):
        raise CheckError("T_PROC", "quantified headers are not simple", span=span)
    if not isinstance(header.out, S.QSimple):
        raise CheckError("T_PROC", "existential outputs are not simple", span=span)
    for _, p in header.params:
        _simple_prop(p, span)
    out_env = header.out.env
    for _, p in out_env:
        _simple_prop(p, span)
    names, types = envs.split(out_env)
    check_header_idents(header.params, names, "T_PROC", span)
    start = envs.init(names, S.PTop())
    gamma2 = envs.append(gamma, header.params)
    ctx.rule("T_PROC")
    final = is_check_seq(gamma2, start, header.body, ctx)
    if not S.alpha_env(final, out_env):
        raise CheckError(
            "T_PROC",
            f"body ends with store {show_env(final)}, declared out is {show_env(out_env)}",
            span=span,
            reason="OutputMismatch",
        )
    _, param_types = envs.split(header.params)
    return S.ProtoBase(param_types, S.OSimple(types))


def show_env(env: S.Env) -> str:
    from .printer import show_env as _se

    return _se(env)


def is_check_seq(gamma: S.Env, omega: S.Env, s: S.Seq, ctx: Optional[CheckCtx] = None) -> S.Env:
    """Synthesize the final store typing of a simple sequence."""
    ctx = ctx or CheckCtx()
    match s:
        case S.SEmpty():
            ctx.rule("T_EMPTY")
            return omega
        case S.SCst(name, value, rest):
            _fresh_for_store(name, omega, "T_CST", s.span)
            ty = is_check_expr(gamma, omega, value, ctx)
            ctx.rule("T_CST")
            return is_check_seq(gamma + ((name, ty),), omega, rest, ctx)
        case S.SVar(name, value, rest):
            _fresh_for_store(name, omega, "T_VAR", s.span)
            ty = is_check_expr(gamma, omega, value, ctx)
            ctx.rule("T_VAR")
            final = is_check_seq(gamma, omega + ((name, ty),), rest, ctx)
            if not final or final[-1][0] != name:
                raise CheckError("T_VAR", f"store does not end with '{name}'", span=s.span)
            return final[:-1]
        case S.SCmd(cmd, rest):
            omega2 = _is_command(gamma, omega, cmd, ctx)
            return is_check_seq(gamma, omega2, rest, ctx)
    raise CheckError("IS", "sequence form not in the simple fragment", span=getattr(s, "span", None))


def _is_command(gamma: S.Env, omega: S.Env, cmd: S.Command, ctx: CheckCtx) -> S.Env:
    match cmd:
        case S.CAssign(name, value):
            envs.require(omega, name, "T_ASSIGN", cmd.span)
            ty = is_check_expr(gamma, omega, value, ctx)
            ctx.rule("T_ASSIGN")
            return envs.update(omega, name, ty, "T_ASSIGN", cmd.span)
        case S.CInc(name) | S.CDec(name):
            rule = "T_INC" if isinstance(cmd, S.CInc) else "T_DEC"
            ty = envs.require(omega, name, rule, cmd.span)
            if not S.alpha_eq(ty, S.PNat(None)):
                raise CheckError(rule, f"'{name}' has type {show(ty)}, expected nat", span=cmd.span)
            ctx.rule(rule)
            return omega
        case S.CBlock(body, ann):
            if not isinstance(ann, S.QSimple):
                raise CheckError("T_BLOCK", "existential block annotations are not simple", span=cmd.span)
            frame = ann.env
            envs.subset(frame, omega, "T_BLOCK", cmd.span)
            ctx.rule("T_BLOCK")
            result = is_check_seq(gamma, frame, body, ctx)
            return envs.multi_update(omega, result, "T_BLOCK", cmd.span)
        case S.CFor(var, idx, bound, body, frame):
            if idx is not None:
                raise CheckError("T_FOR", "indexed loops are not simple", span=cmd.span)
            envs.subset(frame, omega, "T_FOR", cmd.span)
            bty = is_check_expr(gamma, omega, bound, ctx)
            if not S.alpha_eq(bty, S.PNat(None)):
                raise CheckError("T_FOR", f"loop bound has type {show(bty)}, expected nat", span=cmd.span)
            ctx.rule("T_FOR")
            result = is_check_seq(gamma + ((var, S.PNat(None)),), frame, body, ctx)
            if not S.alpha_env(result, frame):
                raise CheckError(
                    "T_FOR",
                    f"loop body maps frame {show_env(frame)} to {show_env(result)}",
                    span=cmd.span,
                    reason="LoopFrameNotInvariant",
                )
            return omega
        case S.CCall(fn, args, outs):
            if len(set(outs)) != len(outs):
                raise CheckError("T_CALL", "output idents of a call must be distinct", span=cmd.span)
            fnty = is_check_expr(gamma, omega, fn, ctx)
            match fnty:
                case S.PProc(S.ProtoBase(params, S.OSimple(types))):
                    pass
                case _:
                    raise CheckError("T_CALL", f"called a non-procedure of type {show(fnty)}", span=cmd.span)
            if len(args) != len(params):
                raise CheckError(
                    "T_CALL",
                    f"{len(args)} arguments for {len(params)} parameters",
                    span=cmd.span,
                    reason="LengthMismatch",
                )
            ctx.rule("T_CALL")
            for arg, want in zip(args, params):
                got = is_check_expr(gamma, omega, arg, ctx)
                ctx.rule("T_EXPS_II")
                if not S.alpha_eq(got, want):
                    raise CheckError(
                        "T_EXPS", f"argument has type {show(got)}, expected {show(want)}", span=cmd.span
                    )
            binding = envs.zip_env(outs, types, "T_CALL", cmd.span)
            return envs.multi_update(omega, binding, "T_CALL", cmd.span)
        case S.CJump() | S.CLabel():
            raise CheckError("IS", "jumps and labels are not simple", span=cmd.span)
    raise AssertionError(cmd)


# ---------------------------------------------------------------------------
# IS -> FS translation
# ---------------------------------------------------------------------------

def translate_is_type(p: S.Prop) -> S.Formula:
    match p:
        case S.PNat(None):
            return S.FNat(None)
        case S.PTop():
            return S.FTop()
        case S.PProc(S.ProtoBase(params, S.OSimple(types))):
            dom = S.FTuple(tuple(translate_is_type(q) for q in params))
            cod = S.FTuple(tuple(translate_is_type(q) for q in types))
            return S.FArrow(dom, cod)
    raise CheckError("TR_TYPE", f"{show(p)} is outside the simple fragment")


class TranslateCtx:
    """Fresh-name supply for translation-introduced binders (_v namespace)."""

    def __init__(self) -> None:
        self._count = 0

    def fresh(self) -> str:
        self._count += 1
        return f"_v{self._count}"


def fn_over_tuple(
    names: Tuple[str, ...], types: Tuple[S.Formula, ...], body: S.Term, tctx: TranslateCtx
) -> S.Term:
    """fn (x1 : t1, ..., xk : tk) => body, as a unary fn plus a match."""
    fresh = tctx.fresh()
    return S.TFn(fresh, S.FTuple(types), S.TLetMatch(names, S.TVar(fresh), body))


def translate_is_expr(e: S.Expr, tctx: TranslateCtx) -> S.Term:
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
        case S.EProc(S.HBase(params, S.QSimple(out_env), body)):
            names, types = envs.split(params)
            out_names, _ = envs.split(out_env)
            inner = translate_is_seq(body, out_names, tctx)
            ftypes = tuple(translate_is_type(t) for t in types)
            return fn_over_tuple(names, ftypes, inner, tctx)
    raise CheckError("TR_EXP", f"expression outside the simple fragment: {show(e)}")


def translate_is_seq(s: S.Seq, live: Tuple[str, ...], tctx: TranslateCtx) -> S.Term:
    """State-passing translation; live is the ident vector threaded through."""
    match s:
        case S.SEmpty():
            return S.TTuple(tuple(S.TVar(x) for x in live))
        case S.SCst(name, value, rest) | S.SVar(name, value, rest):
            return S.TLet(name, translate_is_expr(value, tctx), translate_is_seq(rest, live, tctx))
        case S.SCmd(cmd, rest):
            tail = translate_is_seq(rest, live, tctx)
            return _translate_is_command(cmd, tail, tctx)
    raise CheckError("TR_SEQ", "sequence outside the simple fragment")


def _translate_is_command(cmd: S.Command, tail: S.Term, tctx: TranslateCtx) -> S.Term:
    match cmd:
        case S.CAssign(name, value):
            return S.TLet(name, translate_is_expr(value, tctx), tail)
        case S.CInc(name):
            return S.TLet(name, S.TSucc(S.TVar(name)), tail)
        case S.CDec(name):
            return S.TLet(name, S.TPred(S.TVar(name)), tail)
        case S.CCall(fn, args, outs):
            call = S.TApp(
                translate_is_expr(fn, tctx),
                S.TTuple(tuple(translate_is_expr(a, tctx) for a in args)),
            )
            return S.TLetMatch(outs, call, tail)
        case S.CBlock(body, S.QSimple(frame)):
            names, _ = envs.split(frame)
            inner = translate_is_seq(body, names, tctx)
            return S.TLetMatch(names, inner, tail)
        case S.CFor(var, None, bound, body, frame):
            names, types = envs.split(frame)
            ftypes = tuple(translate_is_type(t) for t in types)
            inner = translate_is_seq(body, names, tctx)
            step = S.TFn(var, S.FNat(None), fn_over_tuple(names, ftypes, inner, tctx))
            loop = S.TRec(
                translate_is_expr(bound, tctx),
                S.TTuple(tuple(S.TVar(x) for x in names)),
                step,
            )
            return S.TLetMatch(names, loop, tail)
    raise CheckError("TR_SEQ", "command outside the simple fragment")
