"""Erasure, an environment machine for the functional language with
first-class continuations and primitive recursion, and a direct
big-step interpreter for jump-free imperative programs used as the
differential-testing oracle.

The machine is the semantics of record: continuation stacks are
persistent, so captured continuations are multi-shot; throw applies a
continuation (or a never-returning closure), abandoning the current
context; rec unfolds its step through machine frames, so deep loops are
iterative rather than stack-consuming.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from . import syntax as S
from .errors import EvalError, FuelExhausted, NonErasable, StuckTerm

DEFAULT_FUEL = 10_000_000


# ---------------------------------------------------------------------------
# Runtime terms (the functional fragment after erasure)
# ---------------------------------------------------------------------------

class RTerm:
    __slots__ = ()


@dataclass(frozen=True)
class RVar(RTerm):
    name: str


@dataclass(frozen=True)
class RNum(RTerm):
    value: int


@dataclass(frozen=True)
class RSucc(RTerm):
    arg: RTerm


@dataclass(frozen=True)
class RPred(RTerm):
    arg: RTerm


@dataclass(frozen=True)
class RFn(RTerm):
    param: str
    body: RTerm


@dataclass(frozen=True)
class RApp(RTerm):
    fn: RTerm
    arg: RTerm


@dataclass(frozen=True)
class RTuple(RTerm):
    items: Tuple[RTerm, ...]


@dataclass(frozen=True)
class RLet(RTerm):
    name: str
    value: RTerm
    body: RTerm


@dataclass(frozen=True)
class RLetMatch(RTerm):
    names: Tuple[str, ...]
    value: RTerm
    body: RTerm


@dataclass(frozen=True)
class RRec(RTerm):
    bound: RTerm
    base: RTerm
    step: RTerm


@dataclass(frozen=True)
class RCallcc(RTerm):
    arg: RTerm


@dataclass(frozen=True)
class RThrow(RTerm):
    cont: RTerm
    arg: RTerm


def erase(t: S.Term) -> RTerm:
    """Strip the specificational layer: individuals, packs, coercions and
    axiom terms; throw keeps both subterms and drops its formula."""
    match t:
        case S.TVar(name):
            return RVar(name)
        case S.TZero():
            return RNum(0)
        case S.TSucc(arg):
            return RSucc(erase(arg))
        case S.TPred(arg):
            return RPred(erase(arg))
        case S.TFn(param, _, body):
            return RFn(param, erase(body))
        case S.TApp(fn, arg):
            return RApp(erase(fn), erase(arg))
        case S.TIndLam(_, body):
            return erase(body)
        case S.TIndApp(fn, _):
            return erase(fn)
        case S.TRec(bound, base, step, _):
            return RRec(erase(bound), erase(base), erase(step))
        case S.TTuple(items):
            return RTuple(tuple(erase(x) for x in items))
        case S.TLet(name, value, body):
            return RLet(name, erase(value), erase(body))
        case S.TLetMatch(names, value, body):
            return RLetMatch(names, erase(value), erase(body))
        case S.TPack(_, value, _):
            return erase(value)
        case S.TUnpack(_, body):
            return erase(body)
        case S.TCoerce(subject, _, _):
            return erase(subject)  # the equality proof is computationally irrelevant
        case S.TAxiom():
            raise NonErasable("an axiom term survives only inside a discarded coercion proof")
        case S.TCallcc(arg):
            return RCallcc(erase(arg))
        case S.TThrow(_, cont, arg):
            return RThrow(erase(cont), erase(arg))
    raise AssertionError(t)


# ---------------------------------------------------------------------------
# Values and environments
# ---------------------------------------------------------------------------

class Clos:
    __slots__ = ("param", "body", "env")

    def __init__(self, param: str, body: RTerm, env):
        self.param = param
        self.body = body
        self.env = env

    def __repr__(self) -> str:
        return "<closure>"


class ContV:
    __slots__ = ("kont",)

    def __init__(self, kont):
        self.kont = kont

    def __repr__(self) -> str:
        return "<cont>"


# values: int | tuple of values | Clos | ContV

def show_value(v: Any) -> str:
    if isinstance(v, bool):
        raise AssertionError("no booleans at runtime")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return "<" + ", ".join(show_value(x) for x in v) + ">"
    return repr(v)


class _REnv:
    __slots__ = ("name", "value", "parent")

    def __init__(self, name, value, parent):
        self.name = name
        self.value = value
        self.parent = parent


def _lookup(env: Optional[_REnv], name: str) -> Any:
    while env is not None:
        if env.name == name:
            return env.value
        env = env.parent
    raise StuckTerm(f"unbound runtime variable '{name}'")


# ---------------------------------------------------------------------------
# The machine
# ---------------------------------------------------------------------------

_HALT = None


def evaluate(t: RTerm, fuel: int = DEFAULT_FUEL) -> Any:
    """Run a closed runtime term to a value, or raise FuelExhausted."""
    control: Any = t
    env: Optional[_REnv] = None
    kont: Any = _HALT
    value: Any = None
    returning = False
    budget = fuel
    while True:
        budget -= 1
        if budget < 0:
            raise FuelExhausted(fuel)
        if not returning:
            match control:
                case RVar(name):
                    value = _lookup(env, name)
                    returning = True
                case RNum(n):
                    value = n
                    returning = True
                case RFn(param, body):
                    value = Clos(param, body, env)
                    returning = True
                case RSucc(arg):
                    kont = ("succ", kont)
                    control = arg
                case RPred(arg):
                    kont = ("pred", kont)
                    control = arg
                case RApp(fn, arg):
                    kont = ("arg", arg, env, kont)
                    control = fn
                case RTuple(items):
                    if not items:
                        value = ()
                        returning = True
                    else:
                        kont = ("tuple", items, 1, (), env, kont)
                        control = items[0]
                case RLet(name, val, body):
                    kont = ("let", name, body, env, kont)
                    control = val
                case RLetMatch(names, val, body):
                    kont = ("match", names, body, env, kont)
                    control = val
                case RRec(bound, base, step):
                    kont = ("rec_base", base, step, env, kont)
                    control = bound
                case RCallcc(arg):
                    kont = ("callcc", kont)
                    control = arg
                case RThrow(cont, arg):
                    kont = ("throw_fn", arg, env, kont)
                    control = cont
                case _:
                    raise StuckTerm(f"bad control {control!r}")
            continue
        # returning a value to the continuation
        if kont is _HALT:
            return value
        tag = kont[0]
        if tag == "succ":
            _need_num(value)
            value = value + 1
            kont = kont[1]
        elif tag == "pred":
            _need_num(value)
            value = max(value - 1, 0)
            kont = kont[1]
        elif tag == "arg":
            _, arg, aenv, parent = kont
            kont = ("app", value, parent)
            control = arg
            env = aenv
            returning = False
        elif tag == "app":
            _, fnval, parent = kont
            control, env, kont, value, returning = _apply(fnval, value, parent)
        elif tag == "tuple":
            _, items, k, done, tenv, parent = kont
            done = done + (value,)
            if k == len(items):
                value = done
                kont = parent
            else:
                kont = ("tuple", items, k + 1, done, tenv, parent)
                control = items[k]
                env = tenv
                returning = False
        elif tag == "let":
            _, name, body, lenv, parent = kont
            env = _REnv(name, value, lenv)
            control = body
            kont = parent
            returning = False
        elif tag == "match":
            _, names, body, lenv, parent = kont
            if not isinstance(value, tuple) or len(value) != len(names):
                raise StuckTerm(f"tuple pattern <{', '.join(names)}> against {show_value(value)}")
            for name, item in zip(names, value):
                lenv = _REnv(name, item, lenv)
            env = lenv
            control = body
            kont = parent
            returning = False
        elif tag == "rec_base":
            _, base, step, renv, parent = kont
            _need_num(value)
            kont = ("rec_step", value, step, renv, parent)
            control = base
            env = renv
            returning = False
        elif tag == "rec_step":
            _, bound, step, renv, parent = kont
            kont = ("rec_loop", bound, 0, value, parent)
            control = step
            env = renv
            returning = False
        elif tag == "rec_loop":
            # value is the step function; iterate from the accumulated base
            _, bound, k, acc, parent = kont
            stepv = value
            if k == bound:
                value = acc
                kont = parent
            else:
                kont = ("rec_acc", bound, k, acc, stepv, parent)
                control, env, kont, value, returning = _apply(stepv, k, kont)
        elif tag == "rec_acc":
            _, bound, k, acc, stepv, parent = kont
            kont = ("rec_next", bound, k, stepv, parent)
            control, env, kont, value, returning = _apply(value, acc, kont)
        elif tag == "rec_next":
            _, bound, k, stepv, parent = kont
            kont = ("rec_loop", bound, k + 1, value, parent)
            value = stepv
        elif tag == "callcc":
            _, parent = kont
            control, env, kont, value, returning = _apply(value, ContV(parent), parent)
        elif tag == "throw_fn":
            _, arg, aenv, parent = kont
            kont = ("throw_arg", value, parent)
            control = arg
            env = aenv
            returning = False
        elif tag == "throw_arg":
            _, contval, _parent = kont
            # the current context is abandoned
            control, env, kont, value, returning = _apply(contval, value, _HALT)
        else:
            raise StuckTerm(f"bad frame {tag!r}")


def _need_num(value: Any) -> None:
    if not isinstance(value, int):
        raise StuckTerm(f"expected a numeral, found {show_value(value)}")


def _apply(fnval: Any, argval: Any, kont: Any):
    """Returns the next (control, env, kont, value, returning) state."""
    if isinstance(fnval, Clos):
        return fnval.body, _REnv(fnval.param, argval, fnval.env), kont, None, False
    if isinstance(fnval, ContV):
        return None, None, fnval.kont, argval, True
    raise StuckTerm(f"applied a non-function {show_value(fnval)}")


# ---------------------------------------------------------------------------
# Direct interpreter for the jump-free imperative fragment (the oracle)
# ---------------------------------------------------------------------------

class IClos:
    __slots__ = ("header", "gamma")

    def __init__(self, header: S.HBase, gamma: Dict[str, Any]):
        self.header = header
        self.gamma = gamma

    def __repr__(self) -> str:
        return "<proc>"


def eval_i_expr(e: S.Expr, gamma: Dict[str, Any], store: Dict[str, Any]) -> Any:
    match e:
        case S.EVar(name):
            if name in store:
                return store[name]
            if name in gamma:
                return gamma[name]
            raise EvalError("UnboundIdent", f"'{name}' at runtime")
        case S.EStar():
            return ()
        case S.ENum(value):
            return value
        case S.EProc(header):
            if not isinstance(header, S.HBase):
                raise EvalError("Unsupported", "quantified headers are outside the simple interpreter")
            return IClos(header, dict(gamma))
    raise EvalError("Unsupported", f"expression {type(e).__name__} is outside the simple interpreter")


def call_proc(clos: IClos, args: Tuple[Any, ...]) -> Tuple[Any, ...]:
    header = clos.header
    names = [x for x, _ in header.params]
    gamma = dict(clos.gamma)
    gamma.update(zip(names, args))
    assert isinstance(header.out, S.QSimple)
    out_names = [x for x, _ in header.out.env]
    store: Dict[str, Any] = {x: () for x in out_names}
    exec_seq(header.body, gamma, store)
    return tuple(store[x] for x in out_names)


def exec_seq(s: S.Seq, gamma: Dict[str, Any], store: Dict[str, Any]) -> None:
    match s:
        case S.SEmpty():
            return
        case S.SCst(name, value, rest):
            gamma2 = dict(gamma)
            gamma2[name] = eval_i_expr(value, gamma, store)
            exec_seq(rest, gamma2, store)
            return
        case S.SVar(name, value, rest):
            store[name] = eval_i_expr(value, gamma, store)
            exec_seq(rest, gamma, store)
            del store[name]
            return
        case S.SCmd(cmd, rest):
            exec_command(cmd, gamma, store)
            exec_seq(rest, gamma, store)
            return
    raise EvalError("Unsupported", f"sequence {type(s).__name__} is outside the simple interpreter")


def exec_command(cmd: S.Command, gamma: Dict[str, Any], store: Dict[str, Any]) -> None:
    match cmd:
        case S.CAssign(name, value):
            store[name] = eval_i_expr(value, gamma, store)
            return
        case S.CInc(name):
            store[name] = store[name] + 1
            return
        case S.CDec(name):
            store[name] = max(store[name] - 1, 0)
            return
        case S.CBlock(body, ann):
            assert isinstance(ann, S.QSimple)
            frame_names = [x for x, _ in ann.env]
            sub = {x: store[x] for x in frame_names}
            exec_seq(body, gamma, sub)
            for x in frame_names:
                store[x] = sub[x]
            return
        case S.CFor(var, None, bound, body, frame):
            n = eval_i_expr(bound, gamma, store)
            frame_names = [x for x, _ in frame]
            sub = {x: store[x] for x in frame_names}
            for k in range(n):
                gamma2 = dict(gamma)
                gamma2[var] = k
                exec_seq(body, gamma2, sub)
            for x in frame_names:
                store[x] = sub[x]
            return
        case S.CCall(fn, args, outs):
            clos = eval_i_expr(fn, gamma, store)
            if not isinstance(clos, IClos):
                raise EvalError("Unsupported", "called a non-procedure value")
            argvals = tuple(eval_i_expr(a, gamma, store) for a in args)
            results = call_proc(clos, argvals)
            for name, v in zip(outs, results):
                store[name] = v
            return
    raise EvalError("Unsupported", f"command {type(cmd).__name__} is outside the simple interpreter")


def interpret_program(
    csts: Tuple[Tuple[str, S.Expr], ...],
    main: Optional[S.MainI],
    entry: Optional[str],
    inputs: Tuple[int, ...],
) -> Tuple[Any, ...]:
    """Run an IS file directly; returns the final output values in order."""
    gamma: Dict[str, Any] = {}
    for name, value in csts:
        gamma[name] = eval_i_expr(value, gamma, {})
    if entry is not None:
        clos = gamma[entry]
        if not isinstance(clos, IClos):
            raise EvalError("Unsupported", f"entry '{entry}' is not a procedure")
        return call_proc(clos, inputs)
    if main is None:
        raise EvalError("NoMain", "the file has no main sequence and no entry was chosen")
    assert isinstance(main.out, S.QSimple)
    out_names = [x for x, _ in main.out.env]
    store: Dict[str, Any] = {x: () for x in out_names}
    exec_seq(main.body, gamma, store)
    return tuple(store[x] for x in out_names)
