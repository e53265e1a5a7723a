"""Abstract syntax for both languages and both type disciplines.

Two term languages share one kernel:

* the functional language (terms ``T*``) with formulas ``F*`` as types,
* the imperative language (expressions ``E*``, commands ``C*``,
  sequences ``S*``) with props ``P*``, outputs, prototypes and
  quantified environments as types.

First-order index terms ("individuals", ``I*``) are common to both.
All nodes are immutable; operations in this module are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Optional, Tuple

Span = Tuple[int, int]  # (line, column)

EIGEN_MARK = "!"


def is_eigen(name: str) -> bool:
    """Eigenvariables live in a reserved namespace the lexer cannot produce."""
    return EIGEN_MARK in name


class Node:
    """Base class for all syntax nodes."""

    __slots__ = ()


def _span_field() -> Any:
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Individuals
# ---------------------------------------------------------------------------

class Ind(Node):
    __slots__ = ()


@dataclass(frozen=True)
class IVar(Ind):
    name: str


@dataclass(frozen=True)
class IZero(Ind):
    pass


@dataclass(frozen=True)
class ISucc(Ind):
    arg: Ind


@dataclass(frozen=True)
class IPred(Ind):
    arg: Ind


@dataclass(frozen=True)
class IAdd(Ind):
    left: Ind
    right: Ind


@dataclass(frozen=True)
class ISub(Ind):
    left: Ind
    right: Ind


@dataclass(frozen=True)
class IMult(Ind):
    left: Ind
    right: Ind


@dataclass(frozen=True)
class IF32(Ind):
    arg: Ind


def num_ind(n: int) -> Ind:
    """Digit literals become zero/succ chains at parse time."""
    out: Ind = IZero()
    for _ in range(n):
        out = ISucc(out)
    return out


# ---------------------------------------------------------------------------
# Formulas (functional-side types; the simple sublanguage is index-free)
# ---------------------------------------------------------------------------

class Formula(Node):
    __slots__ = ()


@dataclass(frozen=True)
class FProp(Formula):
    name: str


@dataclass(frozen=True)
class FTop(Formula):
    pass


@dataclass(frozen=True)
class FBot(Formula):
    pass


@dataclass(frozen=True)
class FNat(Formula):
    index: Optional[Ind] = None  # None in the simple discipline


@dataclass(frozen=True)
class FEq(Formula):
    left: Ind
    right: Ind


@dataclass(frozen=True)
class FArrow(Formula):
    dom: Formula
    cod: Formula


@dataclass(frozen=True)
class FForall(Formula):
    var: str
    body: Formula

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class FExists(Formula):
    var: str
    body: Formula

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class FTuple(Formula):
    items: Tuple[Formula, ...]


def neg_f(phi: Formula) -> Formula:
    """Negation on the functional side is the arrow into the absurd tuple.

    ``callcc``/``throw`` eliminate it by application, so it must *be* an
    arrow; the printer spells it ``~phi``.
    """
    return FArrow(phi, FTuple((FBot(),)))


def as_neg_f(phi: Formula) -> Optional[Formula]:
    if isinstance(phi, FArrow) and phi.cod == FTuple((FBot(),)):
        return phi.dom
    return None


def is_simple_formula(phi: Formula) -> bool:
    """The simple sublanguage: top, bare nat, arrows and tuples only."""
    match phi:
        case FTop():
            return True
        case FNat(index):
            return index is None
        case FArrow(dom, cod):
            return is_simple_formula(dom) and is_simple_formula(cod)
        case FTuple(items):
            return all(is_simple_formula(i) for i in items)
        case _:
            return False


# ---------------------------------------------------------------------------
# Imperative-side types: props, outputs, prototypes, quantified environments
# ---------------------------------------------------------------------------

class Prop(Node):
    __slots__ = ()


class Output(Node):
    __slots__ = ()


class Proto(Node):
    __slots__ = ()


class QEnv(Node):
    __slots__ = ()


# ordered ident:type list; the type side is Prop (imperative) or Formula
Env = Tuple[Tuple[str, Any], ...]


@dataclass(frozen=True)
class PProp(Prop):
    name: str


@dataclass(frozen=True)
class PTop(Prop):
    pass


@dataclass(frozen=True)
class PBot(Prop):
    pass


@dataclass(frozen=True)
class PNat(Prop):
    index: Optional[Ind] = None


@dataclass(frozen=True)
class PEq(Prop):
    left: Ind
    right: Ind


@dataclass(frozen=True)
class PProc(Prop):
    proto: Proto


@dataclass(frozen=True)
class PNeg(Prop):
    """~phi: the type of a continuation accepting phi's value vector.

    Simple outputs give the concrete ``~(psi, ...)``; negating an
    existential output (labels over quantified annotations) keeps the
    quantifier here rather than materialising a forall-prototype.
    """

    out: Output


@dataclass(frozen=True)
class OSimple(Output):
    types: Tuple[Prop, ...]


@dataclass(frozen=True)
class OExists(Output):
    var: str
    body: Output

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class ProtoBase(Proto):
    params: Tuple[Prop, ...]
    out: Output


@dataclass(frozen=True)
class ProtoAll(Proto):
    var: str
    body: Proto

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class QSimple(QEnv):
    env: Env


@dataclass(frozen=True)
class QExists(QEnv):
    var: str
    body: QEnv

    _binds_ind = (("var", ("body",)),)


def proc_t(proto: Proto) -> Prop:
    """Smart constructor for proc types.

    A procedure whose output is exactly ``[bot]`` never returns; such a
    prototype *is* the negation of its parameter vector, and Figure-2
    style programs assign these literals into continuation slots.
    """
    if isinstance(proto, ProtoBase) and proto.params and proto.out == OSimple((PBot(),)):
        return PNeg(OSimple(proto.params))
    return PProc(proto)


@dataclass(frozen=True)
class Fam(Node):
    """A one-binder parametrized node {n/X}; X may be of any category."""

    var: str
    body: Any

    _binds_ind = (("var", ("body",)),)


# ---------------------------------------------------------------------------
# Functional terms
# ---------------------------------------------------------------------------

class Term(Node):
    __slots__ = ()


@dataclass(frozen=True)
class TVar(Term):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TZero(Term):
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TSucc(Term):
    arg: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TPred(Term):
    arg: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TFn(Term):
    param: str
    ann: Formula
    body: Term
    span: Optional[Span] = _span_field()

    _binds_term = (("param", ("body",)),)


@dataclass(frozen=True)
class TApp(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TIndLam(Term):
    var: str
    body: Term
    span: Optional[Span] = _span_field()

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class TIndApp(Term):
    fn: Term
    arg: Ind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TRec(Term):
    bound: Term
    base: Term
    step: Term
    motive: Optional[Fam] = None  # required in dependent mode, absent in simple
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TTuple(Term):
    items: Tuple[Term, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TLet(Term):
    name: str
    value: Term
    body: Term
    span: Optional[Span] = _span_field()

    _binds_term = (("name", ("body",)),)


@dataclass(frozen=True)
class TLetMatch(Term):
    names: Tuple[str, ...]
    value: Term
    body: Term
    span: Optional[Span] = _span_field()

    _binds_term = (("names", ("body",)),)


@dataclass(frozen=True)
class TPack(Term):
    witness: Ind
    value: Term
    ann: Formula  # an exists formula
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TUnpack(Term):
    var: str
    body: Term
    span: Optional[Span] = _span_field()

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class TCoerce(Term):
    subject: Term
    fam: Fam  # {n/phi}
    proof: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TAxiom(Term):
    left: Ind
    right: Ind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TCallcc(Term):
    arg: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TThrow(Term):
    ann: Formula
    cont: Term
    arg: Term
    span: Optional[Span] = _span_field()


# ---------------------------------------------------------------------------
# Imperative expressions, headers, commands, sequences
# ---------------------------------------------------------------------------

class Expr(Node):
    __slots__ = ()


class Header(Node):
    __slots__ = ()


class Command(Node):
    __slots__ = ()


class Seq(Node):
    __slots__ = ()


@dataclass(frozen=True)
class EVar(Expr):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EStar(Expr):
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ENum(Expr):
    value: int
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EInst(Expr):
    fn: Expr
    arg: Ind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EContInst(Expr):
    fn: Expr
    fam: Fam  # {n/Output}
    arg: Ind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ECoerce(Expr):
    subject: Expr
    fam: Fam  # {n/Prop}
    proof: Expr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EAxiom(Expr):
    left: Ind
    right: Ind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EProc(Expr):
    header: Header
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class HBase(Header):
    params: Env  # gamma
    out: QEnv  # theta (simple env for the simple discipline)
    body: Seq


@dataclass(frozen=True)
class HForall(Header):
    var: str
    body: Header

    _binds_ind = (("var", ("body",)),)


@dataclass(frozen=True)
class CBlock(Command):
    body: Seq
    ann: QEnv
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CFor(Command):
    var: str  # loop counter ident
    idx: Optional[str]  # index binder over body and frame; None when simple
    bound: Expr
    body: Seq
    frame: Env
    span: Optional[Span] = _span_field()

    _binds_ind = (("idx", ("body", "frame")),)


@dataclass(frozen=True)
class CAssign(Command):
    name: str
    value: Expr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CInc(Command):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CDec(Command):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CCall(Command):
    fn: Expr
    args: Tuple[Expr, ...]
    outs: Tuple[str, ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CJump(Command):
    target: Expr
    args: Tuple[Expr, ...]
    ann: QEnv
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class CLabel(Command):
    name: str
    body: Seq
    ann: QEnv
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SEmpty(Seq):
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SCmd(Seq):
    cmd: Command
    rest: Seq
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SCst(Seq):
    name: str
    value: Expr
    rest: Seq
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SVar(Seq):
    name: str
    value: Expr
    rest: Seq
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SUnpack(Seq):
    var: str
    rest: Seq
    span: Optional[Span] = _span_field()

    _binds_ind = (("var", ("rest",)),)


@dataclass(frozen=True)
class SWitness(Seq):
    witness: Ind
    ann: QEnv
    rest: Seq
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SSubst(Seq):
    body: Seq
    fam: Fam  # {n/QEnv}
    proof: Expr
    span: Optional[Span] = _span_field()


# ---------------------------------------------------------------------------
# Source files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MainI(Node):
    body: Seq
    out: QEnv
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class MainF(Node):
    term: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class SourceFile(Node):
    discipline: str  # IS | ID | FS | FD
    csts: Tuple[Tuple[str, Any], ...]  # Expr in I files, Term in F files
    main: Optional[Any] = None
    notes: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Generic traversal machinery
# ---------------------------------------------------------------------------

_FIELD_CACHE: dict = {}


def node_fields(node: Node) -> Tuple[str, ...]:
    cls = type(node)
    cached = _FIELD_CACHE.get(cls)
    if cached is None:
        cached = tuple(f.name for f in fields(cls) if f.name != "span")
        _FIELD_CACHE[cls] = cached
    return cached


def _binder_spec(node: Node) -> Tuple[Tuple[str, Tuple[str, ...]], ...]:
    return getattr(type(node), "_binds_ind", ())


def _child_values(value: Any) -> Iterator[Any]:
    if isinstance(value, Node):
        yield value
    elif isinstance(value, tuple):
        for item in value:
            yield from _child_values(item)


def free_ind_vars(node: Any) -> frozenset:
    """Free individual variables of any syntax value (nodes or tuples)."""
    out: set = set()
    _free_ind(node, out, ())
    return frozenset(out)


def _free_ind(value: Any, acc: set, bound: Tuple[str, ...]) -> None:
    if isinstance(value, IVar):
        if value.name not in bound:
            acc.add(value.name)
        return
    if isinstance(value, Node):
        spec = _binder_spec(value)
        bound_fields = {}
        for binder_field, scoped in spec:
            binder = getattr(value, binder_field)
            if binder is not None:
                for name in scoped:
                    bound_fields.setdefault(name, []).append(binder)
        for fname in node_fields(value):
            extra = tuple(bound_fields.get(fname, ()))
            _free_ind(getattr(value, fname), acc, bound + extra)
        return
    if isinstance(value, tuple):
        for item in value:
            _free_ind(item, acc, bound)


def _rebuild(node: Node, **changes: Any) -> Node:
    if not changes:
        return node
    kwargs = {name: getattr(node, name) for name in node_fields(node)}
    if hasattr(node, "span"):
        kwargs["span"] = node.span
    kwargs.update(changes)
    return type(node)(**kwargs)


def subst_ind(value: Any, name: str, replacement: Ind) -> Any:
    """Capture-avoiding substitution of an individual for a variable.

    Works uniformly over every category admitting meta-application;
    binders that would capture free variables of the replacement are
    renamed first.
    """
    free_repl = free_ind_vars(replacement)
    return _subst(value, {name: replacement}, free_repl)


def _subst(value: Any, sub: dict, free_repl: frozenset) -> Any:
    if isinstance(value, IVar):
        return sub.get(value.name, value)
    if isinstance(value, tuple):
        return tuple(_subst(item, sub, free_repl) for item in value)
    if not isinstance(value, Node):
        return value
    spec = _binder_spec(value)
    if not spec:
        changes = {
            fname: _subst(getattr(value, fname), sub, free_repl)
            for fname in node_fields(value)
        }
        return _rebuild(value, **changes)
    # a binding node: drop shadowed substitutions, rename to avoid capture
    changes: dict = {}
    for binder_field, scoped in spec:
        binder = getattr(value, binder_field)
        if binder is None:
            # an absent binder (index-free loops) binds nothing
            for f in scoped:
                changes[f] = _subst(getattr(value, f), sub, free_repl)
            continue
        live = {k: v for k, v in sub.items() if k != binder}
        live = {
            k: v
            for k, v in live.items()
            if any(_occurs(getattr(value, f), k) for f in scoped)
        }
        if not live:
            continue
        if binder in free_repl:
            fresh = _fresh_name(binder, free_repl | free_ind_vars(value) | set(live))
            changes[binder_field] = fresh
            rename = {binder: IVar(fresh)}
            for f in scoped:
                changes[f] = _subst(getattr(value, f), rename, frozenset({fresh}))
        for f in scoped:
            base = changes.get(f, getattr(value, f))
            changes[f] = _subst(base, live, free_repl)
    handled = {f for bf, scoped in spec for f in scoped} | {bf for bf, _ in spec}
    for fname in node_fields(value):
        if fname in handled:
            changes.setdefault(fname, getattr(value, fname))
        else:
            changes[fname] = _subst(getattr(value, fname), sub, free_repl)
    return _rebuild(value, **changes)


def _occurs(value: Any, name: str) -> bool:
    return name in free_ind_vars(value)


def _fresh_name(base: str, avoid: frozenset | set) -> str:
    """A parser-representable name not in avoid (for capture renames)."""
    stem = base.split(EIGEN_MARK)[0] or "n"
    if stem not in avoid:
        return stem
    k = 2
    while f"{stem}_{k}" in avoid:
        k += 1
    return f"{stem}_{k}"


def _fresh_eigen(base: str, avoid: frozenset | set) -> str:
    stem = base.split(EIGEN_MARK)[0] or "n"
    k = 1
    while f"{stem}{EIGEN_MARK}{k}" in avoid:
        k += 1
    return f"{stem}{EIGEN_MARK}{k}"


def open_with_eigen(fam: Tuple[str, Any], avoid: frozenset) -> Tuple[str, Any]:
    """Open a one-binder node with a fresh eigenvariable.

    Deterministic given the avoid set; the returned name never collides
    with parser-produced identifiers.
    """
    binder, body = fam
    fresh = _fresh_eigen(binder, avoid | free_ind_vars(body))
    return fresh, subst_ind(body, binder, IVar(fresh))


class Freshener:
    """Per-run eigenvariable supply for the checkers."""

    def __init__(self) -> None:
        self._count = 0

    def fresh(self, base: str) -> str:
        self._count += 1
        stem = base.split(EIGEN_MARK)[0] or "n"
        return f"{stem}{EIGEN_MARK}{self._count}"

    def open(self, binder: str, body: Any) -> Tuple[str, Any]:
        name = self.fresh(binder)
        return name, subst_ind(body, binder, IVar(name))


# ---------------------------------------------------------------------------
# Alpha equivalence
# ---------------------------------------------------------------------------

def alpha_eq(a: Any, b: Any) -> bool:
    """Equality up to consistent renaming of bound variables (individual
    binders and term-level binders alike).

    All equality premises of the typing rules dispatch through this; no
    arithmetic normalization is ever performed.
    """
    return _alpha(a, b, ({}, {}), ({}, {}), 0)


def _term_binder_spec(node: Node) -> Tuple[Tuple[str, Tuple[str, ...]], ...]:
    return getattr(type(node), "_binds_term", ())


def _binder_names(value: Any) -> Tuple[str, ...]:
    return value if isinstance(value, tuple) else (value,)


def _alpha(a: Any, b: Any, la: tuple, lb: tuple, depth: int) -> bool:
    if isinstance(a, IVar) or isinstance(b, IVar):
        if not (isinstance(a, IVar) and isinstance(b, IVar)):
            return False
        ia, ib = la[0].get(a.name), lb[0].get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if isinstance(a, TVar) or isinstance(b, TVar):
        if not (isinstance(a, TVar) and isinstance(b, TVar)):
            return False
        ia, ib = la[1].get(a.name), lb[1].get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if isinstance(a, Node) or isinstance(b, Node):
        if type(a) is not type(b):
            return False
        ind_spec = _binder_spec(a)
        term_spec = _term_binder_spec(a)
        scoped_fields: set = set()
        la2, lb2 = la, lb
        for kind, spec in ((0, ind_spec), (1, term_spec)):
            for binder_field, scoped in spec:
                ba = getattr(a, binder_field)
                bb = getattr(b, binder_field)
                if (ba is None) != (bb is None):
                    return False
                if ba is None:
                    continue
                na, nb = _binder_names(ba), _binder_names(bb)
                if len(na) != len(nb):
                    return False
                if la2 is la:
                    la2 = (dict(la[0]), dict(la[1]))
                    lb2 = (dict(lb[0]), dict(lb[1]))
                for xa, xb in zip(na, nb):
                    la2[kind][xa] = depth
                    lb2[kind][xb] = depth
                    depth += 1
                scoped_fields.update(scoped)
        binder_fields = {bf for bf, _ in ind_spec} | {bf for bf, _ in term_spec}
        for fname in node_fields(a):
            if fname in binder_fields:
                continue
            ea, eb = getattr(a, fname), getattr(b, fname)
            scope_a, scope_b = (la2, lb2) if fname in scoped_fields else (la, lb)
            if not _alpha(ea, eb, scope_a, scope_b, depth):
                return False
        return True
    if isinstance(a, tuple) and isinstance(b, tuple):
        if len(a) != len(b):
            return False
        return all(_alpha(x, y, la, lb, depth) for x, y in zip(a, b))
    return a == b


def alpha_env(a: Env, b: Env) -> bool:
    """Environment equality: same idents in the same order, alpha types."""
    if len(a) != len(b):
        return False
    return all(xa == xb and alpha_eq(ta, tb) for (xa, ta), (xb, tb) in zip(a, b))
