"""The built-in table of notational definitions.

Each definition carries a kernel template whose holes are variables
named ``?X`` and whose type parameters are base types named ``'a``.
Expansion instantiates the type parameters and substitutes the holes
simultaneously (capture-avoiding, so bound variables inside a template
never capture a hole filling).  Matching runs the other way and drives
resugaring and the evaluator's peephole recognisers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import ResolveError, TypeError
from ..kernel import (
    BOOL, Abs, App, BaseTy, BoolTy, Const, Eq, Expr, FunTy, Iota, Pair,
    ProdTy, SetTy, TypeExpr, Var, free_vars, infer_type, size,
    substitute_many,
)

# --------------------------------------------------------------------------
# type parameters and holes


def TV(name: str) -> BaseTy:
    return BaseTy("'" + name)


A_, B_, C_ = TV("a"), TV("b"), TV("c")


def is_tvar(t) -> bool:
    return isinstance(t, BaseTy) and t.name[:1] in ("'", "?")


def H(name: str, ty: TypeExpr) -> Var:
    return Var("?" + name, ty)


def subst_type(t: TypeExpr, s: Dict[str, TypeExpr]) -> TypeExpr:
    if isinstance(t, BaseTy):
        return s.get(t.name, t)
    if isinstance(t, FunTy):
        return FunTy(subst_type(t.dom, s), subst_type(t.cod, s))
    if isinstance(t, ProdTy):
        return ProdTy(subst_type(t.fst, s), subst_type(t.snd, s))
    return t


def ground(t: TypeExpr) -> bool:
    if isinstance(t, BaseTy):
        return not is_tvar(t)
    if isinstance(t, FunTy):
        return ground(t.dom) and ground(t.cod)
    if isinstance(t, ProdTy):
        return ground(t.fst) and ground(t.snd)
    return True


def unify(p: TypeExpr, t: TypeExpr, s: Dict[str, TypeExpr]) -> bool:
    """Two-sided first-order unification over type variables; extends s."""
    p = _walk(p, s)
    t = _walk(t, s)
    if is_tvar(p):
        if p == t:
            return True
        if _occurs(p.name, t, s):
            return False
        s[p.name] = t
        return True
    if is_tvar(t):
        return unify(t, p, s)
    if type(p) is not type(t):
        return False
    if isinstance(p, BaseTy):
        return p.name == t.name
    if isinstance(p, FunTy):
        return unify(p.dom, t.dom, s) and unify(p.cod, t.cod, s)
    if isinstance(p, ProdTy):
        return unify(p.fst, t.fst, s) and unify(p.snd, t.snd, s)
    return True


def _walk(t, s):
    while is_tvar(t) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name, t, s):
    t = _walk(t, s)
    if isinstance(t, BaseTy):
        return t.name == name
    if isinstance(t, FunTy):
        return _occurs(name, t.dom, s) or _occurs(name, t.cod, s)
    if isinstance(t, ProdTy):
        return _occurs(name, t.fst, s) or _occurs(name, t.snd, s)
    return False


def resolve(t: TypeExpr, s: Dict[str, TypeExpr]) -> TypeExpr:
    t = _walk(t, s)
    if isinstance(t, FunTy):
        return FunTy(resolve(t.dom, s), resolve(t.cod, s))
    if isinstance(t, ProdTy):
        return ProdTy(resolve(t.fst, s), resolve(t.snd, s))
    return t


def subst_expr_types(e: Expr, s: Dict[str, TypeExpr]) -> Expr:
    if isinstance(e, Var):
        return Var(e.name, subst_type(e.vty, s))
    if isinstance(e, Const):
        return Const(e.name, subst_type(e.cty, s))
    if isinstance(e, Eq):
        return Eq(subst_expr_types(e.lhs, s), subst_expr_types(e.rhs, s))
    if isinstance(e, App):
        return App(subst_expr_types(e.fun, s), subst_expr_types(e.arg, s))
    if isinstance(e, Pair):
        return Pair(subst_expr_types(e.fst, s), subst_expr_types(e.snd, s))
    return type(e)(e.var, subst_type(e.var_ty, s), subst_expr_types(e.body, s))


# --------------------------------------------------------------------------
# kernel builders for the tables


def _avoid(stem: str, *es: Expr) -> str:
    taken = set()
    for e in es:
        taken |= {n for (n, _) in free_vars(e)}
    if stem not in taken:
        return stem
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


_xo = Var("x", BOOL)
TRUE = Eq(Abs("x", BOOL, _xo), Abs("x", BOOL, _xo))
FALSE = Eq(Abs("x", BOOL, TRUE), Abs("x", BOOL, _xo))

_G = FunTy(BOOL, FunTy(BOOL, BOOL))
_g = Var("g", _G)
_yo = Var("y", BOOL)
AND_OP = Abs("x", BOOL, Abs("y", BOOL, Eq(
    Abs("g", _G, App(App(_g, TRUE), TRUE)),
    Abs("g", _G, App(App(_g, _xo), _yo)))))


def and_(a: Expr, b: Expr) -> Expr:
    return App(App(AND_OP, a), b)


IMP_OP = Abs("x", BOOL, Abs("y", BOOL, Eq(_xo, and_(_xo, _yo))))
NOT_OP = Abs("x", BOOL, Eq(_xo, FALSE))


def not_(a: Expr) -> Expr:
    return App(NOT_OP, a)


def imp(a: Expr, b: Expr) -> Expr:
    return App(App(IMP_OP, a), b)


OR_OP = Abs("x", BOOL, Abs("y", BOOL, not_(and_(not_(_xo), not_(_yo)))))


def or_(a: Expr, b: Expr) -> Expr:
    return App(App(OR_OP, a), b)


def forall_(x: str, t: TypeExpr, body: Expr) -> Expr:
    return Eq(Abs(x, t, TRUE), Abs(x, t, body))


def exists_(x: str, t: TypeExpr, body: Expr) -> Expr:
    return not_(forall_(x, t, not_(body)))


def isdef(a: Expr) -> Expr:
    return Eq(a, a)


def neq(a: Expr, b: Expr) -> Expr:
    return not_(Eq(a, b))


def bot(t: TypeExpr) -> Expr:
    if isinstance(t, BoolTy):
        return FALSE
    x = Var("x", t)
    return Iota("x", t, neq(x, x))


def ite(c: Expr, a: Expr, b: Expr) -> Expr:
    t = infer_type(a)
    if isinstance(t, BoolTy):
        return and_(imp(c, a), imp(not_(c), b))
    x = _avoid("x", c, a, b)
    X = Var(x, t)
    return Iota(x, t, and_(imp(c, Eq(X, a)), imp(not_(c), Eq(X, b))))


def member(a: Expr, s: Expr) -> Expr:
    return App(s, a)


def isdefin(a: Expr, q: Expr) -> Expr:
    return and_(isdef(a), member(a, q))


def univ(t: TypeExpr) -> Expr:
    return Abs("x", t, TRUE)


def emptyset(t: TypeExpr) -> Expr:
    return Abs("x", t, FALSE)


def lam_q(x: str, t: TypeExpr, q: Expr, body: Expr) -> Expr:
    bt = infer_type(body)
    return Abs(x, t, ite(member(Var(x, t), q), body, bot(bt)))


def forall_q(x: str, t: TypeExpr, q: Expr, body: Expr) -> Expr:
    return forall_(x, t, imp(member(Var(x, t), q), body))


def exists_q(x: str, t: TypeExpr, q: Expr, body: Expr) -> Expr:
    return exists_(x, t, and_(member(Var(x, t), q), body))


def iota_q(x: str, t: TypeExpr, q: Expr, body: Expr) -> Expr:
    return Iota(x, t, and_(member(Var(x, t), q), body))


def fst_op(a: TypeExpr, b: TypeExpr) -> Expr:
    p = Var("p", ProdTy(a, b))
    return Abs("p", ProdTy(a, b), Iota("x", a, exists_("y", b, Eq(p, Pair(Var("x", a), Var("y", b))))))


def snd_op(a: TypeExpr, b: TypeExpr) -> Expr:
    p = Var("p", ProdTy(a, b))
    return Abs("p", ProdTy(a, b), Iota("y", b, exists_("x", a, Eq(p, Pair(Var("x", a), Var("y", b))))))


def fst_(p: Expr) -> Expr:
    t = infer_type(p)
    return App(fst_op(t.fst, t.snd), p)


def snd_(p: Expr) -> Expr:
    t = infer_type(p)
    return App(snd_op(t.fst, t.snd), p)


def subseteq_op(a: TypeExpr) -> Expr:
    s, t, x = Var("s", SetTy(a)), Var("t", SetTy(a)), Var("x", a)
    return Abs("s", SetTy(a), Abs("t", SetTy(a), forall_("x", a, imp(member(x, s), member(x, t)))))


def funq_op(a: TypeExpr, b: TypeExpr) -> Expr:
    s, t = Var("s", SetTy(a)), Var("t", SetTy(b))
    f, x = Var("f", FunTy(a, b)), Var("x", a)
    fx = App(f, x)
    body = forall_("x", a, imp(isdef(fx), and_(member(x, s), member(fx, t))))
    return Abs("s", SetTy(a), Abs("t", SetTy(b), Abs("f", FunTy(a, b), body)))


def prodq_op(a: TypeExpr, b: TypeExpr) -> Expr:
    s, t = Var("s", SetTy(a)), Var("t", SetTy(b))
    p = Var("p", ProdTy(a, b))
    body = and_(member(fst_(p), s), member(snd_(p), t))
    return Abs("s", SetTy(a), Abs("t", SetTy(b), Abs("p", ProdTy(a, b), body)))


def funq(q: Expr, r: Expr) -> Expr:
    a, b = infer_type(q).dom, infer_type(r).dom
    return App(App(funq_op(a, b), q), r)


def prodq(q: Expr, r: Expr) -> Expr:
    a, b = infer_type(q).dom, infer_type(r).dom
    return App(App(prodq_op(a, b), q), r)


def setq(q: Expr) -> Expr:
    a = infer_type(q).dom
    s = _avoid("s", q)
    return Abs(s, SetTy(a), App(App(subseteq_op(a), Var(s, SetTy(a))), q))


def restrict_op(a: TypeExpr, b: TypeExpr) -> Expr:
    f, s, x = Var("f", FunTy(a, b)), Var("s", SetTy(a)), Var("x", a)
    return Abs("f", FunTy(a, b), Abs("s", SetTy(a), Abs("x", a, ite(member(x, s), App(f, x), bot(b)))))


def union_op(a: TypeExpr) -> Expr:
    s, t, x = Var("s", SetTy(a)), Var("t", SetTy(a)), Var("x", a)
    return Abs("s", SetTy(a), Abs("t", SetTy(a), Abs("x", a, or_(member(x, s), member(x, t)))))


def inter_op(a: TypeExpr) -> Expr:
    s, t, x = Var("s", SetTy(a)), Var("t", SetTy(a)), Var("x", a)
    return Abs("s", SetTy(a), Abs("t", SetTy(a), Abs("x", a, and_(member(x, s), member(x, t)))))


def compl_op(a: TypeExpr) -> Expr:
    s, x = Var("s", SetTy(a)), Var("x", a)
    return Abs("s", SetTy(a), Abs("x", a, not_(member(x, s))))


def setdiff_op(a: TypeExpr) -> Expr:
    s, t = Var("s", SetTy(a)), Var("t", SetTy(a))
    return Abs("s", SetTy(a), Abs("t", SetTy(a), App(App(inter_op(a), s), App(compl_op(a), t))))


def finset_op(n: int, a: TypeExpr) -> Expr:
    x = Var("x", a)
    body = None
    for i in range(1, n + 1):
        eq = Eq(x, Var(f"x{i}", a))
        body = eq if body is None else or_(body, eq)
    e = Abs("x", a, body)
    for i in range(n, 0, -1):
        e = Abs(f"x{i}", a, e)
    return e


def id_op(a: TypeExpr) -> Expr:
    return Abs("x", a, Var("x", a))


def dom_op(a: TypeExpr, b: TypeExpr) -> Expr:
    f, x = Var("f", FunTy(a, b)), Var("x", a)
    return Abs("f", FunTy(a, b), Abs("x", a, isdef(App(f, x))))


def ran_op(a: TypeExpr, b: TypeExpr) -> Expr:
    f, x, y = Var("f", FunTy(a, b)), Var("x", a), Var("y", b)
    return Abs("f", FunTy(a, b), Abs("y", b, exists_("x", a, Eq(App(f, x), y))))


def total(f: Expr) -> Expr:
    a = infer_type(f).dom
    x = _avoid("x", f)
    return forall_(x, a, isdef(App(f, Var(x, a))))


def emptyfun(a: TypeExpr, b: TypeExpr) -> Expr:
    return Abs("x", a, bot(b))


def qeq(a: Expr, b: Expr) -> Expr:
    return imp(or_(isdef(a), isdef(b)), Eq(a, b))


def set_op(a: TypeExpr, b: TypeExpr, c: TypeExpr) -> Expr:
    ft = FunTy(ProdTy(a, b), c)
    pt = ProdTy(SetTy(a), SetTy(b))
    f, p, z = Var("f", ft), Var("p", pt), Var("z", c)
    x, y = Var("x", a), Var("y", b)
    body = exists_q("x", a, fst_(p), exists_q("y", b, snd_(p), Eq(z, App(f, Pair(x, y)))))
    return Abs("f", ft, Abs("p", pt, Abs("z", c, body)))


def comp_op(a: TypeExpr, b: TypeExpr, c: TypeExpr) -> Expr:
    pt = ProdTy(FunTy(a, b), FunTy(b, c))
    p, x = Var("p", pt), Var("x", a)
    return Abs("p", pt, Abs("x", a, App(snd_(p), App(fst_(p), x))))


def app_op(a: TypeExpr, b: TypeExpr) -> Expr:
    pt = ProdTy(FunTy(a, b), a)
    p = Var("p", pt)
    return Abs("p", pt, App(fst_(p), snd_(p)))


def _F2(f, x, y):
    return App(f, Pair(x, y))


def _forall_q_many(vs, body):
    for (x, t, q) in reversed(vs):
        body = forall_q(x, t, q, body)
    return body


def _conj(cs):
    out = cs[0]
    for c in cs[1:]:
        out = and_(out, c)
    return out


def monoid(m: Expr, f: Expr, e: Expr) -> Expr:
    a = infer_type(e)
    x, y, z = Var("x", a), Var("y", a), Var("z", a)
    return _conj([
        isdef(m),
        neq(m, emptyset(a)),
        isdefin(f, funq(prodq(m, m), m)),
        isdefin(e, m),
        _forall_q_many([("x", a, m), ("y", a, m), ("z", a, m)],
                       Eq(_F2(f, x, _F2(f, y, z)), _F2(f, _F2(f, x, y), z))),
        forall_q("x", a, m, and_(Eq(_F2(f, e, x), _F2(f, x, e)), Eq(_F2(f, x, e), x))),
    ])


def com_monoid(m: Expr, f: Expr, e: Expr) -> Expr:
    a = infer_type(e)
    x, y = Var("x", a), Var("y", a)
    return and_(monoid(m, f, e),
                _forall_q_many([("x", a, m), ("y", a, m)], Eq(_F2(f, x, y), _F2(f, y, x))))


def mon_action(m: Expr, s: Expr, f: Expr, e: Expr, g: Expr) -> Expr:
    a = infer_type(e)
    b = infer_type(s).dom
    x, y, sv = Var("x", a), Var("y", a), Var("s", b)
    return _conj([
        monoid(m, f, e),
        isdef(s),
        neq(s, emptyset(b)),
        isdefin(g, funq(prodq(m, s), s)),
        _forall_q_many([("x", a, m), ("y", a, m), ("s", b, s)],
                       Eq(_F2(g, x, _F2(g, y, sv)), _F2(g, _F2(f, x, y), sv))),
        forall_q("s", b, s, Eq(_F2(g, e, sv), sv)),
    ])


def mon_homom(m1, m2, f1, e1, f2, e2, h) -> Expr:
    a, b = infer_type(e1), infer_type(e2)
    x, y = Var("x", a), Var("y", a)
    return _conj([
        monoid(m1, f1, e1),
        monoid(m2, f2, e2),
        isdefin(h, funq(m1, m2)),
        _forall_q_many([("x", a, m1), ("y", a, m1)],
                       Eq(App(h, _F2(f1, x, y)), _F2(f2, App(h, x), App(h, y)))),
        Eq(App(h, e1), e2),
    ])


def total_on(f: Expr, q: Expr, r: Expr) -> Expr:
    a = infer_type(f).dom
    x = _avoid("x", f, q, r)
    return forall_q(x, a, q, isdefin(App(f, Var(x, a)), r))


# sequences: the natural-number system enters through context holes


def seq_q(a, b, N):
    return funq(N, univ(b))


def finseq_q(a, b, N, le, pre):
    s, n, m = Var("s", FunTy(a, b)), Var("n", a), Var("m", a)
    body = exists_q("n", a, N, forall_q("m", a, N,
                                        Eq(isdef(App(s, m)), App(App(le, m), App(pre, n)))))
    return lam_q("s", FunTy(a, b), seq_q(a, b, N), body)


def stream_q(a, b, N):
    s = Var("s", FunTy(a, b))
    return lam_q("s", FunTy(a, b), seq_q(a, b, N), total(s))


def cons_op(a, b, N, zero, pre):
    x, s, n = Var("x", b), Var("s", FunTy(a, b)), Var("n", a)
    inner = lam_q("n", a, N, ite(Eq(n, zero), x, App(s, App(pre, n))))
    return Abs("x", b, lam_q("s", FunTy(a, b), seq_q(a, b, N), inner))


def length_op(a, b, N, zero, suc, pre, le, plus):
    st = FunTy(a, b)
    fs = finseq_q(a, b, N, le, pre)
    ft = FunTy(st, a)
    f, x, s = Var("f", ft), Var("x", b), Var("s", st)
    cons = cons_op(a, b, N, zero, pre)
    nil = emptyfun(a, b)
    body = and_(Eq(App(f, nil), zero),
                forall_("x", b, forall_q("s", st, fs,
                                         Eq(App(f, App(App(cons, x), s)),
                                            App(App(plus, App(f, s)), App(suc, zero))))))
    return iota_q("f", ft, funq(fs, N), body)


def append_op(a, b, N, zero, pre, le):
    st = FunTy(a, b)
    fs = finseq_q(a, b, N, le, pre)
    ft = FunTy(st, FunTy(st, st))
    f, x, s, t = Var("f", ft), Var("x", b), Var("s", st), Var("t", st)
    cons = cons_op(a, b, N, zero, pre)
    nil = emptyfun(a, b)
    c1 = forall_q("t", st, fs, Eq(App(App(f, nil), t), t))
    c2 = forall_("x", b, forall_q("s", st, fs, forall_q("t", st, fs,
        Eq(App(App(f, App(App(cons, x), s)), t), App(App(cons, x), App(App(f, s), t))))))
    return iota_q("f", ft, funq(fs, funq(fs, fs)), and_(c1, c2))


# --------------------------------------------------------------------------
# the registry


@dataclass(eq=False)
class NotationDef:
    name: str
    symbol: str
    kind: str  # pseudoconstant | parametric-pseudoconstant | abbreviation | binder | infix | mixfix
    type_params: Tuple[str, ...]
    expr_params: Tuple[Tuple[str, TypeExpr], ...]
    template: Expr
    result: TypeExpr
    rows: Tuple[Tuple[Dict[str, TypeExpr], Tuple[str, ...], Expr], ...] = ()
    ctx_params: Tuple[Tuple[str, TypeExpr, str], ...] = ()
    qslots: Tuple[int, ...] = ()
    syntax: str = "call"
    table: str = ""
    matchable: bool = True
    size: int = 0

    @property
    def hole_names(self):
        return [h for h, _ in self.expr_params]


def _mk(name, symbol, kind, tparams, holes, builder, *, ctx=(), qslots=(),
        syntax="call", table="", rows=None, matchable=True, nonbool=()):
    hvars = [H(h, t) for h, t in holes]
    cvars = [H(c, t) for c, t, _ in ctx]
    if rows is None:
        tpl = builder(*hvars, *cvars) if (holes or ctx) else builder()
        rows = (({}, tuple(nonbool), tpl),)
    tpl = rows[-1][2]
    return NotationDef(
        name=name, symbol=symbol, kind=kind, type_params=tuple(tparams),
        expr_params=tuple((h, t) for h, t in holes), template=tpl,
        result=infer_type(tpl), rows=tuple(rows), ctx_params=tuple(ctx),
        qslots=tuple(qslots), syntax=syntax, table=table, matchable=matchable,
        size=size(tpl))


def _pc(name, symbol, tparams, fn, table, syntax="pc", nonbool=(), matchable=True):
    tvs = [TV(t) for t in tparams]
    return _mk(name, symbol, "parametric-pseudoconstant" if tparams else "pseudoconstant",
               tparams, (), lambda: fn(*tvs), syntax=syntax, table=table,
               nonbool=nonbool, matchable=matchable)


def _build() -> List[NotationDef]:
    a, b, c = A_, B_, C_
    o = BOOL
    R: List[NotationDef] = []
    add = R.append

    # Table 1
    add(_pc("T", "T", (), lambda: TRUE, "1", syntax="lit"))
    add(_pc("F", "F", (), lambda: FALSE, "1", syntax="lit"))
    add(_pc("and-op", "∧", (), lambda: AND_OP, "1"))
    add(_pc("implies-op", "⇒", (), lambda: IMP_OP, "1"))
    add(_pc("not-op", "¬", (), lambda: NOT_OP, "1"))
    add(_pc("or-op", "∨", (), lambda: OR_OP, "1"))
    add(_mk("and", "∧", "infix", (), (("A", o), ("B", o)), and_, syntax="and", table="1"))
    add(_mk("implies", "⇒", "infix", (), (("A", o), ("B", o)), imp, syntax="implies", table="1"))
    add(_mk("or", "∨", "infix", (), (("A", o), ("B", o)), or_, syntax="or", table="1"))
    add(_mk("not", "¬", "mixfix", (), (("A", o),), not_, syntax="not", table="1"))

    # Table 2
    add(_mk("infix", "c", "infix", ("a", "b", "c"), (("c", FunTy(ProdTy(a, a), b)), ("A", a), ("B", a)),
            lambda cc, x, y: App(cc, Pair(x, y)), table="2", matchable=False))
    add(_mk("iff", "⇔", "infix", (), (("A", o), ("B", o)), Eq, syntax="iff", table="2", matchable=False))
    add(_mk("neq", "≠", "infix", ("a",), (("A", a), ("B", a)), neq, syntax="rel:!=", table="2"))
    le = ("le", FunTy(a, FunTy(a, o)), "<=")
    add(_mk("lt", "<", "infix", ("a",), (("A", a), ("B", a)),
            lambda x, y, l: and_(App(App(l, x), y), neq(x, y)), ctx=(le,), syntax="rel:<", table="2"))
    add(_mk("gt", ">", "infix", ("a",), (("A", a), ("B", a)),
            lambda x, y, l: and_(App(App(l, y), x), neq(y, x)), ctx=(le,), syntax="rel:>", table="2",
            matchable=False))
    add(_mk("ge", "≥", "infix", ("a",), (("A", a), ("B", a)),
            lambda x, y, l: App(App(l, y), x), ctx=(le,), syntax="rel:>=", table="2",
            matchable=False))
    add(_mk("chain-eq", "=", "mixfix", ("a",), (("A", a), ("B", a), ("C", a)),
            lambda x, y, z: and_(Eq(x, y), Eq(y, z)), table="2", matchable=False))

    # Table 3 (binders are expanded by dedicated code; the templates here
    # show the shape with the body as a hole over the bound variable)
    xa = Var("x", a)
    add(_mk("forall", "∀", "binder", ("a",), (("A", o),),
            lambda body: forall_("x", a, body), table="3", matchable=False))
    add(_mk("exists", "∃", "binder", ("a",), (("A", o),),
            lambda body: exists_("x", a, body), table="3", matchable=False))

    # Table 4
    add(_mk("bot", "⊥", "parametric-pseudoconstant", ("a",), (), None, syntax="pc", table="4",
            rows=(({"'a": o}, (), FALSE), ({}, ("a",), bot(a)))))
    add(_pc("emptyfun", "∅f", ("a", "b"), emptyfun, "4", nonbool=("b",)))
    add(_mk("isdef", "↓", "mixfix", ("a",), (("A", a),), isdef, syntax="post:!", table="4"))
    add(_mk("isundef", "↑", "mixfix", ("a",), (("A", a),), lambda x: not_(isdef(x)), syntax="post:^", table="4"))
    add(_mk("qeq", "≃", "infix", ("a",), (("A", a), ("B", a)), qeq, syntax="rel:~=", table="4"))
    add(_mk("nqeq", "≄", "infix", ("a",), (("A", a), ("B", a)), lambda x, y: not_(qeq(x, y)),
            syntax="rel:!~=", table="4"))
    add(_mk("ite", "if", "mixfix", ("a",), (("C", o), ("A", a), ("B", a)), None, syntax="if", table="4",
            rows=(({"'a": o}, (), ite(H("C", o), H("A", o), H("B", o))),
                  ({}, ("a",), ite(H("C", o), H("A", a), H("B", a))))))

    # Table 5
    add(_mk("in", "∈", "infix", ("a",), (("A", a), ("B", SetTy(a))), member, syntax="rel:in", table="5"))
    add(_mk("notin", "∉", "infix", ("a",), (("A", a), ("B", SetTy(a))), lambda x, s: not_(member(x, s)),
            syntax="rel:notin", table="5"))
    add(_mk("setb", "{|}", "binder", ("a",), (("A", o),), lambda body: Abs("x", a, body),
            table="5", matchable=False))
    add(_pc("emptyset", "∅", ("a",), emptyset, "5"))
    add(_pc("UnivSet", "U", ("a",), univ, "5"))
    for n in range(1, 7):
        add(_pc(f"FinSet{n}", f"FinSet{n}", ("a",), lambda t, n=n: finset_op(n, t), "5"))
        holes = tuple((f"A{i}", a) for i in range(1, n + 1))
        add(_mk(f"set{n}", "{...}", "mixfix", ("a",), holes,
                lambda *xs, n=n: _apply(finset_op(n, infer_type(xs[0])), xs),
                syntax="setenum", table="5"))
    add(_pc("subseteq-op", "⊆", ("a",), subseteq_op, "5"))
    add(_pc("union-op", "∪", ("a",), union_op, "5"))
    add(_pc("inter-op", "∩", ("a",), inter_op, "5"))
    add(_pc("compl-op", "ᶜ", ("a",), compl_op, "5"))
    add(_pc("setdiff-op", "∖", ("a",), setdiff_op, "5"))
    S2 = (("A", SetTy(a)), ("B", SetTy(a)))
    add(_mk("subseteq", "⊆", "infix", ("a",), S2, lambda s, t: _apply(subseteq_op(infer_type(s).dom), (s, t)),
            syntax="rel:subseteq", table="5"))
    add(_mk("union", "∪", "infix", ("a",), S2, lambda s, t: _apply(union_op(infer_type(s).dom), (s, t)),
            syntax="infix:union", table="5"))
    add(_mk("inter", "∩", "infix", ("a",), S2, lambda s, t: _apply(inter_op(infer_type(s).dom), (s, t)),
            syntax="infix:inter", table="5"))
    add(_mk("setdiff", "∖", "infix", ("a",), S2, lambda s, t: _apply(setdiff_op(infer_type(s).dom), (s, t)),
            syntax="infix:diff", table="5"))
    add(_mk("compl", "ᶜ", "mixfix", ("a",), (("A", SetTy(a)),),
            lambda s: App(compl_op(infer_type(s).dom), s), table="5"))

    # Table 6
    add(_pc("fst", "fst", ("a", "b"), fst_op, "6"))
    add(_pc("snd", "snd", ("a", "b"), snd_op, "6"))

    # Table 7
    add(_pc("id", "id", ("a",), id_op, "7"))
    add(_pc("dom", "dom", ("a", "b"), dom_op, "7"))
    add(_pc("ran", "ran", ("a", "b"), ran_op, "7"))
    add(_mk("TOTAL", "TOTAL", "abbreviation", ("a", "b"), (("F", FunTy(a, b)),), total, table="7"))
    add(_pc("restrict-op", "|", ("a", "b"), restrict_op, "7"))
    add(_mk("restrict", "|", "infix", ("a", "b"), (("F", FunTy(a, b)), ("A", SetTy(a))),
            lambda f, s: _apply(restrict_op(infer_type(f).dom, infer_type(f).cod), (f, s)),
            qslots=(1,), syntax="restrict", table="7"))

    # Table 9
    for nm, sym in (("lambda-q", "Λ"), ("forall-q", "∀"), ("exists-q", "∃"), ("iota-q", "I")):
        add(_mk(nm, sym, "binder", ("a",), (("Q", SetTy(a)), ("B", o)),
                {"lambda-q": lambda q, body: lam_q("x", a, q, body),
                 "forall-q": lambda q, body: forall_q("x", a, q, body),
                 "exists-q": lambda q, body: exists_q("x", a, q, body),
                 "iota-q": lambda q, body: iota_q("x", a, q, body)}[nm],
                table="9", matchable=False))
    add(_mk("isdefin", "↓", "infix", ("a",), (("A", a), ("Q", SetTy(a))), isdefin, qslots=(1,),
            syntax="rel:~in", table="9"))
    add(_mk("isundefin", "↑", "infix", ("a",), (("A", a), ("Q", SetTy(a))), lambda x, q: not_(isdefin(x, q)),
            qslots=(1,), syntax="rel:~notin", table="9"))
    add(_pc("FunQTy-op", "FunQTy", ("a", "b"), funq_op, "9", nonbool=("b",)))
    add(_pc("ProdQTy-op", "ProdQTy", ("a", "b"), prodq_op, "9"))
    add(_mk("SetQTy", "SetQTy", "mixfix", ("a",), (("Q", SetTy(a)),), setq, qslots=(0,), syntax="qset", table="9"))
    add(_mk("FunQTy", "FunQTy", "mixfix", ("a", "b"), (("Q", SetTy(a)), ("R", SetTy(b))), funq,
            qslots=(0, 1), syntax="qfun", table="9", nonbool=("b",),
            rows=(({}, ("b",), funq(H("Q", SetTy(a)), H("R", SetTy(b)))),)))
    add(_mk("ProdQTy", "ProdQTy", "mixfix", ("a", "b"), (("Q", SetTy(a)), ("R", SetTy(b))), prodq,
            qslots=(0, 1), syntax="qprod", table="9"))
    add(_mk("TOTAL-ON", "TOTAL-ON", "abbreviation", ("a", "b"),
            (("F", FunTy(a, b)), ("Q", SetTy(a)), ("R", SetTy(b))), total_on, qslots=(1, 2), table="9"))

    # Table 8
    N = ("N", SetTy(a), "N")
    zero = ("zero", a, "0_R")
    suc = ("suc", FunTy(a, a), "suc")
    pre = ("pre", FunTy(a, a), "pre")
    le8 = ("le", FunTy(a, FunTy(a, o)), "<=")
    plus = ("plus", FunTy(a, FunTy(a, a)), "+")
    add(_mk("Seq", "Seq", "parametric-pseudoconstant", ("a", "b"), (), lambda n: seq_q(a, b, n),
            ctx=(N,), syntax="pc", table="8"))
    add(_mk("Stream", "Stream", "parametric-pseudoconstant", ("a", "b"), (), lambda n: stream_q(a, b, n),
            ctx=(N,), syntax="pc", table="8"))
    add(_mk("List", "List", "parametric-pseudoconstant", ("a", "b"), (),
            lambda n, l, p: finseq_q(a, b, n, l, p), ctx=(N, le8, pre), syntax="pc", table="8"))
    add(_mk("cons", "cons", "parametric-pseudoconstant", ("a", "b"), (),
            lambda n, z, p: cons_op(a, b, n, z, p), ctx=(N, zero, pre), syntax="pc", table="8"))
    add(_pc("nil", "nil", ("a", "b"), emptyfun, "8", nonbool=("b",), matchable=False))
    add(_mk("length", "len", "parametric-pseudoconstant", ("a", "b"), (),
            lambda n, z, s, p, l, pl: length_op(a, b, n, z, s, p, l, pl),
            ctx=(N, zero, suc, pre, le8, plus), syntax="pc", table="8"))
    add(_mk("append", "append", "parametric-pseudoconstant", ("a", "b"), (),
            lambda n, z, p, l: append_op(a, b, n, z, p, l), ctx=(N, zero, pre, le8), syntax="pc", table="8"))

    # Table 10
    add(_pc("set-op", "set-op", ("a", "b", "c"), set_op, "10"))
    add(_pc("comp-op", "∘", ("a", "b", "c"), comp_op, "10"))
    add(_pc("app-op", "app", ("a", "b"), app_op, "10"))
    add(_mk("comp", "∘", "infix", ("a", "b", "c"), (("F", FunTy(a, b)), ("G", FunTy(b, c))),
            lambda f, g: App(comp_op(infer_type(f).dom, infer_type(f).cod, infer_type(g).cod), Pair(f, g)),
            syntax="infix:∘", table="10"))

    # Table 11
    M, S = SetTy(a), SetTy(b)
    Fa, Gab = FunTy(ProdTy(a, a), a), FunTy(ProdTy(a, b), b)
    add(_mk("MONOID", "MONOID", "abbreviation", ("a",), (("M", M), ("F", Fa), ("E", a)), monoid,
            qslots=(0,), table="11"))
    add(_mk("COM-MONOID", "COM-MONOID", "abbreviation", ("a",), (("M", M), ("F", Fa), ("E", a)),
            com_monoid, qslots=(0,), table="11"))
    add(_mk("MON-ACTION", "MON-ACTION", "abbreviation", ("a", "b"),
            (("M", M), ("S", S), ("F", Fa), ("E", a), ("G", Gab)), mon_action, qslots=(0, 1), table="11"))
    add(_mk("MON-HOMOM", "MON-HOMOM", "abbreviation", ("a", "b"),
            (("M1", M), ("M2", S), ("F1", Fa), ("E1", a), ("F2", FunTy(ProdTy(b, b), b)), ("E2", b),
             ("H", FunTy(a, b))), mon_homom, qslots=(0, 1), table="11"))

    # Table 12 and the string notation: the iterated operators apply a
    # development constant to a lambda; expanded by dedicated code.
    for nm, const in (("PROD", "prod"), ("ITERCAT", "iter-cat")):
        add(_mk(nm, const, "binder", ("a", "b"), (("M", a), ("N", a), ("A", b)),
                lambda m, n, body, k: App(App(App(k, m), n), Abs("i", infer_type(m), body)),
                ctx=((const, FunTy(a, FunTy(a, FunTy(FunTy(a, b), b))), const),),
                table="12", matchable=False))
    return R


def _apply(f: Expr, args: Sequence[Expr]) -> Expr:
    for x in args:
        f = App(f, x)
    return f


_REGISTRY: Optional[List[NotationDef]] = None
_BY_NAME: Dict[str, NotationDef] = {}

ALIASES = {
    "¬": "not", "∧": "and", "⇒": "implies", "∨": "or", "⇔": "iff", "≠": "neq",
    "∀": "forall", "∃": "exists", "⊥": "bot", "↓": "isdef", "↑": "isundef",
    "≃": "qeq", "≄": "nqeq", "∈": "in", "∉": "notin", "∅": "emptyset",
    "⊆": "subseteq", "∪": "union", "∩": "inter", "∘": "comp", "<": "lt",
    ">": "gt", "≥": "ge", "MON-HOM": "MON-HOMOM", "prod": "PROD",
    "iter-cat": "ITERCAT", "Λ": "lambda-q", "I": "iota-q", "Lists": "List",
    "FinSeq": "List", "Seqs": "Seq", "Streams": "Stream", "len": "length",
}


def builtin_registry() -> List[NotationDef]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build()
        for d in _REGISTRY:
            _BY_NAME[d.name] = d
    return _REGISTRY


def lookup(name: str, targs: Optional[Sequence[TypeExpr]] = None):
    """Find a definition by registry name or paper symbol.  With targs the
    instantiated template is returned instead of the definition."""
    builtin_registry()
    d = _BY_NAME.get(name) or _BY_NAME.get(ALIASES.get(name, ""))
    if d is None:
        raise ResolveError(f"no notational definition named {name!r}")
    if targs is None:
        return d
    return template_at(d, tuple(targs))


def has(name: str) -> bool:
    builtin_registry()
    return name in _BY_NAME


# --------------------------------------------------------------------------
# expansion


@lru_cache(maxsize=4096)
def template_at(d: NotationDef, targs: Tuple[TypeExpr, ...]) -> Expr:
    s = {"'" + p: t for p, t in zip(d.type_params, targs)}
    for fixed, nonbool, tpl in d.rows:
        if any(s.get(k) != v for k, v in fixed.items()):
            continue
        if any(isinstance(s.get("'" + p), BoolTy) for p in nonbool):
            continue
        return subst_expr_types(tpl, s)
    raise TypeError(f"{d.name} is not defined at {[str(t) for t in targs]}")


def expand(d: NotationDef, targs: Sequence[TypeExpr], args: Sequence[Expr],
           ctx: Sequence[Expr] = ()) -> Expr:
    tpl = template_at(d, tuple(targs))
    s = {"'" + p: t for p, t in zip(d.type_params, targs)}
    m = {}
    for (h, pt), x in zip(d.expr_params, args):
        m[("?" + h, subst_type(pt, s))] = x
    for (h, pt, _), x in zip(d.ctx_params, ctx):
        m[("?" + h, subst_type(pt, s))] = x
    if len(m) != len(d.expr_params) + len(d.ctx_params):
        raise TypeError(f"{d.name}: wrong number of arguments")
    return substitute_many(tpl, m)


def infer_targs(d: NotationDef, arg_types: Sequence[TypeExpr],
                expected: Optional[TypeExpr] = None) -> Optional[Tuple[TypeExpr, ...]]:
    s: Dict[str, TypeExpr] = {}
    for (h, pt), t in zip(d.expr_params, arg_types):
        if not unify(pt, t, s):
            return None
    if expected is not None and not unify(d.result, expected, s):
        return None
    out = []
    for p in d.type_params:
        t = resolve(TV(p), s)
        if not ground(t):
            return None
        out.append(t)
    return tuple(out)


# --------------------------------------------------------------------------
# matching


class _Match:
    __slots__ = ("tys", "holes")

    def __init__(self):
        self.tys: Dict[str, TypeExpr] = {}
        self.holes: Dict[str, Expr] = {}


def _tmatch(p: TypeExpr, t: TypeExpr, s: Dict[str, TypeExpr]) -> bool:
    if isinstance(p, BaseTy) and p.name.startswith("'"):
        got = s.get(p.name)
        if got is None:
            s[p.name] = t
            return True
        return got == t
    if type(p) is not type(t):
        return False
    if isinstance(p, BaseTy):
        return p.name == t.name
    if isinstance(p, FunTy):
        return _tmatch(p.dom, t.dom, s) and _tmatch(p.cod, t.cod, s)
    if isinstance(p, ProdTy):
        return _tmatch(p.fst, t.fst, s) and _tmatch(p.snd, t.snd, s)
    return True


def _match(p, e, m: _Match, ep, ee, d, ctx_names) -> bool:
    tp = type(p)
    if tp is Var and p.name.startswith("?"):
        if not _tmatch(p.vty, infer_type(e), m.tys):
            return False
        if ee and any(k in ee for k in free_vars(e)):
            return False
        need = ctx_names.get(p.name)
        if need is not None and not (isinstance(e, Const) and e.name == need):
            return False
        prev = m.holes.get(p.name)
        if prev is None:
            m.holes[p.name] = e
            return True
        from ..kernel import alpha_eq
        return alpha_eq(prev, e)
    if tp is not type(e):
        return False
    if tp is Var:
        lp, le_ = ep.get((p.name, p.vty)), ee.get((e.name, e.vty))
        if lp is None or lp != le_:
            return False
        return _tmatch(p.vty, e.vty, m.tys)
    if tp is Eq:
        return _match(p.lhs, e.lhs, m, ep, ee, d, ctx_names) and _match(p.rhs, e.rhs, m, ep, ee, d, ctx_names)
    if tp is App:
        return _match(p.fun, e.fun, m, ep, ee, d, ctx_names) and _match(p.arg, e.arg, m, ep, ee, d, ctx_names)
    if tp is Pair:
        return _match(p.fst, e.fst, m, ep, ee, d, ctx_names) and _match(p.snd, e.snd, m, ep, ee, d, ctx_names)
    if tp is Const:
        return p == e
    if not _tmatch(p.var_ty, e.var_ty, m.tys):
        return False
    ep2 = dict(ep)
    ep2[(p.var, p.var_ty)] = d
    ee2 = dict(ee)
    ee2[(e.var, e.var_ty)] = d
    return _match(p.body, e.body, m, ep2, ee2, d + 1, ctx_names)


def match(d: NotationDef, e: Expr, rows=None):
    """Match e against d's template rows.  Returns (targs, args, ctx) or None."""
    ctx_names = {"?" + h: cname for h, _, cname in d.ctx_params}
    for k, (fixed, nonbool, tpl) in enumerate(d.rows):
        if rows is not None and k not in rows:
            continue
        m = _Match()
        if not _match(tpl, e, m, {}, {}, 0, ctx_names):
            continue
        tys = dict(m.tys)
        tys.update(fixed)
        targs = []
        ok = True
        for p in d.type_params:
            t = tys.get("'" + p)
            if t is None:
                ok = False
                break
            targs.append(t)
        if not ok or any(isinstance(tys.get("'" + p), BoolTy) for p in nonbool):
            continue
        args = [m.holes["?" + h] for h, _ in d.expr_params]
        ctx = [m.holes["?" + h] for h, _, _ in d.ctx_params]
        return tuple(targs), args, ctx
    return None


def spine(e: Expr, depth: int = 3) -> Tuple[str, ...]:
    out = []
    while len(out) < depth:
        if isinstance(e, Var) and e.name.startswith("?"):
            break
        out.append(type(e).__name__)
        if isinstance(e, App):
            e = e.fun
        elif isinstance(e, Eq):
            e = e.lhs
        elif isinstance(e, (Abs, Iota)):
            e = e.body
        else:
            break
    return tuple(out)


_INDEX: Optional[Dict[Tuple[str, ...], list]] = None


def candidates(e: Expr) -> list:
    """(definition, row, row size) triples whose template spine is
    compatible with e, largest template first."""
    global _INDEX
    if _INDEX is None:
        _INDEX = {}
        for i, d in enumerate(builtin_registry()):
            if not d.matchable:
                continue
            for k, (fixed, _, tpl) in enumerate(d.rows):
                if d.name == "bot" and fixed:
                    continue  # the same term as F
                _INDEX.setdefault(spine(tpl), []).append((d, k, size(tpl), i))
    sp = spine(e)
    out = []
    for k in range(1, len(sp) + 1):
        out.extend(_INDEX.get(sp[:k], ()))
    out.sort(key=lambda c: (-c[2], c[3]))
    return out
