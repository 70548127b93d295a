"""Kernel Expr -> NTerm by greedy, largest-first template matching."""

from __future__ import annotations

from ..kernel import (
    Abs, App, BoolTy, Const, Eq, Expr, Iota, Pair, Var, alpha_eq, infer_type, size,
)
from . import registry as reg
from .nterm import (
    NApp, NBig, NBind, NConst, NEq, NOp, NPair, NTerm, NTypeQ, NVar, free_nvars,
)

_BIG = {"prod", "iter-cat"}
_FORALL_SIZE = size(reg.forall_("x", reg.A_, reg.H("A", reg.BOOL)))
_EXISTS_SIZE = size(reg.exists_("x", reg.A_, reg.H("A", reg.BOOL)))


def resugar(e: Expr) -> NTerm:
    return _rs(e)


def _as_q(n: NTerm) -> NTerm:
    if isinstance(n, NOp) and n.name == "UnivSet":
        return NTypeQ(n.targs[0])
    return n


def _rs(e: Expr) -> NTerm:
    if isinstance(e, (Eq, App)):
        binder_size = _FORALL_SIZE if isinstance(e, Eq) else _EXISTS_SIZE
        tried_binder = False
        for d, row, sz, _ in reg.candidates(e):
            if not tried_binder and (sz < binder_size or (sz == binder_size and d.name != "F")):
                tried_binder = True
                b = _binder(e)
                if b is not None:
                    return b
            n = _try(d, e, row)
            if n is not None:
                return n
        if not tried_binder:
            b = _binder(e)
            if b is not None:
                return b
    elif isinstance(e, (Abs, Iota)):
        for d, row, _, _ in reg.candidates(e):
            n = _try(d, e, row)
            if n is not None:
                return n
    return _structural(e)


def _try(d, e, row):
    m = reg.match(d, e, (row,))
    if m is None:
        return None
    targs, args, ctx = m
    if d.name == "in" and isinstance(args[1], App):
        return None
    nargs = []
    for i, a in enumerate(args):
        na = _rs(a)
        if i in d.qslots:
            na = _as_q(na)
        nargs.append(na)
    return NOp(d.name, tuple(targs), tuple(nargs), tuple(_rs(c) for c in ctx))


def _is_forall(e):
    return (isinstance(e, Eq) and isinstance(e.lhs, Abs) and isinstance(e.rhs, Abs)
            and e.lhs.var_ty == e.rhs.var_ty and alpha_eq(e.lhs.body, reg.TRUE))


def _binder(e: Expr):
    if _is_forall(e):
        r = e.rhs
        return _restrict("forall", r.var, r.var_ty, _rs(r.body))
    if (isinstance(e, App) and alpha_eq(e.fun, reg.NOT_OP) and _is_forall(e.arg)):
        r = e.arg.rhs
        b = r.body
        if isinstance(b, App) and alpha_eq(b.fun, reg.NOT_OP):
            return _restrict("exists", r.var, r.var_ty, _rs(b.arg))
    return None


def _in_x(n, x, t):
    """If n is `x in Q` (or the application Q x) with x not free in Q,
    return Q."""
    if isinstance(n, NOp) and n.name == "in":
        q, arg = n.args[1], n.args[0]
    elif isinstance(n, NApp) and isinstance(n.fun, NOp) and n.fun.name in _QCONS:
        q, arg = n.fun, n.arg
    else:
        return None
    if arg == NVar(x, t) and (x, t) not in free_nvars(q):
        return _as_q(q)
    return None


_QCONS = ("FunQTy", "ProdQTy", "SetQTy")


def _restrict(kind, x, t, body):
    if kind == "forall" and isinstance(body, NOp) and body.name == "implies":
        q = _in_x(body.args[0], x, t)
        if q is not None:
            return NBind(kind, x, t, q, body.args[1])
    if kind in ("exists", "iota") and isinstance(body, NOp) and body.name == "and":
        q = _in_x(body.args[0], x, t)
        if q is not None:
            return NBind(kind, x, t, q, body.args[1])
    if kind == "lambda" and isinstance(body, NOp) and body.name == "ite":
        q = _in_x(body.args[0], x, t)
        els = body.args[2]
        if q is not None and _is_bot(els, body.targs[0]):
            inner = body.args[1]
            k = "setb" if isinstance(inner.ty, BoolTy) else "lambda"
            return NBind(k, x, t, q, inner)
    if kind == "lambda" and isinstance(body.ty, BoolTy):
        kind = "setb"
    return NBind(kind, x, t, None, body)


def _is_bot(n, t):
    if isinstance(t, BoolTy):
        return isinstance(n, NOp) and n.name == "F"
    return isinstance(n, NOp) and n.name == "bot"


def _structural(e: Expr) -> NTerm:
    if isinstance(e, Var):
        return NVar(e.name, e.vty)
    if isinstance(e, Const):
        return NConst(e.name, e.cty)
    if isinstance(e, Eq):
        return NEq(_rs(e.lhs), _rs(e.rhs))
    if isinstance(e, Pair):
        return NPair(_rs(e.fst), _rs(e.snd))
    if isinstance(e, App):
        f = e.fun
        if (isinstance(e.arg, Abs) and isinstance(f, App) and isinstance(f.fun, App)
                and isinstance(f.fun.fun, Const) and f.fun.fun.name in _BIG):
            lam = e.arg
            return NBig(_rs(f.fun.fun), lam.var, lam.var_ty, _rs(f.fun.arg), _rs(f.arg), _rs(lam.body))
        return NApp(_rs(e.fun), _rs(e.arg))
    if isinstance(e, Abs):
        return _restrict("lambda", e.var, e.var_ty, _rs(e.body))
    if isinstance(e, Iota):
        return _restrict("iota", e.var, e.var_ty, _rs(e.body))
    raise TypeError(f"not an expression: {e!r}")
