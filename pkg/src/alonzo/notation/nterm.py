"""Elaborated surface terms.

An NTerm is a fully typed term that still remembers which notation was
used: registry operators, binders with quasitype domains, types sitting
in quasitype positions.  ``desugar`` turns one into a kernel Expr; the
resugarer builds one back from a kernel Expr.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from ..errors import TypeError
from ..kernel import (
    BOOL, Abs, App, BoolTy, Const, Eq, Expr, FunTy, Iota, Pair, ProdTy,
    SetTy, TypeExpr, Var, fresh_name, free_vars, infer_type, substitute,
)
from . import registry as reg


class NTerm:
    __slots__ = ()


@dataclass(frozen=True)
class NVar(NTerm):
    name: str
    ty: TypeExpr


@dataclass(frozen=True)
class NConst(NTerm):
    name: str
    ty: TypeExpr


@dataclass(frozen=True)
class NEq(NTerm):
    lhs: NTerm
    rhs: NTerm

    @property
    def ty(self):
        return BOOL


@dataclass(frozen=True)
class NApp(NTerm):
    fun: NTerm
    arg: NTerm

    @property
    def ty(self):
        return self.fun.ty.cod


@dataclass(frozen=True)
class NPair(NTerm):
    fst: NTerm
    snd: NTerm

    @property
    def ty(self):
        return ProdTy(self.fst.ty, self.snd.ty)


@dataclass(frozen=True)
class NBind(NTerm):
    """kind: lambda | setb | forall | exists | iota.  dom is None for a
    plain type binder, otherwise a quasitype term of type {vty}."""
    kind: str
    var: str
    vty: TypeExpr
    dom: Optional[NTerm]
    body: NTerm

    @property
    def ty(self):
        if self.kind in ("lambda", "setb"):
            return FunTy(self.vty, self.body.ty)
        if self.kind == "iota":
            return self.vty
        return BOOL


@dataclass(frozen=True)
class NTypeQ(NTerm):
    """A type used where a quasitype is expected; denotes UnivSet."""
    t: TypeExpr

    @property
    def ty(self):
        return SetTy(self.t)


@dataclass(frozen=True)
class NOp(NTerm):
    name: str
    targs: Tuple[TypeExpr, ...]
    args: Tuple[NTerm, ...] = ()
    ctx: Tuple[NTerm, ...] = ()

    @property
    def ty(self):
        d = reg.lookup(self.name)
        s = {"'" + p: t for p, t in zip(d.type_params, self.targs)}
        return reg.subst_type(d.result, s)


@dataclass(frozen=True)
class NBig(NTerm):
    """Iterated operator: c lo hi (\\var:vty. body)."""
    const: NTerm
    var: str
    vty: TypeExpr
    lo: NTerm
    hi: NTerm
    body: NTerm

    @property
    def ty(self):
        return self.body.ty


# --------------------------------------------------------------------------


def desugar(n: NTerm) -> Expr:
    t = type(n)
    if t is NVar:
        return Var(n.name, n.ty)
    if t is NConst:
        return Const(n.name, n.ty)
    if t is NEq:
        return Eq(desugar(n.lhs), desugar(n.rhs))
    if t is NApp:
        return App(desugar(n.fun), desugar(n.arg))
    if t is NPair:
        return Pair(desugar(n.fst), desugar(n.snd))
    if t is NTypeQ:
        return reg.univ(n.t)
    if t is NOp:
        d = reg.lookup(n.name)
        return reg.expand(d, n.targs, [desugar(a) for a in n.args], [desugar(c) for c in n.ctx])
    if t is NBig:
        lam = Abs(n.var, n.vty, desugar(n.body))
        return App(App(App(desugar(n.const), desugar(n.lo)), desugar(n.hi)), lam)
    if t is NBind:
        return _desugar_bind(n)
    raise TypeError(f"not a term: {n!r}")


def _desugar_bind(n: NBind) -> Expr:
    body = desugar(n.body)
    x, vt = n.var, n.vty
    if n.dom is None:
        if n.kind in ("lambda", "setb"):
            return Abs(x, vt, body)
        if n.kind == "forall":
            return reg.forall_(x, vt, body)
        if n.kind == "exists":
            return reg.exists_(x, vt, body)
        return Iota(x, vt, body)
    q = desugar(n.dom)
    if (x, vt) in free_vars(q):
        # the bound variable would capture a free occurrence in the domain
        y = fresh_name(x, {nm for nm, _ in free_vars(q) | free_vars(body)})
        body = substitute(body, (x, vt), Var(y, vt))
        x = y
    if n.kind in ("lambda", "setb"):
        return reg.lam_q(x, vt, q, body)
    if n.kind == "forall":
        return reg.forall_q(x, vt, q, body)
    if n.kind == "exists":
        return reg.exists_q(x, vt, q, body)
    return reg.iota_q(x, vt, q, body)


def free_nvars(n: NTerm) -> set:
    t = type(n)
    if t is NVar:
        return {(n.name, n.ty)}
    if t in (NConst, NTypeQ):
        return set()
    if t is NEq:
        return free_nvars(n.lhs) | free_nvars(n.rhs)
    if t is NApp:
        return free_nvars(n.fun) | free_nvars(n.arg)
    if t is NPair:
        return free_nvars(n.fst) | free_nvars(n.snd)
    if t is NOp:
        out = set()
        for a in n.args + n.ctx:
            out |= free_nvars(a)
        return out
    if t is NBig:
        return (free_nvars(n.const) | free_nvars(n.lo) | free_nvars(n.hi)
                | (free_nvars(n.body) - {(n.var, n.vty)}))
    out = free_nvars(n.body) - {(n.var, n.vty)}
    if n.dom is not None:
        out |= free_nvars(n.dom)
    return out


def conjuncts(n: NTerm) -> list:
    """Flatten a left- or right-nested conjunction."""
    if isinstance(n, NOp) and n.name == "and":
        return conjuncts(n.args[0]) + conjuncts(n.args[1])
    return [n]
