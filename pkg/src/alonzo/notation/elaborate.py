"""Bidirectional elaboration of raw surface trees into NTerms.

Names resolve innermost-first: bound variables, then constants of the
language (which may be overloaded at several types), then the notation
registry, then base types (a base type in value position denotes its
universal set).  Overloads and type parameters are settled from the
expected type and the argument types; an operand that cannot be typed
on its own is retried once its sibling has been elaborated.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence

from ..errors import AmbiguityError, ResolveError, TypeError
from ..kernel import BOOL, BaseTy, BoolTy, FunTy, Language, ProdTy, SetTy, TypeExpr, show_type
from . import lexicon as lx
from . import registry as reg
from .nterm import NApp, NBig, NBind, NConst, NEq, NOp, NPair, NTerm, NTypeQ, NVar, desugar
from .parser import (
    QBool, QExpr, QFun, QName, QProd, QSet, SApp, SAsc, SBig, SBin, SBinder,
    SChain, SId, SIf, SIsDefIn, SNode, SNot, SPost, SQ, SRestrict, SSetB,
    SSetEnum, STuple, parse_qtype, parse_term,
)

_REL_REG = {"!=": "neq", "~=": "qeq", "!~=": "nqeq", "<": "lt", ">": "gt", ">=": "ge",
            "in": "in", "notin": "notin", "subseteq": "subseteq"}


class Scope:
    """What a term may mention: base types and (possibly overloaded)
    constants."""

    def __init__(self, base_types=(), constants=()):
        self.base_types = set(base_types)
        self.consts: Dict[str, List[TypeExpr]] = {}
        for name, ty in constants:
            self.add(name, ty)

    @classmethod
    def of(cls, L: Language) -> "Scope":
        return cls(L.base_types, L.constants.keys())

    def add(self, name: str, ty: TypeExpr) -> None:
        lst = self.consts.setdefault(name, [])
        if ty not in lst:
            lst.append(ty)

    def copy(self) -> "Scope":
        s = Scope(self.base_types)
        s.consts = {k: list(v) for k, v in self.consts.items()}
        return s


def _where(node) -> str:
    p = getattr(node, "pos", (0, 0))
    return f"{p[0]}:{p[1]}: " if p != (0, 0) else ""


def _is_set(t) -> bool:
    return isinstance(t, FunTy) and isinstance(t.cod, BoolTy)


class Elaborator:
    def __init__(self, scope: Scope):
        self.scope = scope
        self.env: List[tuple] = []
        self._metas = itertools.count()

    def meta(self) -> BaseTy:
        return BaseTy(f"?{next(self._metas)}")

    def fresh_params(self, d) -> Dict[str, TypeExpr]:
        return {"'" + p: self.meta() for p in d.type_params}

    # ------------------------------------------------------------------

    def lookup_var(self, name):
        for n, t in reversed(self.env):
            if n == name:
                return t
        return None

    def is_value_name(self, name) -> bool:
        return self.lookup_var(name) is not None or name in self.scope.consts

    def _fits(self, exp, t) -> bool:
        return exp is None or reg.unify(exp, t, {})

    def _check(self, node, n: NTerm, exp) -> NTerm:
        if exp is not None and not reg.unify(exp, n.ty, {}):
            raise TypeError(f"{_where(node)}expected {show_type(reg.resolve(exp, {}))}, "
                            f"got {show_type(n.ty)}")
        return n

    def elab(self, s: SNode, exp: Optional[TypeExpr] = None) -> NTerm:
        n = self._elab(s, exp)
        return self._check(s, n, exp)

    def _elab(self, s: SNode, exp):
        m = getattr(self, "e_" + type(s).__name__)
        return m(s, exp)

    # names

    def e_SId(self, s: SId, exp):
        t = self.lookup_var(s.name)
        if t is not None:
            return NVar(s.name, t)
        cands = self.scope.consts.get(s.name)
        if cands:
            fit = [c for c in cands if self._fits(exp, c)]
            if len(fit) == 1:
                return NConst(s.name, fit[0])
            if not fit:
                raise TypeError(f"{_where(s)}no declaration of {s.name} has the expected type "
                                f"{show_type(reg.resolve(exp, {}))}")
            raise AmbiguityError(f"{_where(s)}{s.name} is overloaded; its type is not "
                                 f"determined here (add an ascription)")
        if reg.has(s.name) or s.name in reg.ALIASES:
            d = reg.lookup(s.name)
            if d.expr_params:
                raise TypeError(f"{_where(s)}{s.name} takes {len(d.expr_params)} arguments")
            if d.kind == "binder":
                raise ResolveError(f"{_where(s)}{s.name} is a binder")
            return self.pc(d, s, exp)
        if s.name in self.scope.base_types:
            return NTypeQ(BaseTy(s.name))
        raise ResolveError(f"{_where(s)}unknown symbol {s.name}")

    def pc(self, d, s: SId, exp):
        m = self.fresh_params(d)
        sub: Dict[str, TypeExpr] = {}
        if s.targs is not None:
            if len(s.targs) != len(d.type_params):
                raise TypeError(f"{_where(s)}{d.name} takes {len(d.type_params)} type arguments")
            for p, q in zip(d.type_params, s.targs):
                sub[m["'" + p].name] = self.elab_type(q)
        res = reg.subst_type(d.result, m)
        if exp is not None and not reg.unify(res, exp, sub):
            raise TypeError(f"{_where(s)}{d.name} cannot have type {show_type(reg.resolve(exp, {}))}")
        targs = self._targs(d, m, sub, s)
        return NOp(d.name, targs, (), self.ctx_args(d, targs, s))

    def _targs(self, d, m, sub, node):
        out = []
        for p in d.type_params:
            t = reg.resolve(m["'" + p], sub)
            if not reg.ground(t):
                raise AmbiguityError(f"{_where(node)}type parameter of {d.name} is not determined "
                                     f"by its context; write {d.name}@[...]")
            out.append(t)
        out = tuple(out)
        reg.template_at(d, out)  # rejects rows excluded at these types
        return out

    def ctx_args(self, d, targs, node):
        s = {"'" + p: t for p, t in zip(d.type_params, targs)}
        out = []
        for _, pat, cname in d.ctx_params:
            ty = reg.subst_type(pat, s)
            if ty in self.scope.consts.get(cname, ()):
                out.append(NConst(cname, ty))
            else:
                raise ResolveError(f"{_where(node)}{d.name} needs a constant {cname} : {show_type(ty)} "
                                   f"in scope")
        return tuple(out)

    # applications and operators

    def e_SApp(self, s: SApp, exp):
        f = s.fun
        if isinstance(f, SId) and not self.is_value_name(f.name) and (reg.has(f.name) or f.name in reg.ALIASES):
            d = reg.lookup(f.name)
            if d.expr_params and d.kind != "binder":
                args = s.arg.items if isinstance(s.arg, STuple) and len(d.expr_params) > 1 else [s.arg]
                return self.op(d, args, exp, s, f.targs)
        want = FunTy(self.meta(), exp if exp is not None else self.meta())
        try:
            fn = self.elab(f, want)
        except AmbiguityError:
            an = self.elab(s.arg)
            fn = self.elab(f, FunTy(an.ty, exp if exp is not None else self.meta()))
            return NApp(fn, an)
        if not isinstance(fn.ty, FunTy):
            raise TypeError(f"{_where(s)}applying a non-function of type {show_type(fn.ty)}")
        return NApp(fn, self.elab(s.arg, fn.ty.dom))

    def op(self, d, raw_args: Sequence, exp, node, targs=None, pre: Optional[dict] = None):
        if len(raw_args) != len(d.expr_params):
            raise TypeError(f"{_where(node)}{d.name} takes {len(d.expr_params)} arguments, "
                            f"got {len(raw_args)}")
        m = self.fresh_params(d)
        sub: Dict[str, TypeExpr] = {}
        if targs is not None:
            for p, q in zip(d.type_params, targs):
                sub[m["'" + p].name] = self.elab_type(q)
        if exp is not None:
            reg.unify(reg.subst_type(d.result, m), exp, sub)
        pats = [reg.subst_type(pt, m) for _, pt in d.expr_params]
        done: List[Optional[NTerm]] = [None] * len(raw_args)
        if pre:
            for i, n in pre.items():
                done[i] = n
                if not reg.unify(pats[i], n.ty, sub):
                    raise TypeError(f"{_where(node)}argument {i + 1} of {d.name} has type {show_type(n.ty)}")
        pending = [i for i in range(len(raw_args)) if done[i] is None]
        while pending:
            progress = False
            rest = []
            for i in pending:
                pat = reg.resolve(pats[i], sub)
                try:
                    if i in d.qslots:
                        n = self.qslot(raw_args[i], pat)
                    else:
                        n = self.elab(raw_args[i], pat)
                except AmbiguityError:
                    rest.append(i)
                    continue
                if not reg.unify(pats[i], n.ty, sub):
                    raise TypeError(f"{_where(raw_args[i])}argument {i + 1} of {d.name} "
                                    f"has type {show_type(n.ty)}")
                done[i] = n
                progress = True
            if not progress:
                raise AmbiguityError(f"{_where(node)}cannot determine the types of the arguments of {d.name}")
            pending = rest
        tas = self._targs(d, m, sub, node)
        return NOp(d.name, tas, tuple(done), self.ctx_args(d, tas, node))

    def qslot(self, raw: SNode, pat) -> NTerm:
        if isinstance(raw, SId) and not self.is_value_name(raw.name) and raw.name in self.scope.base_types:
            return NTypeQ(BaseTy(raw.name))
        return self.elab(raw, pat)

    def e_SBin(self, s: SBin, exp):
        op = s.op
        if op in ("/\\", "\\/", "=>"):
            name = {"/\\": "and", "\\/": "or", "=>": "implies"}[op]
            return NOp(name, (), (self.elab(s.lhs, BOOL), self.elab(s.rhs, BOOL)))
        if op == "<=>":
            return NEq(self.elab(s.lhs, BOOL), self.elab(s.rhs, BOOL))
        return self.infix(op, s.lhs, s.rhs, exp, s)

    def infix(self, op, a, b, exp, node):
        cands = [] if self.lookup_var(op) else self.scope.consts.get(op, [])
        if not cands:
            if op in lx.INFIX_OPS:
                return self.op(reg.lookup(lx.INFIX_OPS[op]), [a, b], exp, node)
            t = self.lookup_var(op)
            if t is None:
                raise ResolveError(f"{_where(node)}unknown operator {op}")
            cands = [t]
        an = self._try(a)
        bn = self._try(b)
        fits = []
        for t in cands:
            shape = _binary_shape(t)
            if shape is None:
                continue
            d1, d2, cod, curried = shape
            if an is not None and an.ty != d1 or bn is not None and bn.ty != d2:
                continue
            if not self._fits(exp, cod):
                continue
            fits.append((t, d1, d2, curried))
        if len(fits) != 1:
            if not fits:
                raise TypeError(f"{_where(node)}no declaration of {op} fits its operands")
            raise AmbiguityError(f"{_where(node)}operator {op} is ambiguous here")
        t, d1, d2, curried = fits[0]
        an = an if an is not None else self.elab(a, d1)
        bn = bn if bn is not None else self.elab(b, d2)
        c = self.lookup_var(op) and NVar(op, t) or NConst(op, t)
        if curried:
            return NApp(NApp(c, an), bn)
        return NApp(c, NPair(an, bn))

    def _try(self, s):
        try:
            return self.elab(s)
        except AmbiguityError:
            return None

    def e_SChain(self, s: SChain, exp):
        rels = []
        for i, op in enumerate(s.ops):
            rels.append(self.relation(op, s.items[i], s.items[i + 1], s))
        out = rels[0]
        for r in rels[1:]:
            out = NOp("and", (), (out, r))
        return out

    def relation(self, op, a, b, node):
        if op == "=":
            an = self._try(a)
            if an is None:
                bn = self.elab(b)
                an = self.elab(a, bn.ty)
            else:
                bn = self.elab(b, an.ty)
            return NEq(an, bn)
        if op in _REL_REG:
            return self.op(reg.lookup(_REL_REG[op]), [a, b], BOOL, node)
        return self.infix(op, a, b, BOOL, node)

    def e_SNot(self, s: SNot, exp):
        return NOp("not", (), (self.elab(s.arg, BOOL),))

    def e_SPost(self, s: SPost, exp):
        a = self.elab(s.arg)
        return NOp("isdef" if s.op == "!" else "isundef", (a.ty,), (a,))

    def e_SIsDefIn(self, s: SIsDefIn, exp):
        try:
            q = self.qterm(s.q)
            a = self.elab(s.arg, q.ty.dom)
        except AmbiguityError:
            a = self.elab(s.arg)
            q = self.qterm(s.q, a.ty)
        if q.ty.dom != a.ty:
            raise TypeError(f"{_where(s)}{show_type(a.ty)} is not the carrier of the quasitype")
        return NOp("isdefin", (q.ty.dom,), (a, q))

    def e_SRestrict(self, s: SRestrict, exp):
        f = self.elab(s.fun)
        if not isinstance(f.ty, FunTy):
            raise TypeError(f"{_where(s)}restricting a non-function")
        q = self.qterm(s.q, f.ty.dom)
        if q.ty.dom != f.ty.dom:
            raise TypeError(f"{_where(s)}restriction domain mismatch")
        return NOp("restrict", (f.ty.dom, f.ty.cod), (f, q))

    # binders

    def e_SBinder(self, s: SBinder, exp):
        binds = []
        for names, q in s.groups:
            vty, dom = self.qdom(q)
            for nm in names:
                binds.append((nm, vty, dom))
        kind = s.kind
        pushed = 0
        try:
            for nm, vty, _ in binds:
                self.env.append((nm, vty))
                pushed += 1
            if kind == "lambda":
                bexp = exp.cod if isinstance(exp, FunTy) else None
            else:
                bexp = BOOL
            body = self.elab(s.body, bexp)
        finally:
            del self.env[len(self.env) - pushed:]
        for nm, vty, dom in reversed(binds):
            body = NBind(kind, nm, vty, dom, body)
        return body

    def e_SSetB(self, s: SSetB, exp):
        vty, dom = self.qdom(s.q)
        self.env.append((s.var, vty))
        try:
            body = self.elab(s.body, BOOL)
        finally:
            self.env.pop()
        return NBind("setb", s.var, vty, dom, body)

    def qdom(self, q: SQ):
        r = self.elab_q(q)
        if r[0] == "type":
            return r[1], None
        return r[1].ty.dom, r[1]

    def e_SBig(self, s: SBig, exp):
        cands = self.scope.consts.get(s.const, [])
        fits = []
        for t in cands:
            try:
                a = t.dom
                if t.cod.dom == a and t.cod.cod.dom.dom == a and self._fits(exp, t.cod.cod.cod):
                    fits.append(t)
            except AttributeError:
                continue
        if len(fits) != 1:
            raise ResolveError(f"{_where(s)}no unique iterated operator {s.const} in scope")
        t = fits[0]
        a = t.dom
        lo = self.elab(s.lo, a)
        hi = self.elab(s.hi, a)
        self.env.append((s.var, a))
        try:
            body = self.elab(s.body, t.cod.cod.cod)
        finally:
            self.env.pop()
        return NBig(NConst(s.const, t), s.var, a, lo, hi, body)

    # compound values

    def e_STuple(self, s: STuple, exp):
        items = s.items
        if len(items) == 1:
            return self.elab(items[0], exp)
        e1 = exp.fst if isinstance(exp, ProdTy) else None
        e2 = exp.snd if isinstance(exp, ProdTy) else None
        a = self.elab(items[0], e1)
        rest = items[1:]
        b = self.elab(rest[0], e2) if len(rest) == 1 else self.e_STuple(STuple(rest, s.pos), e2)
        return NPair(a, b)

    def e_SSetEnum(self, s: SSetEnum, exp):
        n = len(s.items)
        if not reg.has(f"set{n}"):
            raise TypeError(f"{_where(s)}enumerated sets have at most 6 elements")
        return self.op(reg.lookup(f"set{n}"), s.items, exp, s)

    def e_SIf(self, s: SIf, exp):
        return self.op(reg.lookup("ite"), [s.cond, s.then, s.other], exp, s)

    def e_SAsc(self, s: SAsc, exp):
        r = self.elab_q(s.q)
        t = r[1] if r[0] == "type" else r[1].ty.dom
        return self.elab(s.expr, t)

    # quasitypes

    def elab_q(self, q: SQ, hint: Optional[TypeExpr] = None):
        """Returns ("type", TypeExpr) or ("q", NTerm of a set type)."""
        if isinstance(q, QBool):
            return ("type", BOOL)
        if isinstance(q, QName):
            if not self.is_value_name(q.name) and q.name in self.scope.base_types and q.targs is None:
                return ("type", BaseTy(q.name))
            n = self.elab(SId(q.name, q.targs, q.pos), SetTy(hint) if hint is not None else None)
            if not _is_set(n.ty):
                raise TypeError(f"{_where(q)}{q.name} is not a type or quasitype")
            if isinstance(n, NTypeQ):
                return ("type", n.t)
            return ("q", n)
        if isinstance(q, QSet):
            r = self.elab_q(q.elem)
            if r[0] == "type":
                return ("type", SetTy(r[1]))
            return ("q", NOp("SetQTy", (r[1].ty.dom,), (r[1],)))
        if isinstance(q, QFun):
            a = self.elab_q(q.dom)
            b = self.elab_q(q.cod)
            if a[0] == "type" and b[0] == "type":
                return ("type", FunTy(a[1], b[1]))
            if b == ("type", BOOL):
                return ("q", NOp("SetQTy", (a[1].ty.dom,), (a[1],)))
            ta, tb = self._as_term(a), self._as_term(b)
            return ("q", NOp("FunQTy", (ta.ty.dom, tb.ty.dom), (ta, tb)))
        if isinstance(q, QProd):
            a = self.elab_q(q.fst)
            b = self.elab_q(q.snd)
            if a[0] == "type" and b[0] == "type":
                return ("type", ProdTy(a[1], b[1]))
            ta, tb = self._as_term(a), self._as_term(b)
            return ("q", NOp("ProdQTy", (ta.ty.dom, tb.ty.dom), (ta, tb)))
        if isinstance(q, QExpr):
            n = self.elab(q.expr, SetTy(hint) if hint is not None else None)
            if not _is_set(n.ty):
                raise TypeError(f"{_where(q)}expected a quasitype, got type {show_type(n.ty)}")
            return ("q", n)
        raise TypeError(f"not a quasitype: {q!r}")

    @staticmethod
    def _as_term(r) -> NTerm:
        return NTypeQ(r[1]) if r[0] == "type" else r[1]

    def qterm(self, q: SQ, hint=None) -> NTerm:
        return self._as_term(self.elab_q(q, hint))

    def elab_type(self, q: SQ) -> TypeExpr:
        if isinstance(q, QBool):
            return BOOL
        if isinstance(q, QName):
            if q.name in self.scope.base_types and q.targs is None:
                return BaseTy(q.name)
            raise ResolveError(f"{_where(q)}unknown base type {q.name}")
        if isinstance(q, QSet):
            return SetTy(self.elab_type(q.elem))
        if isinstance(q, QFun):
            return FunTy(self.elab_type(q.dom), self.elab_type(q.cod))
        if isinstance(q, QProd):
            return ProdTy(self.elab_type(q.fst), self.elab_type(q.snd))
        raise TypeError(f"{_where(q)}expected a type")


def _binary_shape(t):
    """(dom1, dom2, cod, curried) for a binary operator type."""
    if not isinstance(t, FunTy):
        return None
    if isinstance(t.dom, ProdTy):
        return t.dom.fst, t.dom.snd, t.cod, False
    if isinstance(t.cod, FunTy):
        return t.dom, t.cod.dom, t.cod.cod, True
    return None


# --------------------------------------------------------------------------
# convenience entry points


def elaborate(s: SNode, scope: Scope, expected: Optional[TypeExpr] = None) -> NTerm:
    return Elaborator(scope).elab(s, expected)


def desugar_surface(s, L, expected: Optional[TypeExpr] = None):
    """SurfaceDecl (raw tree or source text) -> kernel Expr in language L."""
    if isinstance(s, str):
        s = parse_term(s)
    scope = L if isinstance(L, Scope) else Scope.of(L)
    return desugar(elaborate(s, scope, expected))


def elab_type_text(text: str, scope: Scope) -> TypeExpr:
    return Elaborator(scope).elab_type(parse_qtype(text))
