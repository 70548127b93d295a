"""NTerm -> ASCII surface text (the inverse of the parser)."""

from __future__ import annotations

from typing import Optional

from ..kernel import BoolTy, Expr, FunTy, ProdTy, show_type
from . import lexicon as lx
from . import registry as reg
from .nterm import NApp, NBig, NBind, NConst, NEq, NOp, NPair, NTerm, NTypeQ, NVar

P_BIND, P_IFF, P_IMP, P_OR, P_AND, P_NOT, P_REL, P_INFIX, P_RESTR, P_APP, P_ATOM = range(11)

_BINDER_KW = {"forall": "forall", "exists": "exists", "lambda": "\\", "iota": "I"}


def show_expr(e: Expr) -> str:
    from .resugar import resugar
    return Printer().show(resugar(e))


def show_nterm(n: NTerm, ascribe=frozenset()) -> str:
    return Printer(ascribe).show(n)


class Printer:
    def __init__(self, ascribe=frozenset()):
        self.ascribe = set(ascribe)

    def show(self, n: NTerm) -> str:
        return self.p(n, P_BIND)

    # ------------------------------------------------------------------

    def p(self, n: NTerm, ctx: int, fun_pos: bool = False) -> str:
        s, prec = self.fmt(n, fun_pos)
        return f"({s})" if prec < ctx else s

    def fmt(self, n: NTerm, fun_pos: bool = False):
        t = type(n)
        if t is NVar:
            return n.name, P_ATOM
        if t is NConst:
            if lx.is_infix_name(n.name):
                return f"({n.name})", P_ATOM
            if n.name in self.ascribe or n.name in lx.KEYWORDS:
                return f"({n.name} : {self.q(NTypeQ(n.ty), 0, plain=True)})", P_ATOM
            return n.name, P_ATOM
        if t is NTypeQ:
            if isinstance(n.t, FunTy) or isinstance(n.t, ProdTy):
                return f"UnivSet@[{show_type(n.t)}]", P_ATOM
            return show_type(n.t), P_ATOM
        if t is NEq:
            if isinstance(n.lhs.ty, BoolTy):
                return f"{self.p(n.lhs, P_IMP)} <=> {self.p(n.rhs, P_IMP)}", P_IFF
            return f"{self.p(n.lhs, P_INFIX)} = {self.p(n.rhs, P_INFIX)}", P_REL
        if t is NPair:
            items = [n.fst]
            r = n.snd
            while isinstance(r, NPair):
                items.append(r.fst)
                r = r.snd
            items.append(r)
            return "(" + ", ".join(self.p(i, P_BIND) for i in items) + ")", P_ATOM
        if t is NApp:
            return self.fmt_app(n)
        if t is NBind:
            return self.fmt_bind(n)
        if t is NBig:
            kw = {v: k for k, v in lx.BIG_OPS.items()}[n.const.name]
            return (f"{kw} {n.var} = {self.p(n.lo, P_APP + 1)} .. {self.p(n.hi, P_APP + 1)}. "
                    f"{self.p(n.body, P_BIND)}"), P_BIND
        if t is NOp:
            return self.fmt_op(n, fun_pos)
        raise TypeError(repr(n))

    def fmt_app(self, n: NApp):
        f, a = n.fun, n.arg
        if isinstance(f, NConst) and lx.is_infix_name(f.name) and isinstance(a, NPair):
            return self._infix(f.name, a.fst, a.snd)
        if (isinstance(f, NApp) and isinstance(f.fun, NConst) and lx.is_infix_name(f.fun.name)):
            return self._infix(f.fun.name, f.arg, a)
        return f"{self.p(f, P_APP, fun_pos=True)} {self.p(a, P_ATOM)}", P_APP

    def _infix(self, op, a, b):
        lvl = P_REL if op in lx.REL_SYMBOLS else P_INFIX
        return f"{self.p(a, lvl + 1)} {op} {self.p(b, lvl + 1)}", lvl

    def fmt_bind(self, n: NBind):
        if n.kind == "setb":
            return "{" + f"{n.var}:{self.dom(n)} | {self.p(n.body, P_BIND)}" + "}", P_ATOM
        kw = _BINDER_KW[n.kind]
        if n.kind in ("forall", "exists"):
            groups = []
            cur = n
            while True:
                d = self.dom(cur)
                if groups and groups[-1][1] == d:
                    groups[-1][0].append(cur.var)
                else:
                    groups.append(([cur.var], d))
                nxt = cur.body
                if (isinstance(nxt, NBind) and nxt.kind == n.kind
                        and not self._shadows(nxt.var, groups)):
                    cur = nxt
                    continue
                break
            head = ", ".join(",".join(vs) + ":" + d for vs, d in groups)
            return f"{kw} {head}. {self.p(cur.body, P_BIND)}", P_BIND
        sep = "" if kw == "\\" else " "
        return f"{kw}{sep}{n.var}:{self.dom(n)}. {self.p(n.body, P_BIND)}", P_BIND

    @staticmethod
    def _shadows(v, groups):
        return any(v in vs for vs, _ in groups)

    def dom(self, n: NBind) -> str:
        if n.dom is None:
            return self.q(NTypeQ(n.vty), 0)
        return self.q(n.dom, 0)

    # quasitype syntax: arrow (0) > product (1) > atom (2)

    def q(self, n: NTerm, ctx: int, plain: bool = False) -> str:
        s, prec = self.qfmt(n)
        return f"({s})" if prec < ctx else s

    def qfmt(self, n: NTerm):
        if isinstance(n, NTypeQ):
            return self.tfmt(n.t)
        if isinstance(n, NOp):
            if n.name == "UnivSet":
                return self.tfmt(n.targs[0])
            if n.name == "FunQTy":
                return f"{self.q(n.args[0], 1)} -> {self.q(n.args[1], 0)}", 0
            if n.name == "ProdQTy":
                return f"{self.q(n.args[0], 2)} * {self.q(n.args[1], 1)}", 1
            if n.name == "SetQTy":
                return "{" + self.q(n.args[0], 0) + "}", 2
        if isinstance(n, NBind) and n.kind == "setb":
            return self.fmt_bind(n)[0], 2
        if isinstance(n, (NConst, NVar)) and not lx.is_infix_name(n.name) and n.name not in self.ascribe:
            return n.name, 2
        return "(" + self.p(n, P_BIND) + ")", 2

    def tfmt(self, t):
        if isinstance(t, FunTy):
            if isinstance(t.cod, BoolTy):
                return "{" + self.tfmt(t.dom)[0] + "}", 2
            return f"{self.q(NTypeQ(t.dom), 1)} -> {self.q(NTypeQ(t.cod), 0)}", 0
        if isinstance(t, ProdTy):
            return f"{self.q(NTypeQ(t.fst), 2)} * {self.q(NTypeQ(t.snd), 1)}", 1
        return show_type(t), 2

    # ------------------------------------------------------------------

    def _targs(self, n: NOp) -> str:
        if not n.targs:
            return ""
        return "@[" + ", ".join(self.q(NTypeQ(t), 0) for t in n.targs) + "]"

    def fmt_op(self, n: NOp, fun_pos: bool):
        d = reg.lookup(n.name)
        syn = d.syntax
        a = n.args
        if syn == "lit":
            return n.name, P_ATOM
        if syn == "pc" or not d.expr_params:
            if fun_pos and _dom_covers(d):
                return n.name, P_ATOM
            return n.name + self._targs(n), P_ATOM
        if syn == "and":
            chain = self._chain(n)
            if chain is not None:
                return chain, P_REL
            return f"{self.p(a[0], P_AND)} /\\ {self.p(a[1], P_AND + 1)}", P_AND
        if syn == "or":
            return f"{self.p(a[0], P_OR)} \\/ {self.p(a[1], P_OR + 1)}", P_OR
        if syn == "implies":
            return f"{self.p(a[0], P_IMP + 1)} => {self.p(a[1], P_IMP)}", P_IMP
        if syn == "not":
            return f"~{self.p(a[0], P_NOT)}", P_NOT
        if syn.startswith("rel:"):
            op = syn[4:]
            if op == "~notin":
                return f"~({self.p(a[0], P_INFIX)} ~in {self.q(a[1], 2)})", P_NOT
            if op == "~in":
                return f"{self.p(a[0], P_INFIX)} ~in {self.q(a[1], 2)}", P_REL
            return f"{self.p(a[0], P_INFIX)} {op} {self.p(a[1], P_INFIX)}", P_REL
        if syn.startswith("post:"):
            return f"{self.p(a[0], P_ATOM)}{syn[5:]}", P_ATOM
        if syn.startswith("infix:"):
            return f"{self.p(a[0], P_INFIX + 1)} {syn[6:]} {self.p(a[1], P_INFIX + 1)}", P_INFIX
        if syn == "if":
            return (f"if {self.p(a[0], P_BIND)} then {self.p(a[1], P_BIND)} "
                    f"else {self.p(a[2], P_BIND)}"), P_BIND
        if syn == "setenum":
            return "{" + ", ".join(self.p(x, P_BIND) for x in a) + "}", P_ATOM
        if syn == "restrict":
            return f"{self.p(a[0], P_RESTR)} | {self.q(a[1], 2)}", P_RESTR
        # call form; quasitype slots take a type name or an expression
        parts = []
        for i, x in enumerate(a):
            if i in d.qslots and isinstance(x, NTypeQ):
                parts.append(self.fmt(x)[0])
            else:
                parts.append(self.p(x, P_BIND))
        return f"{d.name}({', '.join(parts)})", P_APP

    # chained relations: a R b S c for (a R b) /\ (b S c)

    def _rel(self, n):
        if isinstance(n, NEq) and not isinstance(n.lhs.ty, BoolTy):
            return n.lhs, "=", n.rhs
        if isinstance(n, NOp):
            syn = reg.lookup(n.name).syntax
            if syn.startswith("rel:") and syn not in ("rel:~in", "rel:~notin"):
                return n.args[0], syn[4:], n.args[1]
        if isinstance(n, NApp):
            f = n.fun
            if isinstance(f, NConst) and f.name in lx.REL_SYMBOLS and isinstance(n.arg, NPair):
                return n.arg.fst, f.name, n.arg.snd
            if isinstance(f, NApp) and isinstance(f.fun, NConst) and f.fun.name in lx.REL_SYMBOLS:
                return f.arg, f.fun.name, n.arg
        return None

    def _chain_parts(self, n):
        r = self._rel(n)
        if r is not None:
            return [r[0], r[2]], [r[1]]
        if isinstance(n, NOp) and n.name == "and":
            left = self._chain_parts(n.args[0])
            right = self._rel(n.args[1])
            if left is not None and right is not None and left[0][-1] == right[0]:
                return left[0] + [right[2]], left[1] + [right[1]]
        return None

    def _chain(self, n):
        parts = self._chain_parts(n)
        if parts is None:
            return None
        items, ops = parts
        out = self.p(items[0], P_INFIX)
        for op, it in zip(ops, items[1:]):
            out += f" {op} {self.p(it, P_INFIX)}"
        return out


def _dom_covers(d) -> bool:
    """A pseudoconstant in function position can omit its type arguments
    when they are all determined by its argument type."""
    t = d.result
    if not isinstance(t, FunTy):
        return False
    have = {n for n in _tvars(t.dom)}
    return all("'" + p in have for p in d.type_params)


def _tvars(t):
    if isinstance(t, FunTy):
        return _tvars(t.dom) | _tvars(t.cod)
    if isinstance(t, ProdTy):
        return _tvars(t.fst) | _tvars(t.snd)
    if reg.is_tvar(t):
        return {t.name}
    return set()
