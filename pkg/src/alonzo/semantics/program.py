"""Compilation of kernel expressions to a small opcode program.

A Program is a pool of nodes shared by several roots (the axioms of a
theory, its definitions, the sentence under test).  Nodes are tuples

    (op, a, b, c, slot, n, base, flag)

whose meaning depends on the opcode; see the table below.  Both
evaluation backends (pure Python closures and the compiled int64
machine) run the same programs.

The compiler recognizes the kernel encodings of the logical operators
(T, F, conjunction, quantifiers, ...) and a few pseudoconstants, so that
e.g. a universal quantifier is a loop with early exit rather than the
comparison of two function tables.  A beta-redex becomes LET: the
argument is evaluated once and bound to a slot.  Closed, constant-free
subterms are folded to literals when first compiled.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..errors import TypeError
from ..kernel import (
    BOOL, Abs, App, BoolTy, Const, Eq, Expr, FunTy, Iota, Pair, ProdTy, TypeExpr, Var,
    alpha_eq, free_vars, infer_type,
)
from ..notation import registry as reg
from .frame import UNDEF, Frame

# opcodes         a        b        c        slot  n           base  flag
LIT = 0         # lit idx
VAR = 1         #                            slot
CONST = 2       # const idx
EQ = 3          # lhs      rhs
ISDEF = 4       # arg
NOT = 5         # arg
AND = 6         # lhs      rhs
OR = 7          # lhs      rhs
IMPLIES = 8     # lhs      rhs
FORALL = 9      # body                       slot  card
EXISTS = 10     # body                       slot  card
IOTA = 11       # body                       slot  card
APP = 12        # fun      arg      pow off        card(dom)   base  pred
ABS = 13        # body                       slot  card(dom)   base  pred
PAIR = 14       # fst      snd                     card(snd)
FST = 15        # pair                             card(snd)
SND = 16        # pair                             card(snd)
IF = 17         # cond     then     else
LET = 18        # arg      body              slot                    bool result

OPNAMES = ["LIT", "VAR", "CONST", "EQ", "ISDEF", "NOT", "AND", "OR", "IMPLIES", "FORALL",
           "EXISTS", "IOTA", "APP", "ABS", "PAIR", "FST", "SND", "IF", "LET"]

INT64_LIMIT = 1 << 62


class Program:
    def __init__(self, frame: Frame, consts: List[Tuple[str, TypeExpr]]):
        self.frame = frame
        self.consts = list(consts)
        self.const_index = {c: i for i, c in enumerate(self.consts)}
        self.nodes: List[tuple] = []
        self.lits: List[int] = []
        self.pows: List[int] = []
        self.roots: List[int] = []
        self.nslots = 0
        self.max_card = 2
        self._pow_off: Dict[Tuple[int, int], int] = {}
        self._memo: Dict[tuple, int] = {}

    def fits_int64(self) -> bool:
        return self.max_card < INT64_LIMIT and all(v < INT64_LIMIT for v in self.lits)

    def add(self, e: Expr) -> int:
        """Compile a closed expression; returns its root index."""
        if free_vars(e):
            raise TypeError("only closed expressions can be compiled")
        node = _Compiler(self).compile(e, [])
        self.roots.append(node)
        return len(self.roots) - 1

    # node construction

    def _card(self, t: TypeExpr) -> int:
        c = self.frame.card(t)
        if c > self.max_card:
            self.max_card = c
        return c

    def node(self, op, a=0, b=0, c=0, slot=0, n=0, base=0, flag=0) -> int:
        key = (op, a, b, c, slot, n, base, flag)
        i = self._memo.get(key)
        if i is None:
            i = len(self.nodes)
            self.nodes.append(key)
            self._memo[key] = i
        return i

    def lit(self, v: int) -> int:
        try:
            k = self.lits.index(v)
        except ValueError:
            k = len(self.lits)
            self.lits.append(v)
        return self.node(LIT, k)

    def pow_table(self, base: int, n: int) -> int:
        off = self._pow_off.get((base, n))
        if off is None:
            off = len(self.pows)
            self.pows.extend(base ** (n - 1 - x) for x in range(n))
            self._pow_off[(base, n)] = off
        return off

    def dump(self) -> str:
        lines = []
        for i, (op, a, b, c, s, n, base, f) in enumerate(self.nodes):
            lines.append(f"{i:4d} {OPNAMES[op]:8s} a={a} b={b} c={c} slot={s} n={n} base={base} flag={f}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# recognizers for the kernel encodings


def _same(e: Expr, pattern: Expr) -> bool:
    return e is pattern or e == pattern or alpha_eq(e, pattern)


def _is_true(e: Expr) -> bool:
    return (isinstance(e, Eq) and isinstance(e.lhs, Abs) and isinstance(e.lhs.var_ty, BoolTy)
            and _same(e, reg.TRUE))


def _is_false(e: Expr) -> bool:
    return (isinstance(e, Eq) and isinstance(e.lhs, Abs) and isinstance(e.lhs.var_ty, BoolTy)
            and _same(e, reg.FALSE))


def _is_op(f: Expr, pattern: Expr) -> bool:
    return isinstance(f, Abs) and isinstance(f.var_ty, BoolTy) and _same(f, pattern)


def _forall(e: Expr):
    """Eq(λx:t.T, λy:t.B) -> (y, t, B)."""
    if (isinstance(e, Eq) and isinstance(e.lhs, Abs) and isinstance(e.rhs, Abs)
            and e.lhs.var_ty == e.rhs.var_ty and _is_true(e.lhs.body)):
        return e.rhs.var, e.rhs.var_ty, e.rhs.body
    return None


def _not_arg(e: Expr):
    if isinstance(e, App) and _is_op(e.fun, reg.NOT_OP):
        return e.arg
    return None


def _bin(e: Expr):
    if isinstance(e, App) and isinstance(e.fun, App):
        f = e.fun.fun
        if isinstance(f, Abs) and isinstance(f.var_ty, BoolTy) and isinstance(f.body, Abs):
            for op, pat in ((AND, reg.AND_OP), (IMPLIES, reg.IMP_OP), (OR, reg.OR_OP)):
                if _same(f, pat):
                    return op, e.fun.arg, e.arg
    return None


def _ite(e: Iota):
    """Iota x. (c => x = a) /\\ (¬c => x = b), x not free in c, a, b."""
    body = e.body
    b = _bin(body)
    if b is None or b[0] != AND:
        return None
    i1, i2 = _bin(b[1]), _bin(b[2])
    if i1 is None or i2 is None or i1[0] != IMPLIES or i2[0] != IMPLIES:
        return None
    c, e1 = i1[1], i1[2]
    nc, e2 = i2[1], i2[2]
    if _not_arg(nc) is None or not _same(_not_arg(nc), c):
        return None
    x = (e.var, e.var_ty)
    if not (isinstance(e1, Eq) and isinstance(e2, Eq) and e1.lhs == Var(*x) and e2.lhs == Var(*x)):
        return None
    if any(x in free_vars(t) for t in (c, e1.rhs, e2.rhs)):
        return None
    return c, e1.rhs, e2.rhs


def _is_bot(e: Iota) -> bool:
    b = e.body
    arg = _not_arg(b)
    x = Var(e.var, e.var_ty)
    return arg is not None and isinstance(arg, Eq) and arg.lhs == x and arg.rhs == x


def _proj(f: Expr, p: Expr):
    """FST / SND when f is the kernel projection at the pair's type."""
    t = infer_type(p)
    if not (isinstance(f, Abs) and isinstance(t, ProdTy) and f.var_ty == t):
        return None
    if _same(f, reg.fst_op(t.fst, t.snd)):
        return FST
    if _same(f, reg.snd_op(t.fst, t.snd)):
        return SND
    return None


class _Compiler:
    def __init__(self, prog: Program):
        self.p = prog
        self._cf: Dict[int, bool] = {}

    def const_free(self, e: Expr) -> bool:
        k = id(e)
        r = self._cf.get(k)
        if r is None:
            if isinstance(e, Const):
                r = False
            elif isinstance(e, Var):
                r = True
            elif isinstance(e, Eq):
                r = self.const_free(e.lhs) and self.const_free(e.rhs)
            elif isinstance(e, App):
                r = self.const_free(e.fun) and self.const_free(e.arg)
            elif isinstance(e, Pair):
                r = self.const_free(e.fst) and self.const_free(e.snd)
            else:
                r = self.const_free(e.body)
            self._cf[k] = r
        return r

    def slot_for(self, env) -> int:
        s = len(env)
        if s + 1 > self.p.nslots:
            self.p.nslots = s + 1
        return s

    def compile(self, e: Expr, env: list) -> int:
        p = self.p
        node = self._compile(e, env)
        # fold closed, constant-free subterms
        if p.nodes[node][0] not in (LIT, VAR, CONST) and not free_vars(e) and self.const_free(e):
            from .pyeval import PyMachine
            m = PyMachine(p)
            v = m.eval_node(node)
            return p.lit(v)
        return node

    def _compile(self, e: Expr, env: list) -> int:
        p = self.p
        if isinstance(e, Var):
            for name, t, slot in reversed(env):
                if name == e.name and t == e.vty:
                    return p.node(VAR, slot=slot)
            raise TypeError(f"free variable {e.name}")
        if isinstance(e, Const):
            key = (e.name, e.cty)
            if key not in p.const_index:
                raise TypeError(f"constant {e.name} is not in the language")
            return p.node(CONST, p.const_index[key])
        if isinstance(e, Eq):
            if _is_true(e):
                return p.lit(1)
            if _is_false(e):
                return p.lit(0)
            q = _forall(e)
            if q is not None:
                return self.quant(FORALL, q, env)
            if e.lhs == e.rhs:
                return p.node(ISDEF, self.compile(e.lhs, env))
            return p.node(EQ, self.compile(e.lhs, env), self.compile(e.rhs, env))
        if isinstance(e, App):
            return self.app(e, env)
        if isinstance(e, Abs):
            t = infer_type(e)
            n = p.frame.need(e.var_ty)
            p._card(t)
            s = self.slot_for(env)
            body = self.compile(e.body, env + [(e.var, e.var_ty, s)])
            return p.node(ABS, body, slot=s, n=n, base=p.frame.base(t),
                          flag=int(isinstance(t.cod, BoolTy)))
        if isinstance(e, Iota):
            if _is_bot(e):
                return p.lit(UNDEF)
            ite = _ite(e)
            if ite is not None:
                c, a, b = ite
                return p.node(IF, self.compile(c, env), self.compile(a, env), self.compile(b, env))
            return self.quant(IOTA, (e.var, e.var_ty, e.body), env)
        if isinstance(e, Pair):
            t = infer_type(e)
            p._card(t)
            return p.node(PAIR, self.compile(e.fst, env), self.compile(e.snd, env),
                          n=p.frame.card(t.snd))
        raise TypeError(f"not an expression: {e!r}")

    def quant(self, op, q, env) -> int:
        x, t, body = q
        p = self.p
        # ∀x. ¬B is compiled as ¬∃x. B only through the NOT rule below
        n = p.frame.need(t)
        s = self.slot_for(env)
        b = self.compile(body, env + [(x, t, s)])
        return p.node(op, b, slot=s, n=n)

    def app(self, e: App, env) -> int:
        p = self.p
        arg = _not_arg(e)
        if arg is not None:
            q = _forall(arg)
            if q is not None and _not_arg(q[2]) is not None:
                return self.quant(EXISTS, (q[0], q[1], _not_arg(q[2])), env)
            return p.node(NOT, self.compile(arg, env))
        b = _bin(e)
        if b is not None:
            return p.node(b[0], self.compile(b[1], env), self.compile(b[2], env))
        pr = _proj(e.fun, e.arg)
        if pr is not None:
            t = infer_type(e.arg)
            return p.node(pr, self.compile(e.arg, env), n=p.frame.card(t.snd))
        # beta-redexes, possibly curried: (λx.λy.B) a b
        spine, head = [], e
        while isinstance(head, App):
            spine.append(head.arg)
            head = head.fun
        spine.reverse()
        if isinstance(head, Abs):
            return self.let(head, spine, env, infer_type(e))
        f = self.compile(e.fun, env)
        a = self.compile(e.arg, env)
        return self.apply(f, a, infer_type(e.fun))

    def apply(self, f: int, a: int, ft: FunTy) -> int:
        p = self.p
        n = p.frame.card(ft.dom)
        base = p.frame.base(ft)
        p._card(ft)
        return p.node(APP, f, a, p.pow_table(base, n), n=n, base=base,
                      flag=int(isinstance(ft.cod, BoolTy)))

    def let(self, head: Abs, args: list, env, result_ty) -> int:
        """(λx1...λxk. B) a1 ... an with k abstractions peeled."""
        p = self.p
        binds = []
        body = head
        inner_env = list(env)
        used = 0
        for a in args:
            if not isinstance(body, Abs):
                break
            # earlier bindings occupy their slots while later arguments run
            an = self.compile(a, env + [(None, None, s) for _, s in binds])
            s = self.slot_for(inner_env)
            binds.append((an, s))
            inner_env = inner_env + [(body.var, body.var_ty, s)]
            body = body.body
            used += 1
        node = self.compile(body, inner_env)
        ty = infer_type(body)
        for a in args[used:]:
            node = self.apply(node, self.compile(a, env), ty)
            ty = ty.cod
        flag = int(isinstance(result_ty, BoolTy))
        for an, s in reversed(binds):
            node = p.node(LET, an, node, slot=s, flag=flag)
        return node

