"""Fully desugared Alonzo syntax: types, expressions, and the structural
operations on them (typing, free variables, substitution, alpha
equivalence, beta reduction, canonical JSON)."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .errors import BudgetExceeded, TypeError

__all__ = [
    "TypeExpr", "BoolTy", "BaseTy", "FunTy", "ProdTy", "BOOL", "SetTy",
    "Expr", "Var", "Const", "Eq", "App", "Abs", "Iota", "Pair",
    "Language", "infer_type", "check_in_language", "free_vars",
    "substitute", "substitute_many", "alpha_eq", "beta_reduce",
    "fresh_name", "reset_fresh", "show_type", "type_to_json",
    "expr_to_json", "dumps_json", "base_types_of", "constants_of", "size",
]


# --------------------------------------------------------------------------
# types


class TypeExpr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class BoolTy(TypeExpr):
    def __str__(self):
        return "o"


@dataclass(frozen=True, slots=True)
class BaseTy(TypeExpr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class FunTy(TypeExpr):
    dom: TypeExpr
    cod: TypeExpr

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True, slots=True)
class ProdTy(TypeExpr):
    fst: TypeExpr
    snd: TypeExpr

    def __str__(self):
        return show_type(self)


BOOL = BoolTy()


def SetTy(t: TypeExpr) -> FunTy:
    """{t}, the type of sets (predicates) over t."""
    return FunTy(t, BOOL)


def show_type(t: TypeExpr, ctx: str = "top") -> str:
    if isinstance(t, BoolTy):
        return "o"
    if isinstance(t, BaseTy):
        return t.name
    if isinstance(t, FunTy):
        if isinstance(t.cod, BoolTy) and ctx != "cod":
            return "{" + show_type(t.dom) + "}"
        left = show_type(t.dom, "arg")
        if _prints_as_arrow(t.dom, "arg"):
            left = "(" + left + ")"
        s = f"{left} -> {show_type(t.cod, 'cod')}"
        return f"({s})" if ctx == "prod" else s
    if isinstance(t, ProdTy):
        left = show_type(t.fst, "prod")
        if isinstance(t.fst, ProdTy):
            left = "(" + left + ")"
        return f"{left} * {show_type(t.snd, 'prod')}"
    raise TypeError(f"not a type: {t!r}")


def _prints_as_arrow(t, ctx):
    return isinstance(t, FunTy) and not (isinstance(t.cod, BoolTy) and ctx != "cod")


def base_types_of(t: TypeExpr) -> set:
    if isinstance(t, BaseTy):
        return {t.name}
    if isinstance(t, FunTy):
        return base_types_of(t.dom) | base_types_of(t.cod)
    if isinstance(t, ProdTy):
        return base_types_of(t.fst) | base_types_of(t.snd)
    return set()


# --------------------------------------------------------------------------
# expressions
#
# Nodes carry two lazily filled caches (type and free variables) that do
# not take part in equality.


class Expr:
    __slots__ = ()

    @property
    def ty(self) -> TypeExpr:
        return infer_type(self)

    def __str__(self):
        from .notation.printer import show_expr
        return show_expr(self)


def _cache():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str
    vty: TypeExpr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class Const(Expr):
    name: str
    cty: TypeExpr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class Eq(Expr):
    lhs: Expr
    rhs: Expr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class App(Expr):
    fun: Expr
    arg: Expr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class Abs(Expr):
    var: str
    var_ty: TypeExpr
    body: Expr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class Iota(Expr):
    var: str
    var_ty: TypeExpr
    body: Expr
    _t: object = _cache()
    _fv: object = _cache()


@dataclass(frozen=True, slots=True)
class Pair(Expr):
    fst: Expr
    snd: Expr
    _t: object = _cache()
    _fv: object = _cache()


def infer_type(e: Expr) -> TypeExpr:
    t = e._t
    if t is not None:
        return t
    if isinstance(e, Var):
        t = e.vty
    elif isinstance(e, Const):
        t = e.cty
    elif isinstance(e, Eq):
        a, b = infer_type(e.lhs), infer_type(e.rhs)
        if a != b:
            raise TypeError(f"equality between {show_type(a)} and {show_type(b)}")
        t = BOOL
    elif isinstance(e, App):
        f, a = infer_type(e.fun), infer_type(e.arg)
        if not isinstance(f, FunTy):
            raise TypeError(f"applying a non-function of type {show_type(f)}")
        if f.dom != a:
            raise TypeError(
                f"argument of type {show_type(a)} given to function of type {show_type(f)}")
        t = f.cod
    elif isinstance(e, Abs):
        t = FunTy(e.var_ty, infer_type(e.body))
    elif isinstance(e, Iota):
        if isinstance(e.var_ty, BoolTy):
            raise TypeError("definite description over type o")
        if not isinstance(infer_type(e.body), BoolTy):
            raise TypeError("definite description body is not a formula")
        t = e.var_ty
    elif isinstance(e, Pair):
        t = ProdTy(infer_type(e.fst), infer_type(e.snd))
    else:
        raise TypeError(f"not an expression: {e!r}")
    object.__setattr__(e, "_t", t)
    return t


def free_vars(e: Expr) -> FrozenSet[Tuple[str, TypeExpr]]:
    fv = e._fv
    if fv is not None:
        return fv
    if isinstance(e, Var):
        fv = frozenset(((e.name, e.vty),))
    elif isinstance(e, Const):
        fv = frozenset()
    elif isinstance(e, (Eq,)):
        fv = free_vars(e.lhs) | free_vars(e.rhs)
    elif isinstance(e, App):
        fv = free_vars(e.fun) | free_vars(e.arg)
    elif isinstance(e, Pair):
        fv = free_vars(e.fst) | free_vars(e.snd)
    else:
        fv = free_vars(e.body) - {(e.var, e.var_ty)}
    object.__setattr__(e, "_fv", fv)
    return fv


def constants_of(e: Expr) -> set:
    out = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Const):
            out.add((x.name, x.cty))
        elif isinstance(x, (Eq,)):
            stack += [x.lhs, x.rhs]
        elif isinstance(x, App):
            stack += [x.fun, x.arg]
        elif isinstance(x, Pair):
            stack += [x.fst, x.snd]
        elif isinstance(x, (Abs, Iota)):
            stack.append(x.body)
    return out


def size(e: Expr) -> int:
    if isinstance(e, (Var, Const)):
        return 1
    if isinstance(e, Eq):
        return 1 + size(e.lhs) + size(e.rhs)
    if isinstance(e, App):
        return 1 + size(e.fun) + size(e.arg)
    if isinstance(e, Pair):
        return 1 + size(e.fst) + size(e.snd)
    return 1 + size(e.body)


# --------------------------------------------------------------------------
# languages


@dataclass
class Language:
    """Base types plus constants.  Constants are (name, type) pairs: the same
    symbol may be declared at several types."""

    base_types: set = field(default_factory=set)
    constants: Dict[Tuple[str, TypeExpr], None] = field(default_factory=dict)

    def __post_init__(self):
        self.base_types = set(self.base_types)
        if not isinstance(self.constants, dict):
            self.constants = dict.fromkeys(self.constants)
        for (name, t) in self.constants:
            missing = base_types_of(t) - self.base_types
            if missing:
                raise TypeError(f"constant {name} uses undeclared base types {sorted(missing)}")

    def has(self, name: str, ty: TypeExpr) -> bool:
        return (name, ty) in self.constants

    def types_of(self, name: str) -> list:
        return [t for (n, t) in self.constants if n == name]

    def extended(self, base_types=(), constants=()) -> "Language":
        c = dict(self.constants)
        c.update(dict.fromkeys(constants))
        return Language(self.base_types | set(base_types), c)


def check_in_language(e: Expr, L: Language) -> bool:
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            if not base_types_of(x.vty) <= L.base_types:
                return False
        elif isinstance(x, Const):
            if (x.name, x.cty) not in L.constants:
                return False
        elif isinstance(x, Eq):
            stack += [x.lhs, x.rhs]
        elif isinstance(x, App):
            stack += [x.fun, x.arg]
        elif isinstance(x, Pair):
            stack += [x.fst, x.snd]
        else:
            if not base_types_of(x.var_ty) <= L.base_types:
                return False
            stack.append(x.body)
    return True


# --------------------------------------------------------------------------
# substitution

_counter = itertools.count(1)


def reset_fresh() -> None:
    """Start a new rewrite session (fresh-name counter back to 1)."""
    global _counter
    _counter = itertools.count(1)


def fresh_name(stem: str, avoid: Iterable[str] = ()) -> str:
    avoid = set(avoid)
    stem = stem.rstrip("0123456789").rstrip("_") or "x"
    while True:
        cand = f"{stem}_{next(_counter)}"
        if cand not in avoid:
            return cand


def substitute(e: Expr, x: Tuple[str, TypeExpr], a: Expr) -> Expr:
    if infer_type(a) != x[1]:
        raise TypeError(f"substituting {show_type(infer_type(a))} for variable of type {show_type(x[1])}")
    return _subst(e, {x: a})


def substitute_many(e: Expr, m: Mapping[Tuple[str, TypeExpr], Expr]) -> Expr:
    """Simultaneous capture-avoiding substitution."""
    for (n, t), a in m.items():
        if infer_type(a) != t:
            raise TypeError(f"substituting {show_type(infer_type(a))} for {n} of type {show_type(t)}")
    return _subst(e, dict(m))


def _subst(e, m):
    fv = free_vars(e)
    live = {k: v for k, v in m.items() if k in fv}
    if not live:
        return e
    if isinstance(e, Var):
        return live[(e.name, e.vty)]
    if isinstance(e, Eq):
        return Eq(_subst(e.lhs, live), _subst(e.rhs, live))
    if isinstance(e, App):
        return App(_subst(e.fun, live), _subst(e.arg, live))
    if isinstance(e, Pair):
        return Pair(_subst(e.fst, live), _subst(e.snd, live))
    # binder
    bound = (e.var, e.var_ty)
    live.pop(bound, None)
    if not live:
        return e
    var = e.var
    if any(bound in free_vars(v) for v in live.values()):
        avoid = {n for (n, _) in free_vars(e.body)}
        for v in live.values():
            avoid |= {n for (n, _) in free_vars(v)}
        var = fresh_name(e.var, avoid)
        live[bound] = Var(var, e.var_ty)
    return type(e)(var, e.var_ty, _subst(e.body, live))


# --------------------------------------------------------------------------
# alpha equivalence


def alpha_eq(a: Expr, b: Expr) -> bool:
    return _aeq(a, b, {}, {}, 0)


def _aeq(a, b, ea, eb, d):
    if a is b and not ea and not eb:
        return True
    ta = type(a)
    if ta is not type(b):
        return False
    if ta is Var:
        ka, kb = (a.name, a.vty), (b.name, b.vty)
        la, lb = ea.get(ka), eb.get(kb)
        if la is None and lb is None:
            return ka == kb
        return la == lb
    if ta is Const:
        return a.name == b.name and a.cty == b.cty
    if ta is Eq:
        return _aeq(a.lhs, b.lhs, ea, eb, d) and _aeq(a.rhs, b.rhs, ea, eb, d)
    if ta is App:
        return _aeq(a.fun, b.fun, ea, eb, d) and _aeq(a.arg, b.arg, ea, eb, d)
    if ta is Pair:
        return _aeq(a.fst, b.fst, ea, eb, d) and _aeq(a.snd, b.snd, ea, eb, d)
    if a.var_ty != b.var_ty:
        return False
    ea2 = dict(ea)
    ea2[(a.var, a.var_ty)] = d
    eb2 = dict(eb)
    eb2[(b.var, b.var_ty)] = d
    return _aeq(a.body, b.body, ea2, eb2, d + 1)


# --------------------------------------------------------------------------
# beta reduction


def beta_reduce(e: Expr, budget: int = 10_000) -> Expr:
    infer_type(e)
    steps = [0]

    def tick():
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded("beta reduction steps", steps[0], budget)

    def red(x):
        if isinstance(x, App):
            f = red(x.fun)
            if isinstance(f, Abs):
                tick()
                return red(_subst(f.body, {(f.var, f.var_ty): x.arg}))
            return App(f, red(x.arg))
        if isinstance(x, Eq):
            return Eq(red(x.lhs), red(x.rhs))
        if isinstance(x, Pair):
            return Pair(red(x.fst), red(x.snd))
        if isinstance(x, (Abs, Iota)):
            return type(x)(x.var, x.var_ty, red(x.body))
        return x

    return red(e)


# --------------------------------------------------------------------------
# canonical JSON


def type_to_json(t: TypeExpr):
    if isinstance(t, BoolTy):
        return {"tag": "Bool"}
    if isinstance(t, BaseTy):
        return {"tag": "Base", "name": t.name}
    if isinstance(t, FunTy):
        return {"tag": "Fun", "children": [type_to_json(t.dom), type_to_json(t.cod)]}
    return {"tag": "Prod", "children": [type_to_json(t.fst), type_to_json(t.snd)]}


def expr_to_json(e: Expr):
    tag = type(e).__name__
    out = {"tag": tag, "ty": type_to_json(infer_type(e))}
    if isinstance(e, (Var, Const)):
        out["children"] = []
        out["name"] = e.name
    elif isinstance(e, Eq):
        out["children"] = [expr_to_json(e.lhs), expr_to_json(e.rhs)]
    elif isinstance(e, App):
        out["children"] = [expr_to_json(e.fun), expr_to_json(e.arg)]
    elif isinstance(e, Pair):
        out["children"] = [expr_to_json(e.fst), expr_to_json(e.snd)]
    else:
        out["children"] = [expr_to_json(e.body)]
        out["var"] = e.var
        out["var_ty"] = type_to_json(e.var_ty)
    return out


def dumps_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=None, separators=(",", ":"))
