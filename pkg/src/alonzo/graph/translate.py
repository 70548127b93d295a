"""Translations and their homomorphic extensions to types and terms.

A translation maps base types to types or quasitypes (mu) and constants
to closed expressions (nu).  The extension to terms works on NTerms, so
that notation survives: a binder over a type whose image is a quasitype
becomes a restricted binder, the universal and empty sets of such a type
become \\x:Q. T and \\x:Q. F, and the type arguments of pseudoconstants
become carriers.  Kernel expressions are translated by resugaring,
translating and desugaring again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from ..errors import MissingDependency, TypeError
from ..kernel import (
    BOOL, BaseTy, BoolTy, Expr, FunTy, ProdTy, SetTy, TypeExpr, infer_type, show_type,
)
from ..notation import registry as reg
from ..notation.nterm import NApp, NBig, NBind, NConst, NEq, NOp, NPair, NTerm, NTypeQ, NVar, desugar
from ..notation.quasitype import Quasitype
from ..notation.resugar import resugar
from .core import Theory

Image = Union[TypeExpr, Quasitype]

# notations whose quasitype slots take the image of a type itself
_ABBREVIATIONS = {"MONOID", "COM-MONOID", "MON-ACTION", "MON-HOMOM", "TOTAL-ON"}
# quasitype constructors: type slots inside them stay at the carrier
_QCONS = {"FunQTy", "ProdQTy", "SetQTy"}


@dataclass
class Translation:
    name: str
    src: Theory
    dst: Theory
    type_map: Dict[str, Image]
    const_map: Dict[Tuple[str, TypeExpr], NTerm]
    dst_dev: Optional[str] = None
    inclusion: bool = False
    hidden: bool = False
    implicit: bool = False
    trusted: Optional[str] = None
    expects: list = field(default_factory=list)      # [(index, Expr, NTerm)]
    expect_counts: Optional[tuple] = None
    shared: Dict[Tuple[str, TypeExpr], str] = field(default_factory=dict)  # stub consts
    transported: List[Tuple[Tuple[str, TypeExpr], Tuple[str, TypeExpr]]] = field(default_factory=list)
    certificate: object = None
    rejection: object = None
    waiver: Optional[str] = None

    @property
    def normal(self) -> bool:
        return all(not isinstance(v, Quasitype) for v in self.type_map.values())

    # ------------------------------------------------------------------
    # types

    def carrier(self, t: TypeExpr) -> TypeExpr:
        if isinstance(t, BoolTy):
            return t
        if isinstance(t, BaseTy):
            im = self.type_map.get(t.name)
            if im is None:
                raise TypeError(f"{self.name} does not map base type {t.name}")
            return im.carrier if isinstance(im, Quasitype) else im
        if isinstance(t, FunTy):
            return FunTy(self.carrier(t.dom), self.carrier(t.cod))
        if isinstance(t, ProdTy):
            return ProdTy(self.carrier(t.fst), self.carrier(t.snd))
        raise TypeError(f"not a type: {t!r}")

    def qimage(self, t: TypeExpr) -> Optional[NTerm]:
        """The quasitype term of mu-bar(t), or None when it is a type."""
        if isinstance(t, BoolTy):
            return None
        if isinstance(t, BaseTy):
            im = self.type_map[t.name]
            return im.nterm if isinstance(im, Quasitype) else None
        if isinstance(t, FunTy):
            a = self.qimage(t.dom)
            if isinstance(t.cod, BoolTy):
                if a is None:
                    return None
                return NOp("SetQTy", (self.carrier(t.dom),), (a,))
            b = self.qimage(t.cod)
            if a is None and b is None:
                return None
            return NOp("FunQTy", (self.carrier(t.dom), self.carrier(t.cod)),
                       (self._asq(a, t.dom), self._asq(b, t.cod)))
        if isinstance(t, ProdTy):
            a, b = self.qimage(t.fst), self.qimage(t.snd)
            if a is None and b is None:
                return None
            return NOp("ProdQTy", (self.carrier(t.fst), self.carrier(t.snd)),
                       (self._asq(a, t.fst), self._asq(b, t.snd)))
        raise TypeError(f"not a type: {t!r}")

    def _asq(self, q: Optional[NTerm], t: TypeExpr) -> NTerm:
        return q if q is not None else NTypeQ(self.carrier(t))

    def translate_type(self, t: TypeExpr) -> Image:
        q = self.qimage(t)
        if q is None:
            return self.carrier(t)
        return Quasitype(self.carrier(t), desugar(q), q)

    # ------------------------------------------------------------------
    # terms

    def translate_nterm(self, n: NTerm) -> NTerm:
        return _Tr(self).tr(n)

    def translate_expr(self, e: Expr) -> Expr:
        return desugar(self.translate_nterm(resugar(e)))

    def image_of(self, name: str, ty: TypeExpr) -> NTerm:
        im = self.const_map.get((name, ty))
        if im is not None:
            return im
        if (name, ty) in self.shared:
            return NConst(name, ty)
        raise MissingDependency([name])


_T = NOp("T", ())
_F = NOp("F", ())


class _Tr:
    def __init__(self, t: Translation):
        self.t = t
        self.missing: List[str] = []

    def tr(self, n: NTerm) -> NTerm:
        out = self._tr(n)
        if self.missing:
            raise MissingDependency(self.missing)
        return out

    def _tr(self, n: NTerm) -> NTerm:
        t = self.t
        k = type(n)
        if k is NVar:
            return NVar(n.name, t.carrier(n.ty))
        if k is NConst:
            try:
                return t.image_of(n.name, n.ty)
            except MissingDependency:
                self.missing.append(n.name)
                return NConst(n.name, t.carrier(n.ty))
        if k is NEq:
            return NEq(self._tr(n.lhs), self._tr(n.rhs))
        if k is NApp:
            return NApp(self._tr(n.fun), self._tr(n.arg))
        if k is NPair:
            return NPair(self._tr(n.fst), self._tr(n.snd))
        if k is NTypeQ:
            return self.univ_value(n.t)
        if k is NBind:
            return self.bind(n)
        if k is NBig:
            return NBig(self._tr(n.const), n.var, t.carrier(n.vty), self._tr(n.lo),
                        self._tr(n.hi), self._tr(n.body))
        if k is NOp:
            return self.op(n)
        raise TypeError(f"cannot translate {n!r}")

    # universal and empty sets in value position

    def univ_value(self, ty: TypeExpr) -> NTerm:
        q = self.t.qimage(ty)
        if q is None:
            return NTypeQ(self.t.carrier(ty))
        return NBind("lambda", "x", self.t.carrier(ty), q, _T)

    def empty_value(self, ty: TypeExpr) -> Optional[NTerm]:
        q = self.t.qimage(ty)
        if q is None:
            return None
        return NBind("lambda", "x", self.t.carrier(ty), q, _F)

    def bind(self, n: NBind) -> NTerm:
        t = self.t
        vty = t.carrier(n.vty)
        if n.dom is None:
            dom = t.qimage(n.vty)
        else:
            dom = self.qterm(n.dom)
        return NBind(n.kind, n.var, vty, dom, self._tr(n.body))

    def qterm(self, q: NTerm) -> NTerm:
        """A quasitype in domain or abbreviation position: a type stands
        for its own image."""
        if isinstance(q, NTypeQ):
            im = self.t.qimage(q.t)
            return im if im is not None else NTypeQ(self.t.carrier(q.t))
        if isinstance(q, NOp) and q.name == "UnivSet":
            return self.qterm(NTypeQ(q.targs[0]))
        return self._tr(q)

    def carrier_slot(self, q: NTerm) -> NTerm:
        if isinstance(q, NTypeQ):
            return NTypeQ(self.t.carrier(q.t))
        return self._tr(q)

    def op(self, n: NOp) -> NTerm:
        t = self.t
        d = reg.lookup(n.name)
        relativized = any(t.qimage(a) is not None for a in n.targs)
        if n.name == "UnivSet" and not n.args:
            return self.univ_value(n.targs[0])
        if n.name == "emptyset" and not n.args:
            e = self.empty_value(n.targs[0])
            if e is not None:
                return e
        if relativized and n.name in _EXPAND:
            return self._tr(_EXPAND[n.name](n))
        if n.name in _QCONS:
            args = tuple(self.carrier_slot(a) for a in n.args)
        elif n.name in _ABBREVIATIONS:
            args = tuple(self.qterm(a) if i in d.qslots else self._tr(a)
                         for i, a in enumerate(n.args))
        else:
            args = tuple(self._tr(a) for a in n.args)
        ctx = tuple(self._tr(c) for c in n.ctx)
        targs = tuple(t.carrier(a) for a in n.targs)
        if args:
            inferred = reg.infer_targs(d, [a.ty for a in args])
            if inferred is not None:
                targs = inferred
        return NOp(n.name, targs, args, ctx)


# one-level expansions used when a type parameter is relativized


def _x_total(n: NOp) -> NTerm:
    f = n.args[0]
    a, b = n.targs
    x = NVar("x", a)
    return NBind("forall", "x", a, None, NOp("isdef", (b,), (NApp(f, x),)))


def _x_subseteq(n: NOp) -> NTerm:
    s, u = n.args
    a = n.targs[0]
    x = NVar("x", a)
    return NBind("forall", "x", a, None,
                 NOp("implies", (), (NOp("in", (a,), (x, s)), NOp("in", (a,), (x, u)))))


def _x_ran(n: NOp) -> NTerm:
    a, b = n.targs
    f, x, y = NVar("f", FunTy(a, b)), NVar("x", a), NVar("y", b)
    return NBind("lambda", "f", FunTy(a, b), None,
                 NBind("setb", "y", b, None,
                       NBind("exists", "x", a, None, NEq(NApp(f, x), y))))


_EXPAND = {"TOTAL": _x_total, "subseteq": _x_subseteq, "ran": _x_ran}


def identity_translation(name: str, src: Theory, dst: Theory, hidden: bool = False) -> Translation:
    """The inclusion of src in dst: every base type and constant maps to
    itself."""
    missing_b = sorted(set(src.language.base_types) - set(dst.language.base_types))
    missing_c = [c for c in src.language.constants if c not in dst.language.constants]
    if missing_b or missing_c:
        raise TypeError(f"{src.name} is not included in {dst.name}: missing "
                        f"{missing_b + [c for c, _ in missing_c]}")
    tm = {b: BaseTy(b) for b in src.language.base_types}
    cm = {c: NConst(*c) for c in src.language.constants}
    return Translation(name, src, dst, tm, cm, inclusion=True, hidden=hidden)
