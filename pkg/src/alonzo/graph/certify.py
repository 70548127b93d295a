"""Obligations of a translation and their discharge.

A translation from S to T is a morphism when the images of the axioms of
S hold in T and the images of the constants and base types are well
formed there.  Each obligation is first tried syntactically (fast paths
for plain images, then matching against known axioms and theorems of the
target), then by the finite semantics, then by a trusted annotation on
the translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..errors import BudgetExceeded, MorphismRejected, NotFinitelyCheckable
from ..kernel import Abs, BaseTy, BoolTy, Eq, Expr, Var, alpha_eq, beta_reduce, substitute
from ..notation.nterm import NBind, NConst, NOp, NTerm, NTypeQ, desugar
from ..semantics import models
from ..semantics.program import AND, _bin, _forall
from .core import CheckedFinite, Development, ProofStatus, Refuted, Theory, Trusted
from .translate import Translation


@dataclass
class Obligation:
    index: int
    kind: str          # nonempty | defined | axiom
    origin: str        # base type, constant or axiom label
    nterm: Optional[NTerm]
    sentence: Optional[Expr]
    status: Optional[ProofStatus] = None
    route: str = ""

    @property
    def discharged(self) -> bool:
        return self.status is not None and self.status.discharged

    def to_json(self) -> dict:
        from ..notation.printer import show_nterm
        return {"index": self.index, "kind": self.kind, "origin": self.origin,
                "text": show_nterm(self.nterm) if self.nterm is not None else None,
                "route": self.route,
                "status": self.status.to_json() if self.status else None}


def obligations(t: Translation) -> List[Obligation]:
    out: List[Obligation] = []
    L = t.src.language
    for b in sorted(L.base_types):
        a = BaseTy(b)
        if t.qimage(a) is None:
            continue
        src = NOp("neq", (a,), (NOp("UnivSet", (a,)), NOp("emptyset", (a,))))
        n = t.translate_nterm(src)
        out.append(Obligation(len(out) + 1, "nonempty", b, n, desugar(n)))
    for (name, ty) in L.constants:
        src = NOp("isdefin", (ty,), (NConst(name, ty), NTypeQ(ty)))
        n = t.translate_nterm(src)
        out.append(Obligation(len(out) + 1, "defined", name, n, desugar(n)))
    for ax in t.src.axiom_list:
        if ax.opaque:
            out.append(Obligation(len(out) + 1, "axiom", ax.label, None, None))
            continue
        n = t.translate_nterm(ax.nterm)
        out.append(Obligation(len(out) + 1, "axiom", ax.label, n, desugar(n)))
    return out


def counts(obs: Sequence[Obligation]) -> Tuple[int, int, int]:
    return tuple(sum(1 for o in obs if o.kind == k) for k in ("nonempty", "defined", "axiom"))


# --------------------------------------------------------------------------
# syntactic discharge


def _fast_path(t: Translation, o: Obligation) -> Optional[str]:
    if o.kind != "defined":
        return None
    ty = o.nterm.args[0].ty
    if isinstance(ty, BoolTy):
        return "formula-image"
    if not isinstance(o.nterm.args[1], NTypeQ):
        return None  # the type of the constant maps to a quasitype
    img = o.nterm.args[0]
    if isinstance(img, NConst):
        return "constant-image"
    e = desugar(img)
    if isinstance(e, Abs) or isinstance(img, NBind) and img.kind in ("lambda", "setb"):
        return "abstraction-image"
    if isinstance(beta_reduce(e), Abs):
        return "beta-abstraction-image"
    return None


def _peel(e: Expr):
    """Strip a universal prefix, renaming the bound variables canonically."""
    tys = []
    while True:
        f = _forall(e)
        if f is None:
            return tys, e
        x, ty, body = f
        v = Var(f"\0{len(tys)}", ty)
        e = substitute(body, (x, ty), v)
        tys.append(ty)


def _conjuncts(e: Expr) -> List[Expr]:
    b = _bin(e)
    if b is not None and b[0] == AND:
        return _conjuncts(b[1]) + _conjuncts(b[2])
    return [e]


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        while self.p.get(x, x) != x:
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def entails(fact: Expr, goal: Expr) -> bool:
    """A cheap syntactic test that fact implies goal: alpha equivalence,
    or, under the same universal prefix, every equation of the goal
    follows from the equations of the fact by symmetry and transitivity."""
    if alpha_eq(fact, goal):
        return True
    tf, bf = _peel(fact)
    tg, bg = _peel(goal)
    if tf != tg:
        return False
    uf = _UF()
    facts = _conjuncts(bf)
    for c in facts:
        if isinstance(c, Eq):
            uf.union(c.lhs, c.rhs)
    for c in _conjuncts(bg):
        if any(alpha_eq(c, f) for f in facts):
            continue
        if not isinstance(c, Eq) or uf.find(c.lhs) != uf.find(c.rhs):
            return False
    return True


def _facts(theory: Theory, dev: Optional[Development]):
    out = [(a.label, a.sentence) for a in theory.axiom_list if not a.opaque]
    if dev is not None:
        out += [(p.label, p.sentence) for p in dev.theorems() if p.sentence is not None]
    return out


# --------------------------------------------------------------------------


def certify(t: Translation, dev: Optional[Development], sizes=(1, 2), policy="mixed",
            budget: Optional[int] = None) -> List[Obligation]:
    """Discharge every obligation of t or raise MorphismRejected.

    policy is "mixed" (syntactic, then finite at the given sizes, then the
    translation's trusted annotation), "finite" or "trusted-only"."""
    obs = obligations(t)
    facts = _facts(t.dst, dev)
    dst_opaque = {a.label for a in t.dst.axiom_list if a.opaque}
    top = dev.top_theory() if dev is not None else t.dst
    finite_ok = policy in ("mixed", "finite") and getattr(top, "finite", False)
    for o in obs:
        if o.sentence is None:
            if o.origin in dst_opaque:
                o.status, o.route = Trusted(f"inclusion:{o.origin}"), "inclusion"
            continue
        route = _fast_path(t, o)
        if route:
            o.status, o.route = Trusted(route), route
            continue
        hit = next((lbl for lbl, s in facts if entails(s, o.sentence)), None)
        if hit is not None:
            o.status, o.route = Trusted(f"syntactic:{hit}"), "syntactic"
            continue
        if finite_ok:
            o.status, o.route = _finite(top, o.sentence, sizes, budget)
            if o.status is not None and o.status.kind == "Refuted":
                continue
    failures = []
    for o in obs:
        if o.discharged:
            continue
        if o.status is not None and o.status.kind == "Refuted":
            failures.append(o)
            continue
        if policy in ("mixed", "trusted-only") and t.trusted:
            o.status, o.route = Trusted(t.trusted), "annotation"
            continue
        failures.append(o)
    if failures:
        err = MorphismRejected(t.name, failures)
        err.obligations = obs
        raise err
    return obs


MAX_ESCALATION = 4


def _finite(top, sentence: Expr, sizes, budget):
    """Checks at each size.  When none of them has a model the check is
    vacuous, so larger uniform sizes are tried, up to MAX_ESCALATION,
    until one does; with no model anywhere nothing is discharged."""
    requested = list(sizes)
    larger = []
    if all(isinstance(k, int) for k in requested):
        larger = list(range(max(requested, default=0) + 1, MAX_ESCALATION + 1))
    checked, n = [], 0
    for k in requested + larger:
        if n and k in larger:
            break
        try:
            r = models.check_validity_at_scale(top, sentence, k, budget=budget)
        except BudgetExceeded:
            break
        except NotFinitelyCheckable:
            return None, ""
        if not r.ok:
            return Refuted(r.countermodel.to_json()), "finite"
        checked.append(tuple(sorted(r.sizes.items())))
        n += r.models_checked
    if not n:
        return None, ""
    return CheckedFinite(tuple(checked), n), "finite"
